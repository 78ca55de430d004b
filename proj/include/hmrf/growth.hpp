#pragma once

#include <cstddef>
#include <map>
#include <string>

#include <json.hpp>

namespace hmrf {

/// Monotone function of a natural argument used both as the degree-growth
/// weight g and as the hub-separation profile phi.
///
/// Every function can be evaluated from log t, which keeps sequences such as
/// t_k = exp(a^k) usable long after t itself overflows a double.
class GrowthFunction {
public:
  enum class Kind { Log, Linear, LogSquared, Square, Constant, Table };

  static GrowthFunction log(double offset = 0.0) { return {Kind::Log, offset}; }
  static GrowthFunction linear(double offset = 0.0) { return {Kind::Linear, offset}; }
  static GrowthFunction log_squared() { return {Kind::LogSquared, 0.0}; }
  static GrowthFunction square() { return {Kind::Square, 0.0}; }
  static GrowthFunction constant(double value) { return {Kind::Constant, value}; }
  /// Values at listed arguments; queries between entries use the largest key <= t.
  static GrowthFunction table(std::map<std::size_t, double> values);

  Kind kind() const { return kind_; }
  std::string name() const;

  /// g(t). Throws std::domain_error for log-type kinds at t == 0.
  double operator()(std::size_t t) const;
  /// g(exp(log_t)).
  double from_log(double log_t) const;

  /// Samples t = lo..hi and reports whether g is strictly increasing there.
  bool strictly_increasing_on(std::size_t lo, std::size_t hi) const;

  friend void to_json(nlohmann::json& j, const GrowthFunction& g);
  friend void from_json(const nlohmann::json& j, GrowthFunction& g);

private:
  GrowthFunction(Kind kind, double param) : kind_(kind), param_(param) {}

  Kind kind_ = Kind::Log;
  double param_ = 0.0;
  std::map<std::size_t, double> table_;
};

}  // namespace hmrf
