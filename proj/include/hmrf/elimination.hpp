#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hmrf/hypergraph.hpp"

namespace hmrf {

/// Running log(sum exp(w_i)) with Neumaier-compensated accumulation of the
/// scaled terms. Adding the same terms in the same order is bit-reproducible.
class LogSumAccumulator {
public:
  void add(double log_term);
  void merge(const LogSumAccumulator& other);
  /// -infinity when nothing was added.
  double value() const;
  bool empty() const { return !started_; }

private:
  void rescale(double new_max);

  bool started_ = false;
  double max_ = 0.0;
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double log_sum_exp(const Eigen::ArrayXd& values);

/// Nonnegative function on the product of the variables' state spaces, stored
/// as logarithms. Index is mixed radix with the first scope variable most
/// significant.
struct LogFactor {
  std::vector<VertexId> scope;      // sorted, distinct
  std::vector<std::size_t> cards;   // states per scope variable
  Eigen::ArrayXd values;

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
};

LogFactor multiply(const LogFactor& a, const LogFactor& b);
LogFactor sum_out(const LogFactor& f, VertexId v);

/// Multiplies the factors and sums out every variable not in `keep`, choosing
/// the elimination order greedily by the size of the intermediate table.
/// Throws std::length_error when an intermediate table would exceed `max_table`.
LogFactor eliminate_all_but(std::vector<LogFactor> factors, std::span<const VertexId> keep,
                            std::size_t max_table = std::size_t{1} << 24);

}  // namespace hmrf
