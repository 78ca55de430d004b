#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "hmrf/hypergraph.hpp"

namespace hmrf {

using SpinState = std::uint8_t;

/// Finite single-spin space with a strictly positive reference measure chi.
class SpinSpace {
public:
  SpinSpace(std::vector<double> values, Eigen::ArrayXd weights);

  static SpinSpace ising();  // {-1, +1}, uniform
  static SpinSpace uniform(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  const Eigen::ArrayXd& weights() const { return weights_; }
  double weight(SpinState s) const { return weights_(s); }
  /// Index of a spin value; throws std::invalid_argument when absent.
  SpinState index_of(double value) const;
  /// chi(A) for a set of state indices.
  double measure(std::span<const SpinState> subset) const;

private:
  std::vector<double> values_;
  Eigen::ArrayXd weights_;
};

/// Values of one edge factor h_e over S^e. Entry index is mixed radix over the
/// edge's sorted vertices, first vertex most significant.
class FactorTable {
public:
  FactorTable(std::size_t arity, std::size_t num_states, Eigen::ArrayXd values);

  static FactorTable constant(std::size_t arity, std::size_t num_states, double value = 1.0);

  std::size_t arity() const { return arity_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t num_entries() const { return static_cast<std::size_t>(values_.size()); }
  const Eigen::ArrayXd& values() const { return values_; }

  double operator[](std::size_t index) const { return values_(static_cast<Eigen::Index>(index)); }
  double at(std::span<const SpinState> states) const;
  std::size_t index(std::span<const SpinState> states) const;
  /// Inverse of index().
  std::vector<SpinState> states(std::size_t index) const;

  double min() const { return values_.minCoeff(); }
  double max() const { return values_.maxCoeff(); }

  FactorTable scaled(double factor) const;

private:
  std::size_t arity_;
  std::size_t num_states_;
  Eigen::ArrayXd values_;
};

/// Per-edge bounds m_e <= h_e <= M_e and oscillation delta(e) = log(M_e / m_e).
struct InteractionBounds {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> delta;

  static InteractionBounds from_oscillations(std::vector<double> delta);
  static InteractionBounds from_extrema(std::vector<double> lower, std::vector<double> upper);

  std::size_t size() const { return delta.size(); }
};

/// Factor tables for every edge of a hypergraph, over one spin space.
struct InteractionModel {
  SpinSpace spins = SpinSpace::ising();
  std::vector<FactorTable> tables;  // indexed by EdgeId

  /// Throws std::invalid_argument unless tables match the edges of h.
  void validate(const Hypergraph& h) const;
  InteractionBounds bounds() const;
  /// True when every table is constant.
  bool is_independent() const;
};

/// Independent model: every factor is 1.
InteractionModel independent_model(const Hypergraph& h, SpinSpace spins = SpinSpace::ising());

/// Assignment of spin states to the vertices of a support set.
class Configuration {
public:
  Configuration() = default;
  Configuration(std::span<const VertexId> support, std::span<const SpinState> states);
  static Configuration uniform(std::span<const VertexId> support, SpinState state);

  void set(VertexId x, SpinState s) { states_[x] = s; }
  bool contains(VertexId x) const { return states_.contains(x); }
  /// Throws std::out_of_range when x is not in the support.
  SpinState at(VertexId x) const;
  std::size_t size() const { return states_.size(); }
  const std::map<VertexId, SpinState>& entries() const { return states_; }

  bool operator==(const Configuration&) const = default;

private:
  std::map<VertexId, SpinState> states_;
};

void to_json(nlohmann::json& j, const InteractionBounds& b);

}  // namespace hmrf
