#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hmrf/graph.hpp"
#include "hmrf/growth.hpp"
#include "hmrf/hypergraph.hpp"
#include "hmrf/interaction.hpp"

namespace hmrf {

/// Piecewise-constant degree schedule: n_m = base_degrees[s] on the plateau
/// m_s <= m < m_s + plateau_lengths[s], with m_1 = 1. The last plateau extends
/// indefinitely. Valid when l_s >= phi(n_{m_s}) for every s.
struct CliqueSchedule {
  std::vector<std::size_t> base_degrees;
  std::vector<std::size_t> plateau_lengths;
  GrowthFunction phi = GrowthFunction::log_squared();
};

struct CliqueTreeSpec {
  std::vector<std::size_t> degrees;        // explicit n_1, n_2, ...; the last entry repeats
  std::optional<CliqueSchedule> schedule;  // used when degrees is empty
  std::size_t depth = 1;

  /// n_1..n_depth. Throws std::invalid_argument naming the offending entry.
  std::vector<std::size_t> resolved_degrees() const;
  void validate() const { (void)resolved_degrees(); }
};

/// Overlapping-cliques hypergraph: root edge of n_1 vertices; every vertex of a
/// depth-m edge other than the one shared with its parent starts one
/// depth-(m+1) edge of n_{m+1} vertices. Edge ids are breadth-first.
struct CliqueTree {
  Hypergraph hypergraph;
  std::vector<std::size_t> edge_depth;     // 1 for the root edge
};

CliqueTree build_overlapping_cliques(const CliqueTreeSpec& spec);

/// c_e = (|e| - 1) / 2 + floor(|e| / 2) / |e|.
double curie_weiss_oscillation(std::size_t edge_size);

/// Largest edge accepted by curie_weiss_factor_table.
inline constexpr std::size_t kCurieWeissTableCap = 20;

/// h_e(sigma) = exp(K / |e| * sum_{i<j} sigma_i sigma_j) over {-1, +1}^e, with
/// state 0 = -1 and state 1 = +1. Throws std::length_error above the cap.
FactorTable curie_weiss_factor_table(std::size_t edge_size, double coupling);

/// Curie-Weiss factors on every edge with a common coupling K.
InteractionModel curie_weiss_model(const Hypergraph& h, double coupling);

/// Curie-Weiss factors rescaled so that delta(e) = K c_e for given amplitudes.
InteractionModel curie_weiss_model(const Hypergraph& h, double coupling, const std::vector<double>& amplitudes);

/// Law of the amplitudes c_e. Only families with every exponential moment
/// finite on a known domain are offered.
class AmplitudeDistribution {
public:
  enum class Kind { Exponential, Uniform, Degenerate };

  static AmplitudeDistribution exponential(double rate);
  static AmplitudeDistribution uniform(double lo, double hi);
  static AmplitudeDistribution degenerate(double value);

  Kind kind() const { return kind_; }
  double first() const { return a_; }
  double second() const { return b_; }
  std::string name() const;
  double mean() const;
  double variance() const;

  /// Inverse-CDF draw from a uniform u in (0, 1).
  double quantile(double u) const;
  /// Supremum of couplings K with E exp(2 K c) finite (+inf when unbounded).
  double coupling_limit() const;
  /// tau(K) = E[exp(2 K c) - 1]. Throws std::domain_error outside the moment domain.
  double tau(double coupling) const;

  friend void to_json(nlohmann::json& j, const AmplitudeDistribution& d);
  friend void from_json(const nlohmann::json& j, AmplitudeDistribution& d);

private:
  AmplitudeDistribution(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  Kind kind_ = Kind::Degenerate;
  double a_ = 0.0;
  double b_ = 0.0;
};

struct RandomInteractionSpec {
  AmplitudeDistribution distribution = AmplitudeDistribution::degenerate(1.0);
  double coupling = 0.0;
  std::uint64_t seed = 0;
};

/// Uniform in (0, 1) from a counter-based hash of (seed, stream, counter).
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// c_e for edge ids 0..num_edges-1, each keyed only by (seed, edge id).
std::vector<double> sample_amplitudes(std::size_t num_edges, const RandomInteractionSpec& spec);

/// delta(e) = K c_e with i.i.d. c_e.
InteractionBounds sample_random_interactions(const Hypergraph& h, const RandomInteractionSpec& spec);

struct DisorderThreshold {
  double target = 0.0;            // exp(-abar)
  double k_star = 0.0;            // +inf when tau never reaches the target
  std::size_t iterations = 0;
};

/// Solves tau(K*) = exp(-abar) by bisection to `tolerance` in K.
DisorderThreshold tau_threshold(const AmplitudeDistribution& d, double abar, double tolerance = 1e-12);

// ------------------------------------------------------------------ graphs

/// Rooted tree in which every node has degree n (root: n children), depth
/// levels below the root.
SimpleGraph regular_tree(std::size_t n, std::size_t depth);

/// Truncation of the rooted tree where a node at distance l from the root has
/// degree (l + 1)!. Levels up to `full_depth` are complete; below that only
/// the first `fanout_cap` children of each node are kept, down to
/// `spine_depth`. Every node carries its nominal degree.
struct FactorialTree {
  SimpleGraph graph;
  std::vector<std::size_t> nominal_degree;
  std::vector<std::size_t> level;
};

FactorialTree factorial_tree(std::size_t full_depth, std::size_t spine_depth, std::size_t fanout_cap = 3);

/// Random tree on `num_nodes` nodes with every degree <= max_degree.
SimpleGraph random_tree(std::size_t num_nodes, std::size_t max_degree, std::uint64_t seed);

// ------------------------------------------------------------------ spec files

/// Model description read by the command-line tool. family "cliques" uses the
/// degree fields; family "hypergraph" takes explicit edges.
struct ModelSpec {
  std::string family = "cliques";
  CliqueTreeSpec cliques;
  std::vector<std::vector<VertexId>> edges;
  std::string interaction = "curie-weiss";   // curie-weiss | independent | custom-table
  std::map<std::size_t, std::vector<double>> tables;  // custom-table: Ising table per edge size
  double coupling = 0.0;
  std::optional<AmplitudeDistribution> distribution;
  std::uint64_t seed = 0;
};

void to_json(nlohmann::json& j, const ModelSpec& s);
void from_json(const nlohmann::json& j, ModelSpec& s);

struct BuiltModel {
  Hypergraph hypergraph;
  InteractionModel interactions;
  std::vector<std::size_t> edge_depth;     // empty unless family is cliques
  std::vector<double> amplitudes;          // c_e, empty without a distribution
};

BuiltModel build_model(const ModelSpec& spec);

}  // namespace hmrf
