#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "hmrf/graph.hpp"
#include "hmrf/hypergraph.hpp"
#include "hmrf/interaction.hpp"
#include "hmrf/models.hpp"

namespace hmrf {

/// h_Lambda(sigma): product of h_e over edges meeting the volume. `config`
/// must cover every vertex of those edges.
double h_volume(const Hypergraph& h, const InteractionModel& model, std::span<const VertexId> volume,
                const Configuration& config);

/// Region Delta containing the volume, and the configuration omega held fixed
/// outside it. Boundary vertices outside Delta read omega instead of sigma.
struct FrozenRegion {
  std::vector<VertexId> delta;
  Configuration omega;
};

enum class ExactEngine { Auto, BruteForce, Elimination };

struct KernelOptions {
  ExactEngine engine = ExactEngine::Auto;
  /// Brute force is allowed while |S|^|Lambda| <= 2^max_log2_terms.
  std::size_t max_log2_terms = 24;
  /// Auto switches to elimination above this many brute-force terms.
  std::size_t auto_log2_terms = 16;
  std::size_t threads = 1;
};

/// Finite-volume kernel with a fixed boundary: log Z and every one-point marginal.
struct VolumeKernel {
  std::vector<VertexId> volume;     // sorted
  double log_z = 0.0;               // log of sum_xi chi^Lambda(xi) h_Lambda(xi sigma) / scale
  Eigen::MatrixXd marginals;        // |Lambda| x |S|
  std::string engine;

  /// Row of vertex x; throws std::out_of_range when x is outside the volume.
  Eigen::Index row(VertexId x) const;
};

/// Probability gamma_Lambda^{Delta,omega}(sigma_x in A | sigma).
struct EventProbability {
  double probability = 0.0;
  double log_z = 0.0;
};

EventProbability exact_kernel(const Hypergraph& h, const InteractionModel& model, std::span<const VertexId> volume,
                              const Configuration& boundary, VertexId x, std::span<const SpinState> event,
                              const std::optional<FrozenRegion>& frozen = std::nullopt,
                              const KernelOptions& options = {});

VolumeKernel exact_marginals(const Hypergraph& h, const InteractionModel& model, std::span<const VertexId> volume,
                             const Configuration& boundary,
                             const std::optional<FrozenRegion>& frozen = std::nullopt,
                             const KernelOptions& options = {});

/// gamma_Lambda(xi | sigma) for one configuration xi of the volume (brute force).
double configuration_probability(const Hypergraph& h, const InteractionModel& model,
                                 std::span<const VertexId> volume, const Configuration& boundary,
                                 const Configuration& xi);

struct SamplerOptions {
  std::size_t sweeps = 10000;
  std::size_t burn_in = 0;          // 0: sweeps / 10
  std::size_t batches = 20;
  std::uint64_t seed = 0;
};

struct SamplerResult {
  std::vector<VertexId> volume;
  Eigen::MatrixXd marginals;
  Eigen::MatrixXd standard_errors;  // batch means
  std::size_t sweeps = 0;
  std::size_t burn_in = 0;
};

/// Sequential single-site heat bath on the volume with the boundary held fixed.
SamplerResult gibbs_sampler(const Hypergraph& h, const InteractionModel& model, std::span<const VertexId> volume,
                            const Configuration& boundary, const SamplerOptions& options);

/// max over vertices of the total-variation distance between two marginal tables.
double max_total_variation(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q);

enum class SensitivityMode { ExactSup, RandomSearch };

struct SensitivityOptions {
  SensitivityMode mode = SensitivityMode::ExactSup;
  /// Full enumeration of boundary configurations while their number is at most this.
  std::size_t enumeration_limit = std::size_t{1} << 16;
  /// Skip enumeration and use the all-plus / all-minus extremes (requires the
  /// conditions under which that shortcut is exact).
  bool prefer_monotone = false;
  std::size_t samples = 256;        // random-search draws
  std::uint64_t seed = 0;
  KernelOptions kernel;
  std::optional<FrozenRegion> frozen;
};

struct SensitivityResult {
  double value = 0.0;               // M = max - min over boundary configurations
  double p_max = 0.0;
  double p_min = 0.0;
  bool exact = false;               // false: a lower bound from random search
  std::string method;               // enumeration | monotone | random-search
  std::size_t volume_size = 0;
  std::size_t boundary_size = 0;
  std::size_t evaluations = 0;
  std::string engine;
};

/// True when spins are binary and every factor is log-supermodular, so that
/// one-point up-set probabilities are monotone in the boundary.
bool is_ferromagnetic(const InteractionModel& model);

/// M_{x,r}(A) on Lambda_{x,r} = <B_r(e_x)> with boundary <S_{r+1}(e_x)> minus Lambda.
SensitivityResult boundary_sensitivity(const Hypergraph& h, const InteractionModel& model, VertexId x, EdgeId e_x,
                                       std::size_t r, std::span<const SpinState> event,
                                       const SensitivityOptions& options = {});

/// 2 (e^eps - 1)^{-1} e^{-eps N}.
double sensitivity_envelope(double epsilon, std::size_t n);

struct GammaBoundReport {
  bool passed = true;
  std::size_t pairs_checked = 0;
  std::vector<double> max_gamma;    // per edge
  std::vector<double> bound;        // per edge: e^{2 delta} - 1
  double worst_slack = 0.0;         // min over edges of bound - max_gamma
  nlohmann::json witness = nullptr;
};

/// For every edge and every pair (xi, eta): 0 <= hbar(xi) hbar(eta) - 1 <= e^{2 delta(e)} - 1
/// with hbar = h / m. Exhaustive over pairs up to `pair_limit` entries per table.
GammaBoundReport gamma_factor_bound_check(const InteractionModel& model, double tolerance = 1e-12,
                                          std::size_t pair_limit = 1024);

struct DisorderRow {
  std::size_t k = 0;
  std::size_t radius = 0;           // N_k
  double mean = 0.0;
  double standard_error = 0.0;
  double envelope = 0.0;            // (e^abar tau)^{N_k} / (1 - e^abar tau), +inf when e^abar tau >= 1
  std::size_t paths = 0;
};

struct DisorderReport {
  double tau = 0.0;
  double k_star = 0.0;
  bool above_threshold = false;     // K >= K*: envelope does not apply
  std::vector<DisorderRow> rows;
};

/// Path sums X_k = sum over Theta_{N_k}(root) of prod_{e on path} (e^{2 K c_e} - 1)
/// over independent replicas of the amplitudes.
DisorderReport disorder_decay_experiment(const SimpleGraph& line_graph, NodeId root, const RandomInteractionSpec& spec,
                                         std::span<const std::size_t> schedule, std::size_t replicas, double abar,
                                         std::size_t max_paths = std::size_t{1} << 22);

}  // namespace hmrf
