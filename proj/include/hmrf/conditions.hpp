#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hmrf/enumeration.hpp"
#include "hmrf/graph.hpp"
#include "hmrf/growth.hpp"
#include "hmrf/hypergraph.hpp"
#include "hmrf/interaction.hpp"
#include "hmrf/line_graph.hpp"

namespace hmrf {

enum class Criterion { Dobrushin, TemperedMain, ExplicitKappa, PhiClass };
enum class Verdict { Holds, Fails, HoldsToDepth, Inconclusive };

std::string to_string(Criterion c);
std::string to_string(Verdict v);
Criterion criterion_from_string(const std::string& name);

/// CLI convention: 0 holds / holds-to-depth, 1 fails, 2 inconclusive.
int exit_code(Verdict v);

struct ConditionReport {
  Criterion criterion = Criterion::Dobrushin;
  Verdict verdict = Verdict::Inconclusive;
  double supremum = 0.0;     // the quantity compared against the threshold
  double threshold = 0.0;
  double margin = 0.0;       // positive when the criterion holds
  nlohmann::json witness = nullptr;
  std::size_t depth = 0;
  std::size_t budget_used = 0;
  nlohmann::json details = nlohmann::json::object();

  bool holds() const { return verdict == Verdict::Holds || verdict == Verdict::HoldsToDepth; }
};

void to_json(nlohmann::json& j, const ConditionReport& r);

/// Strictly increasing radius sequence {N_k}, shared by all nodes unless a
/// node has its own override.
class RadiusSchedule {
public:
  RadiusSchedule() = default;
  explicit RadiusSchedule(std::vector<std::size_t> radii);
  /// N_k = k for k = 1..k_max.
  static RadiusSchedule linear(std::size_t k_max);

  void set_node(NodeId v, std::vector<std::size_t> radii);
  std::span<const std::size_t> for_node(NodeId v) const;
  const std::vector<std::size_t>& radii() const { return radii_; }

private:
  static void check(const std::vector<std::size_t>& radii);

  std::vector<std::size_t> radii_;
  std::map<NodeId, std::vector<std::size_t>> overrides_;
};

struct AnimalWitness {
  NodeId probe = 0;
  std::size_t radius = 0;
  std::vector<NodeId> animal;
  double average = 0.0;
};

struct TemperednessCertificate {
  enum class Status { VerifiedToDepth, ClosedForm, Refuted, Inconclusive };

  GrowthFunction g = GrowthFunction::log();
  double abar = 0.0;
  RadiusSchedule schedule;
  Status status = Status::Inconclusive;
  std::size_t depth = 0;         // largest N_k examined
  double observed_max = 0.0;     // max animal average seen
  std::optional<AnimalWitness> witness;  // extremal (or refuting) animal
  std::size_t budget_used = 0;
  std::string note;

  bool usable() const { return status == Status::VerifiedToDepth || status == Status::ClosedForm; }
};

std::string to_string(TemperednessCertificate::Status s);
void to_json(nlohmann::json& j, const TemperednessCertificate& c);

/// Settings shared by the exhaustive, truncation-based checks.
struct ProbeOptions {
  std::size_t depth_cap = 3;
  std::vector<NodeId> probes;          // empty: every node
  std::vector<std::size_t> degrees;    // empty: degrees of the (truncated) graph
  std::size_t threads = 1;
};

/// sup_x sum_{e in E_x} (|e| - 1) delta(e) < 2.
ConditionReport dobrushin_check(const Hypergraph& h, const InteractionBounds& bounds);

struct CertifyOptions : ProbeOptions {
  std::optional<double> abar;          // unset: adopt the observed maximum
  std::size_t size_cap = 0;            // 0: no cap beyond the ball
  double tolerance = 1e-12;
};

/// Exhaustive max of the animal average over A_{N_k}(e) for each probe e and
/// each N_k <= depth_cap. Refutes at the first animal exceeding abar.
TemperednessCertificate certify_temperedness(const SimpleGraph& g, const GrowthFunction& growth,
                                             const RadiusSchedule& schedule, const CertifyOptions& options,
                                             ExpansionBudget& budget);

/// Sequence t_k (k >= 1) stored through log t_k.
class IndexSequence {
public:
  /// t_k = exp(base^k)
  static IndexSequence double_exponential(double base);
  /// t_k = base^k
  static IndexSequence geometric(double base);

  double log_at(std::size_t k) const;
  std::string name() const;

private:
  enum class Kind { DoubleExponential, Geometric };
  IndexSequence(Kind kind, double base) : kind_(kind), base_(base) {}
  Kind kind_;
  double base_;
};

struct HubViolation {
  NodeId first = 0;
  NodeId second = 0;
  Distance distance;
  double required = 0.0;
};

struct PhiClassResult {
  double bbar = 0.0;
  bool bbar_is_lower_bound = false;
  double partial_sum = 0.0;
  double tail = 0.0;
  std::optional<double> ratio;         // geometric ratio of the series, when detected
  std::vector<HubViolation> violations;
  TemperednessCertificate certificate;
};

struct PhiClassOptions {
  GrowthFunction phi = GrowthFunction::log_squared();
  GrowthFunction g = GrowthFunction::log();
  IndexSequence t = IndexSequence::double_exponential(2.0);
  std::size_t terms = 30;
  std::size_t hub_threshold = 2;       // n_*
  std::vector<std::size_t> degrees;    // empty: graph degrees
  std::size_t max_violations = 32;
};

/// Hub separation d(e, e') >= phi(min degree) on the truncation plus the
/// series b = sum_k g(t_{k+1}) / phi(t_k); certificate abar = 2 b.
PhiClassResult phi_class_certificate(const SimpleGraph& g, const PhiClassOptions& options);

struct MainCheckOptions : ProbeOptions {
  double epsilon = 0.1;
  std::size_t patience = 0;            // 0: always exhaust the ball
};

/// sup over probes e and N_k <= depth_cap of max_{paths in Theta_{N_k}(e)} of
/// the path oscillation average, compared against -(abar + epsilon).
ConditionReport main_uniqueness_check(const SimpleGraph& g, const InteractionBounds& bounds,
                                      const TemperednessCertificate& cert, const MainCheckOptions& options,
                                      ExpansionBudget& budget);

/// delta(e) <= kappa [abar + g(n_L(e))] on every edge, kappa = exp(-7 abar - epsilon).
ConditionReport explicit_kappa_check(const SimpleGraph& g, const InteractionBounds& bounds,
                                     const TemperednessCertificate& cert, double epsilon,
                                     std::span<const std::size_t> degrees = {});

/// Largest coupling for which the Dobrushin sum stays below 2 on the overlapping
/// cliques tree with constant edge size n and per-edge amplitude c: 1 / (c (n - 1)).
double dobrushin_threshold(std::size_t n, double c);

/// Coupling below which the path condition holds on an n-regular line tree
/// with constant delta = K c, as epsilon -> 0: (1 / 2c) log((n + 1) / n).
double tree_threshold(std::size_t n, double c);

/// Closed-form path condition on an n-regular line tree with constant delta.
ConditionReport closed_form_tree_check(std::size_t n, double delta, double epsilon);

}  // namespace hmrf
