#include "hmrf/conditions.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "parallel.hpp"

namespace hmrf {

namespace {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

nlohmann::json json_real(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "+inf" : "-inf";
}

std::vector<NodeId> probe_list(const SimpleGraph& g, const ProbeOptions& options) {
  if (!options.probes.empty()) {
    for (NodeId v : options.probes)
      if (v >= g.size()) throw std::out_of_range("probe node out of range");
    return options.probes;
  }
  std::vector<NodeId> all(g.size());
  for (NodeId v = 0; v < g.size(); ++v) all[v] = v;
  return all;
}

std::vector<std::size_t> degree_vector(const SimpleGraph& g, const std::vector<std::size_t>& given) {
  if (given.empty()) return g.degrees();
  if (given.size() != g.size()) throw std::invalid_argument("degree vector must cover every node");
  return given;
}

}  // namespace

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::Dobrushin: return "dobrushin";
    case Criterion::TemperedMain: return "tempered-main";
    case Criterion::ExplicitKappa: return "explicit-kappa";
    case Criterion::PhiClass: return "phi-class";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::HoldsToDepth: return "holds-to-depth";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

Criterion criterion_from_string(const std::string& name) {
  for (auto c : {Criterion::Dobrushin, Criterion::TemperedMain, Criterion::ExplicitKappa, Criterion::PhiClass})
    if (to_string(c) == name) return c;
  throw std::invalid_argument("unknown criterion '" + name + "'");
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Holds:
    case Verdict::HoldsToDepth: return 0;
    case Verdict::Fails: return 1;
    case Verdict::Inconclusive: return 2;
  }
  return 2;
}

void to_json(nlohmann::json& j, const ConditionReport& r) {
  j = {{"criterion", to_string(r.criterion)},
       {"verdict", to_string(r.verdict)},
       {"margin", json_real(r.margin)},
       {"supremum", json_real(r.supremum)},
       {"threshold", json_real(r.threshold)},
       {"witness", r.witness},
       {"depth", r.depth},
       {"budget_used", r.budget_used},
       {"details", r.details}};
}

// ---------------------------------------------------------------- schedules

RadiusSchedule::RadiusSchedule(std::vector<std::size_t> radii) : radii_(std::move(radii)) { check(radii_); }

RadiusSchedule RadiusSchedule::linear(std::size_t k_max) {
  std::vector<std::size_t> radii(k_max);
  for (std::size_t k = 0; k < k_max; ++k) radii[k] = k + 1;
  return RadiusSchedule(std::move(radii));
}

void RadiusSchedule::check(const std::vector<std::size_t>& radii) {
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (radii[k] <= radii[k - 1]) throw std::invalid_argument("radius schedule must be strictly increasing");
}

void RadiusSchedule::set_node(NodeId v, std::vector<std::size_t> radii) {
  check(radii);
  overrides_[v] = std::move(radii);
}

std::span<const std::size_t> RadiusSchedule::for_node(NodeId v) const {
  if (auto it = overrides_.find(v); it != overrides_.end()) return it->second;
  return radii_;
}

std::string to_string(TemperednessCertificate::Status s) {
  using S = TemperednessCertificate::Status;
  switch (s) {
    case S::VerifiedToDepth: return "verified-to-depth";
    case S::ClosedForm: return "closed-form";
    case S::Refuted: return "refuted";
    case S::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

void to_json(nlohmann::json& j, const TemperednessCertificate& c) {
  j = {{"g", c.g},
       {"abar", json_real(c.abar)},
       {"schedule", c.schedule.radii()},
       {"status", to_string(c.status)},
       {"depth", c.depth},
       {"observed_max", json_real(c.observed_max)},
       {"budget_used", c.budget_used}};
  if (!c.note.empty()) j["note"] = c.note;
  if (c.witness)
    j["witness"] = {{"probe", c.witness->probe},
                    {"radius", c.witness->radius},
                    {"animal", c.witness->animal},
                    {"average", c.witness->average}};
}

// ---------------------------------------------------------------- Dobrushin

ConditionReport dobrushin_check(const Hypergraph& h, const InteractionBounds& bounds) {
  if (bounds.size() != h.num_edges())
    throw std::invalid_argument("interaction bounds cover " + std::to_string(bounds.size()) + " of " +
                                std::to_string(h.num_edges()) + " edges");
  ConditionReport report;
  report.criterion = Criterion::Dobrushin;
  report.threshold = 2.0;
  report.supremum = 0.0;
  std::optional<VertexId> argmax;
  for (VertexId x : h.vertices()) {
    double sum = 0.0;
    for (EdgeId e : h.edge_neighborhood(x))
      sum += static_cast<double>(h.edge(e).size() - 1) * bounds.delta[e];
    if (!argmax || sum > report.supremum) {
      report.supremum = sum;
      argmax = x;
    }
  }
  report.margin = report.threshold - report.supremum;
  report.verdict = report.supremum < report.threshold ? Verdict::HoldsToDepth : Verdict::Fails;
  if (argmax) report.witness = {{"vertex", *argmax}, {"sum", report.supremum}};
  report.details["num_vertices"] = h.num_vertices();
  return report;
}

// ---------------------------------------------------------------- temperedness

TemperednessCertificate certify_temperedness(const SimpleGraph& g, const GrowthFunction& growth,
                                             const RadiusSchedule& schedule, const CertifyOptions& options,
                                             ExpansionBudget& budget) {
  using Status = TemperednessCertificate::Status;
  const auto probes = probe_list(g, options);
  const auto degrees = degree_vector(g, options.degrees);

  std::vector<double> weight(g.size());
  for (NodeId v = 0; v < g.size(); ++v) weight[v] = degrees[v] == 0 ? kMinusInf : growth(degrees[v]);

  struct ProbeResult {
    double max = kMinusInf;
    std::optional<AnimalWitness> best;
    bool refuted = false;
    bool incomplete = false;
    std::size_t depth = 0;
  };
  std::vector<ProbeResult> results(probes.size());
  std::atomic<bool> stop{false};
  const double limit = options.abar ? *options.abar + options.tolerance * std::max(1.0, std::abs(*options.abar))
                                    : std::numeric_limits<double>::infinity();

  detail::parallel_for(probes.size(), options.threads, [&](std::size_t i) {
    const NodeId probe = probes[i];
    auto radii = schedule.for_node(probe);
    if (radii.empty()) throw std::invalid_argument("radius schedule is empty for node " + std::to_string(probe));
    ProbeResult& out = results[i];
    for (std::size_t radius : radii) {
      if (radius > options.depth_cap || stop.load()) break;
      const std::size_t ball_size = g.ball(probe, radius).size();
      std::size_t cap = options.size_cap == 0 ? ball_size : std::min(options.size_cap, ball_size);
      out.depth = radius;
      if (cap < radius + 1) continue;  // A_r(e) is empty on this truncation
      auto status = enumerate_animals(
          g, probe, radius, cap,
          [&](std::span<const NodeId> animal) {
            double avg = 0.0;
            for (NodeId v : animal) {
              if (degrees[v] == 0) throw std::domain_error("animal contains a node of degree 0");
              avg += weight[v];
            }
            avg /= static_cast<double>(animal.size());
            if (avg > out.max) {
              out.max = avg;
              out.best = AnimalWitness{probe, radius, std::vector<NodeId>(animal.begin(), animal.end()), avg};
            }
            if (avg > limit) {
              out.refuted = true;
              stop.store(true);
              return false;
            }
            return !stop.load();
          },
          budget, weight);
      if (status.budget_exhausted || status.size_capped) out.incomplete = true;
      if (out.refuted || status.budget_exhausted) break;
    }
  });

  TemperednessCertificate cert;
  cert.g = growth;
  cert.schedule = schedule;
  cert.observed_max = kMinusInf;
  bool incomplete = false;
  for (const auto& r : results) {
    cert.depth = std::max(cert.depth, r.depth);
    incomplete = incomplete || r.incomplete;
    if (r.refuted && (!cert.witness || cert.status != Status::Refuted)) {
      cert.status = Status::Refuted;
      cert.witness = r.best;
    }
    if (r.max > cert.observed_max) {
      cert.observed_max = r.max;
      if (cert.status != Status::Refuted) cert.witness = r.best;
    }
  }
  cert.budget_used = budget.used();
  cert.abar = options.abar.value_or(cert.observed_max);
  if (cert.status == Status::Refuted) {
    cert.note = "animal average exceeds abar";
  } else if (incomplete) {
    cert.status = Status::Inconclusive;
    cert.note = budget.exhausted() ? "expansion budget exhausted" : "animal size cap reached";
  } else if (cert.observed_max == kMinusInf) {
    cert.status = Status::Inconclusive;
    cert.note = "no animals within the depth cap";
  } else {
    cert.status = Status::VerifiedToDepth;
  }
  return cert;
}

// ---------------------------------------------------------------- phi class

IndexSequence IndexSequence::double_exponential(double base) {
  if (!(base > 1.0)) throw std::invalid_argument("sequence base must exceed 1");
  return {Kind::DoubleExponential, base};
}

IndexSequence IndexSequence::geometric(double base) {
  if (!(base > 1.0)) throw std::invalid_argument("sequence base must exceed 1");
  return {Kind::Geometric, base};
}

double IndexSequence::log_at(std::size_t k) const {
  const double kk = static_cast<double>(k);
  return kind_ == Kind::DoubleExponential ? std::pow(base_, kk) : kk * std::log(base_);
}

std::string IndexSequence::name() const {
  return (kind_ == Kind::DoubleExponential ? "exp(a^k), a=" : "a^k, a=") + std::to_string(base_);
}

PhiClassResult phi_class_certificate(const SimpleGraph& g, const PhiClassOptions& options) {
  if (options.terms < 1) throw std::invalid_argument("series needs at least one term");
  PhiClassResult result;
  const auto degrees = degree_vector(g, options.degrees);

  // Hub separation on the truncation.
  std::vector<NodeId> hubs;
  for (NodeId v = 0; v < g.size(); ++v)
    if (degrees[v] >= options.hub_threshold) hubs.push_back(v);
  for (std::size_t i = 0; i < hubs.size(); ++i) {
    auto dist = g.distances_from(hubs[i]);
    for (std::size_t j = i + 1; j < hubs.size(); ++j) {
      const NodeId a = hubs[i], b = hubs[j];
      const double required = options.phi(std::min(degrees[a], degrees[b]));
      const auto hops = (*dist)[b];
      Distance d = hops == SimpleGraph::kUnreachable ? Distance::infinity() : Distance(static_cast<std::size_t>(hops));
      if (!d.at_least(required)) {
        if (result.violations.size() < options.max_violations) result.violations.push_back({a, b, d, required});
        else break;
      }
    }
  }

  // Series sum_k g(t_{k+1}) / phi(t_k).
  std::vector<double> terms;
  for (std::size_t k = 1; k <= options.terms; ++k) {
    const double denom = options.phi.from_log(options.t.log_at(k));
    if (!(denom > 0.0)) throw std::domain_error("phi(t_k) must be positive");
    terms.push_back(options.g.from_log(options.t.log_at(k + 1)) / denom);
  }
  result.partial_sum = 0.0;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) result.partial_sum += *it;  // small terms first

  bool geometric = false;
  if (terms.size() >= 3) {
    const std::size_t n = terms.size();
    const double r1 = terms[n - 1] / terms[n - 2];
    const double r2 = terms[n - 2] / terms[n - 3];
    if (std::isfinite(r1) && r1 < 1.0 && std::abs(r1 - r2) <= 1e-9 * std::abs(r1)) {
      geometric = true;
      result.ratio = r1;
      result.tail = terms.back() * r1 / (1.0 - r1);
    }
  }
  result.bbar = result.partial_sum + result.tail;
  result.bbar_is_lower_bound = !geometric;

  auto& cert = result.certificate;
  cert.g = options.g;
  cert.abar = 2.0 * result.bbar;
  cert.observed_max = kMinusInf;
  if (!result.violations.empty()) {
    cert.status = TemperednessCertificate::Status::Refuted;
    cert.note = "hub separation violated";
  } else if (!geometric) {
    cert.status = TemperednessCertificate::Status::Inconclusive;
    cert.note = "series tail has no geometric closed form; bbar is a lower bound";
  } else {
    cert.status = TemperednessCertificate::Status::ClosedForm;
  }
  return result;
}

// ---------------------------------------------------------------- main check

ConditionReport main_uniqueness_check(const SimpleGraph& g, const InteractionBounds& bounds,
                                      const TemperednessCertificate& cert, const MainCheckOptions& options,
                                      ExpansionBudget& budget) {
  if (cert.status == TemperednessCertificate::Status::Refuted)
    throw std::invalid_argument("temperedness certificate is refuted");
  if (!(options.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (bounds.size() != g.size()) throw std::invalid_argument("interaction bounds must cover every line-graph node");

  ConditionReport report;
  report.criterion = Criterion::TemperedMain;
  report.threshold = -(cert.abar + options.epsilon);
  report.depth = options.depth_cap;
  report.details["abar"] = json_real(cert.abar);
  report.details["epsilon"] = options.epsilon;
  report.details["certificate"] = to_string(cert.status);

  if (cert.status == TemperednessCertificate::Status::Inconclusive) {
    report.verdict = Verdict::Inconclusive;
    report.supremum = std::numeric_limits<double>::quiet_NaN();
    report.margin = std::numeric_limits<double>::quiet_NaN();
    report.details["reason"] = "temperedness not certified";
    report.budget_used = budget.used();
    return report;
  }

  const auto probes = probe_list(g, options);
  // Closed-form certificates may carry no schedule; default to N_k = k.
  const RadiusSchedule schedule = cert.schedule.radii().empty() ? RadiusSchedule::linear(options.depth_cap) : cert.schedule;
  std::vector<double> term(g.size());
  for (NodeId e = 0; e < g.size(); ++e) {
    if (!(bounds.delta[e] >= 0.0)) throw std::invalid_argument("oscillation must be nonnegative");
    term[e] = bounds.delta[e] == 0.0 ? 0.0 : log_oscillation_term(bounds.delta[e]);
  }

  struct ProbeResult {
    double sup = kMinusInf;
    std::vector<NodeId> path;
    std::size_t radius = 0;
    std::size_t infinite_paths = 0;
    std::size_t paths = 0;
    bool exhausted_budget = false;
    bool patience_cut = false;
  };
  std::vector<ProbeResult> results(probes.size());

  detail::parallel_for(probes.size(), options.threads, [&](std::size_t i) {
    const NodeId probe = probes[i];
    ProbeResult& out = results[i];
    for (std::size_t radius : schedule.for_node(probe)) {
      if (radius > options.depth_cap) break;
      auto mask = ball_mask(g, probe, radius);
      const auto ball_size = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
      std::size_t limit = options.patience == 0 ? ball_size : std::min(ball_size, radius + 1 + options.patience);

      while (true) {
        std::vector<double> per_n(limit + 2, kMinusInf);
        std::vector<double> prefix(limit + 2, 0.0);
        std::vector<std::size_t> zeros(limit + 2, 0);
        bool overflow = false;
        const std::size_t walk_cap = limit < ball_size ? limit + 1 : limit;
        auto status = walk_simple_paths(
            g, probe, mask, walk_cap,
            [&](std::span<const NodeId> path) {
              const std::size_t n = path.size();
              const NodeId tip = path.back();
              prefix[n] = prefix[n - 1] + term[tip];
              zeros[n] = zeros[n - 1] + (bounds.delta[tip] == 0.0 ? 1 : 0);
              if (n > limit) {
                overflow = true;
                return WalkStep::Prune;
              }
              if (n >= radius + 1) {
                ++out.paths;
                double value = kMinusInf;
                if (zeros[n] > 0) ++out.infinite_paths;
                else value = prefix[n] / static_cast<double>(n);
                per_n[n] = std::max(per_n[n], value);
                if (value > out.sup) {
                  out.sup = value;
                  out.path.assign(path.begin(), path.end());
                  out.radius = radius;
                }
              }
              return WalkStep::Extend;
            },
            budget);
        if (status.budget_exhausted) {
          out.exhausted_budget = true;
          return;
        }
        if (!overflow) break;
        // Stop once the per-length maximum has stopped growing for a full window.
        bool flat = true;
        for (std::size_t n = limit - options.patience + 1; n <= limit; ++n)
          if (per_n[n] > per_n[n - 1]) flat = false;
        if (flat) {
          out.patience_cut = true;
          break;
        }
        limit = std::min(ball_size, limit + options.patience);
      }
    }
  });

  report.supremum = kMinusInf;
  bool exhausted = false, cut = false;
  std::size_t infinite_paths = 0, paths = 0;
  const ProbeResult* best = nullptr;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    exhausted = exhausted || r.exhausted_budget;
    cut = cut || r.patience_cut;
    infinite_paths += r.infinite_paths;
    paths += r.paths;
    if (!best || r.sup > best->sup) best = &r;
  }
  report.budget_used = budget.used();
  report.details["paths"] = paths;
  report.details["minus_infinity_paths"] = infinite_paths;
  report.details["patience_truncated"] = cut;
  if (exhausted) {
    report.verdict = Verdict::Inconclusive;
    report.supremum = std::numeric_limits<double>::quiet_NaN();
    report.margin = std::numeric_limits<double>::quiet_NaN();
    report.details["reason"] = "expansion budget exhausted";
    return report;
  }
  if (best) report.supremum = best->sup;
  report.margin = report.threshold - report.supremum;
  report.verdict = report.supremum <= report.threshold ? Verdict::HoldsToDepth : Verdict::Fails;
  if (best && !best->path.empty())
    report.witness = {{"path", best->path}, {"radius", best->radius}, {"average", json_real(best->sup)}};
  return report;
}

// ---------------------------------------------------------------- explicit kappa

ConditionReport explicit_kappa_check(const SimpleGraph& g, const InteractionBounds& bounds,
                                     const TemperednessCertificate& cert, double epsilon,
                                     std::span<const std::size_t> degrees) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (bounds.size() != g.size()) throw std::invalid_argument("interaction bounds must cover every line-graph node");
  std::vector<std::size_t> deg = degrees.empty() ? g.degrees() : std::vector<std::size_t>(degrees.begin(), degrees.end());
  if (deg.size() != g.size()) throw std::invalid_argument("degree vector must cover every node");

  ConditionReport report;
  report.criterion = Criterion::ExplicitKappa;
  const double kappa = std::exp(-7.0 * cert.abar - epsilon);
  report.details["kappa"] = kappa;
  report.details["abar"] = cert.abar;
  report.details["epsilon"] = epsilon;

  double worst = std::numeric_limits<double>::infinity();
  std::optional<NodeId> worst_edge;
  std::vector<double> margins(g.size());
  for (NodeId e = 0; e < g.size(); ++e) {
    const double allowed = kappa * (cert.abar + cert.g(deg[e]));
    margins[e] = allowed - bounds.delta[e];
    if (margins[e] < worst) {
      worst = margins[e];
      worst_edge = e;
    }
  }
  report.margin = g.size() == 0 ? std::numeric_limits<double>::infinity() : worst;
  report.supremum = worst_edge ? bounds.delta[*worst_edge] : 0.0;
  report.threshold = worst_edge ? kappa * (cert.abar + cert.g(deg[*worst_edge])) : 0.0;
  report.verdict = report.margin >= 0.0 ? Verdict::HoldsToDepth : Verdict::Fails;
  if (!cert.usable()) report.verdict = Verdict::Inconclusive;
  if (worst_edge) report.witness = {{"edge", *worst_edge}, {"margin", worst}};
  if (g.size() <= 4096) report.details["edge_margins"] = margins;
  return report;
}

// ---------------------------------------------------------------- closed forms

double dobrushin_threshold(std::size_t n, double c) {
  if (n < 2 || !(c > 0.0)) throw std::invalid_argument("need n >= 2 and c > 0");
  return 1.0 / (c * static_cast<double>(n - 1));
}

double tree_threshold(std::size_t n, double c) {
  if (n < 1 || !(c > 0.0)) throw std::invalid_argument("need n >= 1 and c > 0");
  const double nn = static_cast<double>(n);
  return std::log((nn + 1.0) / nn) / (2.0 * c);
}

ConditionReport closed_form_tree_check(std::size_t n, double delta, double epsilon) {
  if (n < 2) throw std::invalid_argument("regular line tree needs n >= 2");
  ConditionReport report;
  report.criterion = Criterion::TemperedMain;
  const double abar = std::log(static_cast<double>(n));
  report.threshold = -(abar + epsilon);
  report.supremum = delta == 0.0 ? kMinusInf : log_oscillation_term(delta);
  report.margin = report.threshold - report.supremum;
  report.verdict = report.supremum <= report.threshold ? Verdict::Holds : Verdict::Fails;
  report.details = {{"abar", abar}, {"epsilon", epsilon}, {"delta", delta}, {"closed_form", true}};
  return report;
}

}  // namespace hmrf
