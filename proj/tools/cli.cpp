#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hmrf/conditions.hpp"
#include "hmrf/gibbs.hpp"
#include "hmrf/line_graph.hpp"
#include "hmrf/models.hpp"
#include "hmrf/report.hpp"

namespace hmrf::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr int kUsage = 64;

struct Source {
  std::string spec_path;
  std::string model_dir;
  std::optional<std::uint64_t> seed;
};

struct LoadedModel {
  ModelSpec spec;
  BuiltModel built;
};

void add_source(CLI::App* cmd, Source& src) {
  cmd->add_option("--spec", src.spec_path, "Model spec file (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--model", src.model_dir, "Directory written by 'build'")->check(CLI::ExistingDirectory);
  cmd->add_option("--seed", src.seed, "Root seed (overrides the spec)");
}

LoadedModel load(const Source& src) {
  if (src.spec_path.empty() == src.model_dir.empty()) throw CLI::ValidationError("give exactly one of --spec or --model");
  LoadedModel m;
  const fs::path path = src.spec_path.empty() ? fs::path(src.model_dir) / "model.json" : fs::path(src.spec_path);
  const json j = read_json_file(path);
  from_json(j.contains("spec") ? j.at("spec") : j, m.spec);
  if (src.seed) m.spec.seed = *src.seed;
  m.built = build_model(m.spec);
  if (!src.model_dir.empty()) {
    const fs::path stored = fs::path(src.model_dir) / "hypergraph.json";
    if (fs::exists(stored)) {
      Hypergraph h;
      from_json(read_json_file(stored), h);
      if (!(h == m.built.hypergraph)) throw std::runtime_error(stored.string() + " does not match model.json");
    }
  }
  return m;
}

json stamp(json config) {
  json out;
  out["config"] = config;
  out["config_hash"] = config_hash(config);
  out["seed"] = config.at("model").at("seed");
  out["version"] = library_version();
  return out;
}

void ensure_dir(const std::string& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

// ------------------------------------------------------------------ build

json degree_histogram(const LineGraph& line) {
  std::map<std::size_t, std::size_t> hist;
  for (auto d : line.degrees()) ++hist[d];
  json out = json::object();
  for (auto [d, c] : hist) out[std::to_string(d)] = c;
  return out;
}

int cmd_build(const Source& src, const std::string& out_dir, std::ostream& out) {
  if (src.spec_path.empty()) throw CLI::ValidationError("build needs --spec");
  auto m = load(src);
  const auto& h = m.built.hypergraph;
  LineGraph line(h);
  ensure_dir(out_dir);
  const fs::path dir(out_dir);

  json spec_json;
  to_json(spec_json, m.spec);
  json model = stamp({{"command", "build"}, {"model", spec_json}});
  model["spec"] = spec_json;
  json bounds;
  to_json(bounds, m.built.interactions.bounds());
  model["interaction_bounds"] = bounds;
  if (!m.built.amplitudes.empty()) model["amplitudes"] = m.built.amplitudes;

  json hj;
  to_json(hj, h);
  write_json_file(dir / "hypergraph.json", hj);
  write_json_file(dir / "linegraph.json", line.to_json());
  {
    std::ofstream csv(dir / "linegraph.csv", std::ios::binary);
    line.write_edge_csv(csv);
  }
  write_json_file(dir / "model.json", model);

  const auto sep = h.check_separability();
  json summary = stamp({{"command", "build"}, {"model", spec_json}});
  summary["vertices"] = h.num_vertices();
  summary["edges"] = h.num_edges();
  summary["line_graph_edges"] = line.graph().num_edges();
  summary["degree_histogram"] = degree_histogram(line);
  summary["separability"] = {{"passed", sep.passed},
                             {"exempt_leaves", sep.exempt_leaves.size()},
                             {"bracket_violations", sep.bracket_violations}};
  write_json_file(dir / "summary.json", summary);
  out << summary.dump(2) << '\n';
  return 0;
}

// ------------------------------------------------------------------ check

struct CheckArgs {
  std::vector<std::string> criteria{"dobrushin"};
  double epsilon = 0.1;
  std::size_t depth = 3;
  std::optional<std::size_t> budget;
  std::optional<double> abar;
  std::vector<NodeId> probes;
  std::size_t patience = 0;
  std::size_t threads = 1;
  std::string growth = "log";
  std::string phi = "log-squared";
  std::string sequence = "double-exponential";
  double sequence_base = 2.0;
  std::size_t terms = 30;
  std::size_t hub_threshold = 2;
  std::string out_dir;
};

GrowthFunction growth_named(const std::string& name) {
  GrowthFunction g = GrowthFunction::log();
  from_json(json{{"kind", name}}, g);
  return g;
}

json check_config(const CheckArgs& a, const json& spec) {
  json c = {{"command", "check"},   {"criteria", a.criteria}, {"epsilon", a.epsilon}, {"depth", a.depth},
            {"probes", a.probes},   {"patience", a.patience}, {"g", a.growth},        {"phi", a.phi},
            {"sequence", a.sequence}, {"sequence_base", a.sequence_base}, {"terms", a.terms},
            {"hub_threshold", a.hub_threshold}, {"model", spec}};
  c["budget"] = a.budget ? json(*a.budget) : json(nullptr);
  c["abar"] = a.abar ? json(*a.abar) : json(nullptr);
  return c;
}

ConditionReport phi_report(const PhiClassResult& r) {
  ConditionReport rep;
  rep.criterion = Criterion::PhiClass;
  rep.supremum = r.certificate.abar;
  rep.threshold = std::numeric_limits<double>::infinity();
  rep.margin = -static_cast<double>(r.violations.size());
  switch (r.certificate.status) {
    case TemperednessCertificate::Status::ClosedForm: rep.verdict = Verdict::HoldsToDepth; break;
    case TemperednessCertificate::Status::Refuted: rep.verdict = Verdict::Fails; break;
    default: rep.verdict = Verdict::Inconclusive; break;
  }
  rep.details = {{"bbar", r.bbar},
                 {"abar", r.certificate.abar},
                 {"bbar_is_lower_bound", r.bbar_is_lower_bound},
                 {"partial_sum", r.partial_sum},
                 {"tail", r.tail},
                 {"violations", r.violations.size()}};
  if (r.ratio) rep.details["ratio"] = *r.ratio;
  if (!r.violations.empty()) {
    const auto& v = r.violations.front();
    rep.witness = {{"first", v.first}, {"second", v.second}, {"required", v.required},
                   {"distance", v.distance.is_finite() ? json(v.distance.hops()) : json("inf")}};
  }
  return rep;
}

int cmd_check(const Source& src, CheckArgs a, std::ostream& out) {
  auto m = load(src);
  const auto& h = m.built.hypergraph;
  LineGraph line(h);
  const auto bounds = m.built.interactions.bounds();
  if (std::find(a.criteria.begin(), a.criteria.end(), "all") != a.criteria.end())
    a.criteria = {"dobrushin", "tempered-main", "explicit-kappa", "phi-class"};
  for (const auto& c : a.criteria) {
    try {
      (void)criterion_from_string(c);
    } catch (const std::invalid_argument& e) {
      throw CLI::ValidationError(e.what());
    }
  }

  json spec_json;
  to_json(spec_json, m.spec);
  json result = stamp(check_config(a, spec_json));
  json reports = json::array();
  const std::size_t limit = a.budget ? *a.budget : ExpansionBudget::kUnlimited;
  std::optional<TemperednessCertificate> cert;
  auto certificate = [&]() -> const TemperednessCertificate& {
    if (!cert) {
      ExpansionBudget budget(limit);
      CertifyOptions opt;
      opt.depth_cap = a.depth;
      opt.probes = a.probes;
      opt.threads = a.threads;
      opt.abar = a.abar;
      cert = certify_temperedness(line.graph(), growth_named(a.growth), RadiusSchedule::linear(a.depth), opt, budget);
      json cj;
      to_json(cj, *cert);
      result["certificate"] = cj;
    }
    return *cert;
  };

  bool any_fail = false, any_inconclusive = false;
  for (const auto& name : a.criteria) {
    ConditionReport rep;
    switch (criterion_from_string(name)) {
      case Criterion::Dobrushin: rep = dobrushin_check(h, bounds); break;
      case Criterion::TemperedMain: {
        const auto& c = certificate();
        if (c.status == TemperednessCertificate::Status::Refuted) {
          rep.criterion = Criterion::TemperedMain;
          rep.verdict = Verdict::Inconclusive;
          rep.margin = std::numeric_limits<double>::quiet_NaN();
          rep.details["reason"] = "temperedness refuted at the given abar";
          break;
        }
        ExpansionBudget budget(limit);
        MainCheckOptions opt;
        opt.depth_cap = a.depth;
        opt.probes = a.probes;
        opt.threads = a.threads;
        opt.epsilon = a.epsilon;
        opt.patience = a.patience;
        rep = main_uniqueness_check(line.graph(), bounds, c, opt, budget);
        rep.budget_used += c.budget_used;
        const auto degrees = m.spec.family == "cliques" ? m.spec.cliques.resolved_degrees() : std::vector<std::size_t>{};
        const bool constant = !degrees.empty() && std::all_of(degrees.begin(), degrees.end(),
                                                              [&](std::size_t d) { return d == degrees.front(); });
        const bool uniform_delta = std::all_of(bounds.delta.begin(), bounds.delta.end(),
                                               [&](double d) { return d == bounds.delta.front(); });
        if (constant && uniform_delta && !bounds.delta.empty()) {
          json cf;
          to_json(cf, closed_form_tree_check(degrees.front(), bounds.delta.front(), a.epsilon));
          rep.details["closed_form"] = cf;
        }
        break;
      }
      case Criterion::ExplicitKappa: {
        if (!(a.epsilon < 1.0)) throw CLI::ValidationError("explicit-kappa needs --epsilon in (0, 1)");
        rep = explicit_kappa_check(line.graph(), bounds, certificate(), a.epsilon);
        rep.depth = a.depth;
        rep.budget_used = certificate().budget_used;
        break;
      }
      case Criterion::PhiClass: {
        PhiClassOptions opt;
        opt.phi = growth_named(a.phi);
        opt.g = growth_named(a.growth);
        opt.t = a.sequence == "geometric" ? IndexSequence::geometric(a.sequence_base)
                                          : IndexSequence::double_exponential(a.sequence_base);
        opt.terms = a.terms;
        opt.hub_threshold = a.hub_threshold;
        rep = phi_report(phi_class_certificate(line.graph(), opt));
        break;
      }
    }
    any_fail = any_fail || rep.verdict == Verdict::Fails;
    any_inconclusive = any_inconclusive || rep.verdict == Verdict::Inconclusive;
    json rj;
    to_json(rj, rep);
    reports.push_back(rj);
  }
  result["reports"] = reports;
  if (!a.out_dir.empty()) {
    ensure_dir(a.out_dir);
    write_json_file(fs::path(a.out_dir) / "report.json", result);
  }
  out << result.dump(2) << '\n';
  return any_fail ? 1 : any_inconclusive ? 2 : 0;
}

// ------------------------------------------------------------------ experiment

struct ExperimentArgs {
  std::optional<VertexId> x;
  std::optional<EdgeId> edge;
  std::vector<std::size_t> radii{1, 2, 3};
  std::vector<double> statistic{1.0};
  std::string mode = "exact-sup";
  double epsilon = 0.1;
  std::size_t samples = 256;
  std::size_t threads = 1;
  bool no_timing = false;
  std::string out_dir;
};

int cmd_experiment(const Source& src, const ExperimentArgs& a, std::ostream& out) {
  if (a.mode != "exact-sup" && a.mode != "random-search") throw CLI::ValidationError("--mode must be exact-sup or random-search");
  auto m = load(src);
  const auto& h = m.built.hypergraph;
  const auto& model = m.built.interactions;
  const VertexId x = a.x ? *a.x : h.edge(0).vertices.front();
  if (!h.contains(x)) throw std::invalid_argument("vertex " + std::to_string(x) + " is not in the model");
  const EdgeId e_x = a.edge ? *a.edge : h.edge_neighborhood(x).front();
  std::vector<SpinState> event;
  for (double v : a.statistic) event.push_back(model.spins.index_of(v));

  json spec_json;
  to_json(spec_json, m.spec);
  json config = {{"command", "experiment"}, {"x", x},       {"edge", e_x},          {"radii", a.radii},
                 {"statistic", a.statistic}, {"mode", a.mode}, {"epsilon", a.epsilon}, {"samples", a.samples},
                 {"model", spec_json}};
  json summary = stamp(config);

  SensitivityOptions opt;
  opt.mode = a.mode == "exact-sup" ? SensitivityMode::ExactSup : SensitivityMode::RandomSearch;
  opt.samples = a.samples;
  opt.seed = m.spec.seed;
  opt.kernel.threads = a.threads;

  std::ostringstream csv;
  write_csv_row(csv, {"radius", "M", "exact", "method", "envelope", "runtime_ms"});
  json rows = json::array();
  bool used_monotone = false;
  for (std::size_t r : a.radii) {
    const auto start = std::chrono::steady_clock::now();
    SensitivityResult res;
    try {
      res = boundary_sensitivity(h, model, x, e_x, r, event, opt);
    } catch (const std::length_error& e) {
      throw std::runtime_error(std::string(e.what()) + " (try --mode random-search)");
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    used_monotone = used_monotone || res.method == "monotone";
    const double env = sensitivity_envelope(a.epsilon, r);
    write_csv_row(csv, {std::to_string(r), format_real(res.value), res.exact ? "true" : "false", res.method,
                        format_real(env), a.no_timing ? "" : format_real(std::round(ms * 1000.0) / 1000.0)});
    rows.push_back({{"radius", r},
                    {"M", res.value},
                    {"p_max", res.p_max},
                    {"p_min", res.p_min},
                    {"exact", res.exact},
                    {"method", res.method},
                    {"engine", res.engine},
                    {"volume", res.volume_size},
                    {"boundary", res.boundary_size},
                    {"evaluations", res.evaluations},
                    {"envelope", env}});
  }
  if (used_monotone && opt.mode == SensitivityMode::ExactSup) {
    // Check the all-plus/all-minus shortcut against full enumeration at the smallest radius.
    const std::size_t r0 = *std::min_element(a.radii.begin(), a.radii.end());
    auto full = boundary_sensitivity(h, model, x, e_x, r0, event, opt);
    auto quick_opt = opt;
    quick_opt.prefer_monotone = true;
    auto quick = boundary_sensitivity(h, model, x, e_x, r0, event, quick_opt);
    summary["shortcut_check"] = {{"radius", r0},
                                 {"enumerated", full.method == "enumeration"},
                                 {"difference", std::abs(full.value - quick.value)}};
  }
  summary["rows"] = rows;
  if (!a.out_dir.empty()) {
    ensure_dir(a.out_dir);
    std::ofstream f(fs::path(a.out_dir) / "sensitivity.csv", std::ios::binary);
    f << csv.str();
    write_json_file(fs::path(a.out_dir) / "summary.json", summary);
  }
  out << csv.str();
  return 0;
}

// ------------------------------------------------------------------ disorder

struct DisorderArgs {
  std::string distribution;
  std::vector<double> couplings;
  std::size_t replicas = 100;
  std::optional<double> abar;
  std::vector<std::size_t> radii;
  bool half_threshold = false;
  std::string out_dir;
};

AmplitudeDistribution parse_distribution(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  auto num = [&](std::size_t i) {
    if (i >= parts.size()) throw CLI::ValidationError("distribution '" + text + "' is missing a parameter");
    return std::stod(parts[i]);
  };
  if (parts.empty()) throw CLI::ValidationError("empty distribution");
  if (parts[0] == "exponential") return AmplitudeDistribution::exponential(num(1));
  if (parts[0] == "uniform") return AmplitudeDistribution::uniform(num(1), num(2));
  if (parts[0] == "degenerate") return AmplitudeDistribution::degenerate(num(1));
  throw CLI::ValidationError("distribution must be exponential:RATE, uniform:LO:HI or degenerate:C");
}

int cmd_disorder(const Source& src, const DisorderArgs& a, std::ostream& out) {
  auto m = load(src);
  std::optional<AmplitudeDistribution> dist;
  if (!a.distribution.empty()) dist = parse_distribution(a.distribution);
  else dist = m.spec.distribution;
  if (!dist) throw CLI::ValidationError("no distribution: pass --distribution or put one in the spec");
  LineGraph line(m.built.hypergraph);
  double abar = 0.0;
  if (a.abar) {
    abar = *a.abar;
  } else {
    const auto deg = line.degrees();
    abar = std::log(static_cast<double>(std::max<std::size_t>(1, *std::max_element(deg.begin(), deg.end()))));
  }
  const auto threshold = tau_threshold(*dist, abar);
  std::vector<double> couplings = a.couplings;
  if (a.half_threshold && std::isfinite(threshold.k_star)) couplings.push_back(threshold.k_star / 2.0);
  std::vector<std::size_t> radii = a.radii;
  if (radii.empty()) {
    const std::size_t depth = m.spec.family == "cliques" ? m.spec.cliques.depth : 3;
    for (std::size_t r = 1; r + 1 < depth; ++r) radii.push_back(r);
    if (radii.empty()) radii.push_back(1);
  }

  json spec_json;
  to_json(spec_json, m.spec);
  json dist_json;
  to_json(dist_json, *dist);
  json config = {{"command", "disorder"}, {"distribution", dist_json}, {"K", couplings}, {"replicas", a.replicas},
                 {"abar", abar},           {"radii", radii},             {"model", spec_json}};
  json summary = stamp(config);
  summary["target"] = threshold.target;
  summary["k_star"] = json_number(threshold.k_star);

  std::ostringstream csv;
  write_csv_row(csv, {"K", "k", "N_k", "mean", "std_err", "envelope", "paths", "within_envelope"});
  json sweeps = json::array();
  for (double k : couplings) {
    if (k >= dist->coupling_limit())
      throw std::domain_error("K = " + format_real(k) + " is outside the moment domain K < " +
                              format_real(dist->coupling_limit()));
    auto rep = disorder_decay_experiment(line.graph(), 0, {*dist, k, m.spec.seed}, radii, a.replicas, abar);
    json rows = json::array();
    for (const auto& row : rep.rows) {
      const bool within = row.mean <= row.envelope;
      write_csv_row(csv, {format_real(k), std::to_string(row.k), std::to_string(row.radius), format_real(row.mean),
                          format_real(row.standard_error), format_real(row.envelope), std::to_string(row.paths),
                          within ? "true" : "false"});
      rows.push_back({{"k", row.k},
                      {"N_k", row.radius},
                      {"mean", row.mean},
                      {"std_err", row.standard_error},
                      {"envelope", json_number(row.envelope)},
                      {"paths", row.paths}});
    }
    sweeps.push_back({{"K", k}, {"tau", json_number(rep.tau)}, {"above_threshold", rep.above_threshold}, {"rows", rows}});
  }
  summary["sweeps"] = sweeps;
  if (!a.out_dir.empty()) {
    ensure_dir(a.out_dir);
    write_json_file(fs::path(a.out_dir) / "disorder.json", summary);
    if (a.replicas > 0) {
      std::ofstream f(fs::path(a.out_dir) / "disorder.csv", std::ios::binary);
      f << csv.str();
    }
  }
  out << "K* = " << format_real(threshold.k_star) << " (tau(K*) = exp(-abar) = " << format_real(threshold.target)
      << ", abar = " << format_real(abar) << ")\n";
  for (const auto& s : sweeps)
    if (s.at("above_threshold").get<bool>())
      out << "warning: K = " << s.at("K").get<double>() << " is not below K*; the envelope does not apply\n";
  if (a.replicas > 0) out << csv.str();
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uniqueness criteria and finite-volume experiments for Markov fields on hypergraphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", library_version());

  Source build_src, check_src, exp_src, dis_src;
  std::string build_out = "model";

  auto* build = app.add_subcommand("build", "Generate a model and write its artifacts");
  add_source(build, build_src);
  build->add_option("--out", build_out, "Output directory");

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "Evaluate uniqueness criteria");
  add_source(check, check_src);
  check->add_option("--criterion", check_args.criteria,
                    "dobrushin, tempered-main, explicit-kappa, phi-class or all (repeatable)")
      ->delimiter(',');
  check->add_option("--epsilon", check_args.epsilon, "Margin epsilon")->check(CLI::PositiveNumber);
  check->add_option("--depth", check_args.depth, "Largest radius N_k examined");
  check->add_option("--budget", check_args.budget, "Node-expansion budget");
  check->add_option("--abar", check_args.abar, "Temperedness constant (default: observed maximum)");
  check->add_option("--probe", check_args.probes, "Line-graph nodes to probe (default: all)")->delimiter(',');
  check->add_option("--patience", check_args.patience, "Stop a path search after this many non-improving lengths");
  check->add_option("--threads", check_args.threads, "Worker threads");
  check->add_option("--g", check_args.growth, "Growth function g: log or linear");
  check->add_option("--phi", check_args.phi, "Hub separation profile: log-squared or square");
  check->add_option("--sequence", check_args.sequence, "t_k: double-exponential or geometric");
  check->add_option("--sequence-base", check_args.sequence_base, "Base a of t_k");
  check->add_option("--terms", check_args.terms, "Series terms");
  check->add_option("--hub-threshold", check_args.hub_threshold, "Smallest hub degree n_*");
  check->add_option("--out", check_args.out_dir, "Write report.json here");

  ExperimentArgs exp_args;
  auto* experiment = app.add_subcommand("experiment", "Boundary-sensitivity experiment");
  add_source(experiment, exp_src);
  experiment->add_option("--x", exp_args.x, "Vertex x (default: first vertex of edge 0)");
  experiment->add_option("--edge", exp_args.edge, "Edge e_x containing x");
  experiment->add_option("--radii", exp_args.radii, "Radii r")->delimiter(',');
  experiment->add_option("--statistic", exp_args.statistic, "Spin values forming the event A")->delimiter(',');
  experiment->add_option("--mode", exp_args.mode, "exact-sup or random-search");
  experiment->add_option("--epsilon", exp_args.epsilon, "Envelope epsilon")->check(CLI::PositiveNumber);
  experiment->add_option("--samples", exp_args.samples, "Random-search draws");
  experiment->add_option("--threads", exp_args.threads, "Worker threads");
  experiment->add_flag("--no-timing", exp_args.no_timing, "Leave runtime_ms empty so reruns are byte-identical");
  experiment->add_option("--out", exp_args.out_dir, "Output directory");

  DisorderArgs dis_args;
  auto* disorder = app.add_subcommand("disorder", "Quenched-disorder threshold and decay table");
  add_source(disorder, dis_src);
  disorder->add_option("--distribution", dis_args.distribution, "exponential:RATE, uniform:LO:HI or degenerate:C");
  disorder->add_option("-K,--coupling", dis_args.couplings, "Couplings K to sweep")->delimiter(',');
  disorder->add_flag("--half-threshold", dis_args.half_threshold, "Also run at K = K*/2");
  disorder->add_option("--replicas", dis_args.replicas, "Disorder replicas (0: threshold only)");
  disorder->add_option("--abar", dis_args.abar, "Temperedness constant (default: log of the largest degree)");
  disorder->add_option("--radii", dis_args.radii, "Radii N_k")->delimiter(',');
  disorder->add_option("--out", dis_args.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << library_version() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*build) return cmd_build(build_src, build_out, out);
    if (*check) return cmd_check(check_src, check_args, out);
    if (*experiment) return cmd_experiment(exp_src, exp_args, out);
    if (*disorder) return cmd_disorder(dis_src, dis_args, out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return kUsage;
}

}  // namespace hmrf::cli
