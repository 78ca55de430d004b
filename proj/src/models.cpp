#include "hmrf/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace hmrf {

// ------------------------------------------------------------------ cliques

std::vector<std::size_t> CliqueTreeSpec::resolved_degrees() const {
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  std::vector<std::size_t> out;
  out.reserve(depth);
  if (!degrees.empty()) {
    for (std::size_t l = 0; l < depth; ++l) out.push_back(degrees[std::min(l, degrees.size() - 1)]);
    for (std::size_t l = 0; l < degrees.size(); ++l)
      if (degrees[l] < 2) throw std::invalid_argument("degree n_" + std::to_string(l + 1) + " must be at least 2");
    return out;
  }
  if (!schedule) throw std::invalid_argument("clique tree needs degrees or a schedule");
  const auto& s = *schedule;
  if (s.base_degrees.empty() || s.base_degrees.size() != s.plateau_lengths.size())
    throw std::invalid_argument("schedule needs one plateau length per base degree");
  for (std::size_t i = 0; i < s.base_degrees.size(); ++i) {
    const std::size_t n = s.base_degrees[i], l = s.plateau_lengths[i];
    const std::string which = "s=" + std::to_string(i + 1);
    if (n < 2) throw std::invalid_argument("schedule degree at " + which + " must be at least 2");
    if (l < 1) throw std::invalid_argument("schedule plateau at " + which + " must be positive");
    const double required = s.phi(n);
    if (static_cast<double>(l) < required)
      throw std::invalid_argument("schedule violates l_s >= phi(n_{m_s}) at " + which + ": l_s = " +
                                  std::to_string(l) + " < " + std::to_string(required));
  }
  for (std::size_t i = 0; i < s.base_degrees.size() && out.size() < depth; ++i) {
    const bool last = i + 1 == s.base_degrees.size();
    for (std::size_t k = 0; (last || k < s.plateau_lengths[i]) && out.size() < depth; ++k)
      out.push_back(s.base_degrees[i]);
  }
  return out;
}

CliqueTree build_overlapping_cliques(const CliqueTreeSpec& spec) {
  const auto n = spec.resolved_degrees();
  std::vector<std::vector<VertexId>> edges;
  std::vector<std::size_t> depth_of;
  VertexId next_vertex = 0;

  struct Pending {
    std::size_t edge;
    VertexId shared;   // -1 for the root
  };
  std::deque<Pending> queue;

  std::vector<VertexId> root(n[0]);
  for (auto& v : root) v = next_vertex++;
  edges.push_back(root);
  depth_of.push_back(1);
  queue.push_back({0, -1});

  while (!queue.empty()) {
    auto [edge, shared] = queue.front();
    queue.pop_front();
    const std::size_t depth = depth_of[edge];
    if (depth == spec.depth) continue;
    const std::size_t child_size = n[depth];
    const auto spawners = edges[edge];
    for (VertexId x : spawners) {
      if (x == shared) continue;
      std::vector<VertexId> child{x};
      for (std::size_t i = 1; i < child_size; ++i) child.push_back(next_vertex++);
      edges.push_back(std::move(child));
      depth_of.push_back(depth + 1);
      queue.push_back({edges.size() - 1, x});
    }
  }
  return {Hypergraph::from_edges(std::move(edges)), std::move(depth_of)};
}

// ------------------------------------------------------------------ Curie-Weiss

double curie_weiss_oscillation(std::size_t edge_size) {
  if (edge_size < 2) throw std::invalid_argument("edge size must be at least 2");
  const double n = static_cast<double>(edge_size);
  const double c = (n - 1.0) / 2.0 + static_cast<double>(edge_size / 2) / n;
  if (c > n / 2.0) throw std::logic_error("Curie-Weiss oscillation exceeds |e|/2");
  return c;
}

FactorTable curie_weiss_factor_table(std::size_t edge_size, double coupling) {
  if (edge_size < 2) throw std::invalid_argument("edge size must be at least 2");
  if (edge_size > kCurieWeissTableCap)
    throw std::length_error("edge of size " + std::to_string(edge_size) + " exceeds the factor table cap of " +
                            std::to_string(kCurieWeissTableCap));
  const std::size_t entries = std::size_t{1} << edge_size;
  Eigen::ArrayXd values(static_cast<Eigen::Index>(entries));
  const double n = static_cast<double>(edge_size);
  for (std::size_t idx = 0; idx < entries; ++idx) {
    // sum_{i<j} s_i s_j = (S^2 - n) / 2 with S the magnetisation.
    const int plus = std::popcount(idx);
    const double m = 2.0 * plus - n;
    values(static_cast<Eigen::Index>(idx)) = std::exp(coupling / n * (m * m - n) / 2.0);
  }
  return FactorTable(edge_size, 2, std::move(values));
}

InteractionModel curie_weiss_model(const Hypergraph& h, double coupling) {
  InteractionModel model;
  model.spins = SpinSpace::ising();
  std::map<std::size_t, FactorTable> by_size;
  for (const auto& e : h.edges()) {
    auto it = by_size.find(e.size());
    if (it == by_size.end()) it = by_size.emplace(e.size(), curie_weiss_factor_table(e.size(), coupling)).first;
    model.tables.push_back(it->second);
  }
  return model;
}

InteractionModel curie_weiss_model(const Hypergraph& h, double coupling, const std::vector<double>& amplitudes) {
  if (amplitudes.size() != h.num_edges()) throw std::invalid_argument("one amplitude per edge is required");
  InteractionModel model;
  model.spins = SpinSpace::ising();
  for (const auto& e : h.edges()) {
    const double c = amplitudes[e.id];
    if (!(c >= 0.0)) throw std::invalid_argument("amplitudes must be nonnegative");
    model.tables.push_back(curie_weiss_factor_table(e.size(), coupling * c / curie_weiss_oscillation(e.size())));
  }
  return model;
}

// ------------------------------------------------------------------ disorder

AmplitudeDistribution AmplitudeDistribution::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("exponential rate must be positive");
  return {Kind::Exponential, rate, 0.0};
}

AmplitudeDistribution AmplitudeDistribution::uniform(double lo, double hi) {
  if (!(lo >= 0.0 && hi > lo) || !std::isfinite(hi)) throw std::invalid_argument("uniform needs 0 <= lo < hi");
  return {Kind::Uniform, lo, hi};
}

AmplitudeDistribution AmplitudeDistribution::degenerate(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) throw std::invalid_argument("degenerate amplitude must be >= 0");
  return {Kind::Degenerate, value, 0.0};
}

std::string AmplitudeDistribution::name() const {
  switch (kind_) {
    case Kind::Exponential: return "exponential";
    case Kind::Uniform: return "uniform";
    case Kind::Degenerate: return "degenerate";
  }
  return "unknown";
}

double AmplitudeDistribution::mean() const {
  switch (kind_) {
    case Kind::Exponential: return 1.0 / a_;
    case Kind::Uniform: return (a_ + b_) / 2.0;
    case Kind::Degenerate: return a_;
  }
  return 0.0;
}

double AmplitudeDistribution::variance() const {
  switch (kind_) {
    case Kind::Exponential: return 1.0 / (a_ * a_);
    case Kind::Uniform: return (b_ - a_) * (b_ - a_) / 12.0;
    case Kind::Degenerate: return 0.0;
  }
  return 0.0;
}

double AmplitudeDistribution::quantile(double u) const {
  switch (kind_) {
    case Kind::Exponential: return -std::log1p(-u) / a_;
    case Kind::Uniform: return a_ + (b_ - a_) * u;
    case Kind::Degenerate: return a_;
  }
  return 0.0;
}

double AmplitudeDistribution::coupling_limit() const {
  return kind_ == Kind::Exponential ? a_ / 2.0 : std::numeric_limits<double>::infinity();
}

double AmplitudeDistribution::tau(double coupling) const {
  if (!(coupling >= 0.0)) throw std::domain_error("coupling must be nonnegative");
  if (coupling >= coupling_limit())
    throw std::domain_error("coupling " + std::to_string(coupling) + " is outside the moment domain K < " +
                            std::to_string(coupling_limit()));
  if (coupling == 0.0) return 0.0;
  const double s = 2.0 * coupling;
  switch (kind_) {
    case Kind::Exponential: return s / (a_ - s);
    case Kind::Uniform: {
      // (e^{s b} - e^{s a}) / (s (b - a)) - 1
      const double width = b_ - a_;
      return std::exp(s * a_) * std::expm1(s * width) / (s * width) - 1.0;
    }
    case Kind::Degenerate: return std::expm1(s * a_);
  }
  return 0.0;
}

void to_json(nlohmann::json& j, const AmplitudeDistribution& d) {
  j = {{"kind", d.name()}};
  switch (d.kind_) {
    case AmplitudeDistribution::Kind::Exponential: j["rate"] = d.a_; break;
    case AmplitudeDistribution::Kind::Uniform: j["low"] = d.a_; j["high"] = d.b_; break;
    case AmplitudeDistribution::Kind::Degenerate: j["value"] = d.a_; break;
  }
}

void from_json(const nlohmann::json& j, AmplitudeDistribution& d) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "exponential") d = AmplitudeDistribution::exponential(j.value("rate", 1.0));
  else if (kind == "uniform") d = AmplitudeDistribution::uniform(j.at("low").get<double>(), j.at("high").get<double>());
  else if (kind == "degenerate") d = AmplitudeDistribution::degenerate(j.at("value").get<double>());
  else throw std::invalid_argument("unknown distribution '" + kind + "' (exponential, uniform, degenerate)");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const std::uint64_t bits = splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
  // 53 random bits, shifted off zero so logarithms stay finite.
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<double> sample_amplitudes(std::size_t num_edges, const RandomInteractionSpec& spec) {
  std::vector<double> c(num_edges);
  for (std::size_t e = 0; e < num_edges; ++e) c[e] = spec.distribution.quantile(counter_uniform(spec.seed, e, 0));
  return c;
}

InteractionBounds sample_random_interactions(const Hypergraph& h, const RandomInteractionSpec& spec) {
  if (!(spec.coupling >= 0.0)) throw std::invalid_argument("coupling must be nonnegative");
  auto delta = sample_amplitudes(h.num_edges(), spec);
  for (auto& d : delta) d *= spec.coupling;
  return InteractionBounds::from_oscillations(std::move(delta));
}

DisorderThreshold tau_threshold(const AmplitudeDistribution& d, double abar, double tolerance) {
  if (!(abar >= 0.0)) throw std::invalid_argument("abar must be nonnegative");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  DisorderThreshold out;
  out.target = std::exp(-abar);
  if (d.kind() == AmplitudeDistribution::Kind::Degenerate && d.first() == 0.0) {
    out.k_star = std::numeric_limits<double>::infinity();
    return out;
  }
  double lo = 0.0;
  double hi = d.coupling_limit();
  if (!std::isfinite(hi)) {
    hi = 1.0;
    while (d.tau(hi) < out.target) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) {
        out.k_star = std::numeric_limits<double>::infinity();
        return out;
      }
    }
  }
  // tau is continuous and increasing, and blows up at the moment limit.
  while (hi - lo > tolerance && out.iterations < 4096) {
    const double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;
    const bool below = mid < d.coupling_limit() && d.tau(mid) < out.target;
    (below ? lo : hi) = mid;
    ++out.iterations;
  }
  out.k_star = lo + (hi - lo) / 2.0;
  return out;
}

// ------------------------------------------------------------------ graphs

SimpleGraph regular_tree(std::size_t n, std::size_t depth) {
  if (n < 2) throw std::invalid_argument("regular tree needs n >= 2");
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<NodeId> frontier{0};
  NodeId next = 1;
  for (std::size_t level = 0; level < depth; ++level) {
    std::vector<NodeId> fresh;
    for (NodeId v : frontier) {
      const std::size_t children = level == 0 ? n : n - 1;
      for (std::size_t c = 0; c < children; ++c) {
        edges.emplace_back(v, next);
        fresh.push_back(next++);
      }
    }
    frontier = std::move(fresh);
  }
  return SimpleGraph(next, edges);
}

FactorialTree factorial_tree(std::size_t full_depth, std::size_t spine_depth, std::size_t fanout_cap) {
  if (spine_depth < full_depth) throw std::invalid_argument("spine depth must be at least the full depth");
  if (spine_depth > 18) throw std::invalid_argument("nominal degrees overflow beyond depth 18");
  auto factorial = [](std::size_t k) {
    std::size_t f = 1;
    for (std::size_t i = 2; i <= k; ++i) f *= i;
    return f;
  };
  FactorialTree out;
  std::vector<std::pair<NodeId, NodeId>> edges;
  out.nominal_degree.push_back(factorial(1));
  out.level.push_back(0);
  std::vector<NodeId> frontier{0};
  NodeId next = 1;
  for (std::size_t level = 0; level < spine_depth; ++level) {
    std::vector<NodeId> fresh;
    const std::size_t nominal_children = level == 0 ? factorial(1) : factorial(level + 1) - 1;
    const std::size_t kept = level < full_depth ? nominal_children : std::min(nominal_children, fanout_cap);
    for (NodeId v : frontier) {
      for (std::size_t c = 0; c < kept; ++c) {
        edges.emplace_back(v, next);
        out.nominal_degree.push_back(factorial(level + 2));
        out.level.push_back(level + 1);
        fresh.push_back(next++);
      }
    }
    frontier = std::move(fresh);
  }
  out.graph = SimpleGraph(next, edges);
  return out;
}

SimpleGraph random_tree(std::size_t num_nodes, std::size_t max_degree, std::uint64_t seed) {
  if (num_nodes == 0) throw std::invalid_argument("tree needs at least one node");
  if (max_degree < 2 && num_nodes > 2) throw std::invalid_argument("max degree below 2 cannot span more than two nodes");
  SimpleGraph g(num_nodes);
  std::vector<NodeId> open{0};
  std::vector<std::size_t> degree(num_nodes, 0);
  for (NodeId v = 1; v < num_nodes; ++v) {
    const auto pick = static_cast<std::size_t>(counter_uniform(seed, v, 0) * static_cast<double>(open.size()));
    const NodeId parent = open[std::min(pick, open.size() - 1)];
    g.add_edge(parent, v);
    if (++degree[parent] == max_degree) open.erase(std::find(open.begin(), open.end(), parent));
    ++degree[v];
    if (degree[v] < max_degree) open.push_back(v);
  }
  return g;
}

// ------------------------------------------------------------------ spec files

void to_json(nlohmann::json& j, const ModelSpec& s) {
  j = {{"family", s.family}, {"interaction", s.interaction}, {"K", s.coupling}, {"seed", s.seed}};
  if (s.family == "cliques") {
    j["depth"] = s.cliques.depth;
    if (!s.cliques.degrees.empty()) j["degrees"] = s.cliques.degrees;
    if (s.cliques.schedule)
      j["schedule"] = {{"base_degrees", s.cliques.schedule->base_degrees},
                       {"plateau_lengths", s.cliques.schedule->plateau_lengths},
                       {"phi", s.cliques.schedule->phi}};
  } else {
    j["edges"] = s.edges;
  }
  if (!s.tables.empty()) {
    nlohmann::json tables = nlohmann::json::object();
    for (const auto& [size, values] : s.tables) tables[std::to_string(size)] = values;
    j["tables"] = tables;
  }
  if (s.distribution) j["distribution"] = *s.distribution;
}

void from_json(const nlohmann::json& j, ModelSpec& s) {
  s = ModelSpec{};
  s.family = j.value("family", std::string("cliques"));
  s.interaction = j.value("interaction", std::string("curie-weiss"));
  s.coupling = j.value("K", 0.0);
  s.seed = j.value("seed", std::uint64_t{0});
  if (s.family == "cliques") {
    s.cliques.depth = j.value("depth", std::size_t{1});
    if (j.contains("degrees")) s.cliques.degrees = j.at("degrees").get<std::vector<std::size_t>>();
    if (j.contains("schedule")) {
      const auto& sj = j.at("schedule");
      CliqueSchedule sched;
      sched.base_degrees = sj.at("base_degrees").get<std::vector<std::size_t>>();
      sched.plateau_lengths = sj.at("plateau_lengths").get<std::vector<std::size_t>>();
      if (sj.contains("phi")) {
        if (sj.at("phi").is_string()) from_json(nlohmann::json{{"kind", sj.at("phi")}}, sched.phi);
        else from_json(sj.at("phi"), sched.phi);
      }
      s.cliques.schedule = std::move(sched);
    }
  } else if (s.family == "hypergraph") {
    s.edges = j.at("edges").get<std::vector<std::vector<VertexId>>>();
  } else {
    throw std::invalid_argument("unknown model family '" + s.family + "' (cliques, hypergraph)");
  }
  if (j.contains("tables"))
    for (const auto& [key, values] : j.at("tables").items())
      s.tables[std::stoul(key)] = values.get<std::vector<double>>();
  if (j.contains("distribution")) {
    AmplitudeDistribution d = AmplitudeDistribution::degenerate(0.0);
    from_json(j.at("distribution"), d);
    s.distribution = d;
  }
  if (s.interaction != "curie-weiss" && s.interaction != "independent" && s.interaction != "custom-table")
    throw std::invalid_argument("unknown interaction '" + s.interaction + "' (curie-weiss, independent, custom-table)");
  if (!(s.coupling >= 0.0)) throw std::invalid_argument("K must be nonnegative");
}

BuiltModel build_model(const ModelSpec& spec) {
  BuiltModel out;
  if (spec.family == "cliques") {
    auto tree = build_overlapping_cliques(spec.cliques);
    out.hypergraph = std::move(tree.hypergraph);
    out.edge_depth = std::move(tree.edge_depth);
  } else {
    out.hypergraph = Hypergraph::from_edges(spec.edges);
  }
  const auto& h = out.hypergraph;
  if (spec.distribution)
    out.amplitudes = sample_amplitudes(h.num_edges(), {*spec.distribution, spec.coupling, spec.seed});

  if (spec.interaction == "independent") {
    out.interactions = independent_model(h);
  } else if (spec.interaction == "curie-weiss") {
    out.interactions = out.amplitudes.empty() ? curie_weiss_model(h, spec.coupling)
                                              : curie_weiss_model(h, spec.coupling, out.amplitudes);
  } else {
    // h_e = exp(K c_e phi_e) with phi_e read from the per-size table.
    out.interactions.spins = SpinSpace::ising();
    for (const auto& e : h.edges()) {
      auto it = spec.tables.find(e.size());
      if (it == spec.tables.end())
        throw std::invalid_argument("no custom table for edges of size " + std::to_string(e.size()));
      if (it->second.size() != (std::size_t{1} << e.size()))
        throw std::invalid_argument("custom table for size " + std::to_string(e.size()) + " needs " +
                                    std::to_string(std::size_t{1} << e.size()) + " entries");
      const double scale = spec.coupling * (out.amplitudes.empty() ? 1.0 : out.amplitudes[e.id]);
      Eigen::ArrayXd values = Eigen::Map<const Eigen::ArrayXd>(it->second.data(),
                                                                static_cast<Eigen::Index>(it->second.size()));
      out.interactions.tables.emplace_back(e.size(), 2, (scale * values).exp());
    }
  }
  out.interactions.validate(h);
  return out;
}

}  // namespace hmrf
