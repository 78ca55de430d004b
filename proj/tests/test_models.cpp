#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "hmrf/line_graph.hpp"
#include "hmrf/models.hpp"

using namespace hmrf;

namespace {

CliqueTree cliques(std::vector<std::size_t> degrees, std::size_t depth) {
  CliqueTreeSpec spec;
  spec.degrees = std::move(degrees);
  spec.depth = depth;
  return build_overlapping_cliques(spec);
}

}  // namespace

TEST_CASE("clique tree counts") {
  auto two = cliques({3}, 2);
  CHECK(two.hypergraph.num_edges() == 4);
  CHECK(two.hypergraph.num_vertices() == 9);
  auto three = cliques({3}, 3);
  CHECK(three.hypergraph.num_edges() == 10);
  CHECK(three.hypergraph.num_vertices() == 21);
  CHECK(cliques({3}, 5).hypergraph.num_edges() == 46);
  CHECK(three.edge_depth.front() == 1);
  CHECK(three.edge_depth.back() == 3);

  // edges at depth m: n_1 prod_{j=2}^{m-1} (n_j - 1)
  auto mixed = cliques({4, 3, 5}, 4);
  std::vector<std::size_t> per_depth(5, 0);
  for (auto d : mixed.edge_depth) ++per_depth[d];
  CHECK(per_depth[1] == 1);
  CHECK(per_depth[2] == 4);
  CHECK(per_depth[3] == 4 * 2);
  CHECK(per_depth[4] == 4 * 2 * 4);
  for (const auto& e : mixed.hypergraph.edges()) {
    std::size_t expected = std::vector<std::size_t>{0, 4, 3, 5, 5}[mixed.edge_depth[e.id]];
    CHECK(e.size() == expected);
  }
}

TEST_CASE("every internal edge has line degree n_m") {
  auto tree = cliques({3, 4}, 4);
  LineGraph line(tree.hypergraph);
  CHECK(line.graph().is_forest());
  for (const auto& e : tree.hypergraph.edges())
    if (tree.edge_depth[e.id] < 4) CHECK(line.degree(e.id) == e.size());
}

TEST_CASE("schedule validation matches l_s >= phi(n)") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> deg(2, 40), len(1, 16), plateaus(1, 4);
  int valid = 0, invalid = 0;
  for (int trial = 0; trial < 300; ++trial) {
    CliqueSchedule s;
    bool ok = true;
    for (std::size_t i = 0, k = plateaus(rng); i < k; ++i) {
      s.base_degrees.push_back(deg(rng));
      s.plateau_lengths.push_back(len(rng));
      const double need = std::pow(std::log(static_cast<double>(s.base_degrees.back())), 2);
      ok = ok && static_cast<double>(s.plateau_lengths.back()) >= need;
    }
    CliqueTreeSpec spec;
    spec.schedule = s;
    spec.depth = 6;
    if (ok) {
      ++valid;
      auto n = spec.resolved_degrees();
      CHECK(n.size() == 6);
      CHECK(n.front() == s.base_degrees.front());
    } else {
      ++invalid;
      CHECK_THROWS_WITH_AS(spec.validate(), doctest::Contains("s="), std::invalid_argument);
    }
  }
  CHECK(valid > 10);
  CHECK(invalid > 10);
}

TEST_CASE("schedule plateaus expand in order") {
  CliqueSchedule s{{2, 3}, {1, 2}, GrowthFunction::log_squared()};
  CliqueTreeSpec spec;
  spec.schedule = s;
  spec.depth = 5;
  CHECK(spec.resolved_degrees() == std::vector<std::size_t>{2, 3, 3, 3, 3});
  CliqueSchedule bad{{2, 20}, {1, 2}, GrowthFunction::log_squared()};
  spec.schedule = bad;
  CHECK_THROWS_WITH(spec.validate(), doctest::Contains("s=2"));
}

TEST_CASE("curie-weiss tables against direct pair sums") {
  const double k = 0.37;
  for (std::size_t n = 2; n <= 10; ++n) {
    auto table = curie_weiss_factor_table(n, k);
    REQUIRE(table.num_entries() == (std::size_t{1} << n));
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t idx = 0; idx < table.num_entries(); ++idx) {
      auto st = table.states(idx);
      double pairs = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs += (st[i] ? 1.0 : -1.0) * (st[j] ? 1.0 : -1.0);
      CHECK(table[idx] == doctest::Approx(std::exp(k / static_cast<double>(n) * pairs)).epsilon(1e-13));
      lo = std::min(lo, pairs);
      hi = std::max(hi, pairs);
    }
    const double delta = k / static_cast<double>(n) * (hi - lo);
    CHECK(delta == doctest::Approx(k * curie_weiss_oscillation(n)).epsilon(1e-13));
    CHECK(std::log(table.max() / table.min()) == doctest::Approx(delta).epsilon(1e-12));
  }
  CHECK(curie_weiss_oscillation(3) == doctest::Approx(4.0 / 3.0));
  CHECK(curie_weiss_oscillation(4) == doctest::Approx(2.0));
  CHECK_THROWS_AS(curie_weiss_oscillation(1), std::invalid_argument);
  CHECK_THROWS_AS(curie_weiss_factor_table(kCurieWeissTableCap + 1, k), std::length_error);
}

TEST_CASE("table indexing is first vertex most significant") {
  auto t = FactorTable(2, 2, (Eigen::ArrayXd(4) << 1, 2, 3, 4).finished());
  std::vector<SpinState> s{1, 0};
  CHECK(t.at(s) == 3);
  CHECK(t.index(s) == 2);
  CHECK(t.states(1) == std::vector<SpinState>{0, 1});
}

TEST_CASE("amplitude-weighted curie-weiss") {
  auto tree = cliques({3}, 3);
  std::vector<double> c(tree.hypergraph.num_edges());
  std::iota(c.begin(), c.end(), 1.0);
  auto model = curie_weiss_model(tree.hypergraph, 0.1, c);
  auto b = model.bounds();
  for (std::size_t e = 0; e < c.size(); ++e) CHECK(b.delta[e] == doctest::Approx(0.1 * c[e]).epsilon(1e-12));
}

TEST_CASE("counter rng is deterministic and keyed") {
  CHECK(counter_uniform(1, 2, 3) == counter_uniform(1, 2, 3));
  CHECK(counter_uniform(1, 2, 3) != counter_uniform(1, 2, 4));
  CHECK(counter_uniform(1, 2, 3) != counter_uniform(2, 2, 3));
  RandomInteractionSpec spec{AmplitudeDistribution::exponential(2.0), 0.5, 42};
  auto a = sample_amplitudes(100, spec);
  auto b = sample_amplitudes(200, spec);
  CHECK(std::equal(a.begin(), a.end(), b.begin()));
  for (double x : a) CHECK(x > 0.0);
}

TEST_CASE("sample means lie within three standard errors") {
  for (auto d : {AmplitudeDistribution::exponential(1.5), AmplitudeDistribution::uniform(0.2, 1.7),
                 AmplitudeDistribution::degenerate(0.8)}) {
    const std::size_t n = 20000;
    auto c = sample_amplitudes(n, {d, 1.0, 9});
    const double mean = std::accumulate(c.begin(), c.end(), 0.0) / n;
    const double se = std::sqrt(d.variance() / n);
    CHECK(std::abs(mean - d.mean()) <= 3 * se + 1e-12);
  }
}

TEST_CASE("tau closed forms") {
  auto ex = AmplitudeDistribution::exponential(1.0);
  CHECK(ex.tau(0.25) == doctest::Approx(0.5 / 0.5));
  CHECK(ex.coupling_limit() == doctest::Approx(0.5));
  CHECK_THROWS_AS(ex.tau(0.5), std::domain_error);

  auto un = AmplitudeDistribution::uniform(0.0, 1.0);
  CHECK(un.tau(0.5) == doctest::Approx(std::expm1(1.0) - 1.0));
  CHECK(std::isinf(un.coupling_limit()));

  auto dg = AmplitudeDistribution::degenerate(2.0);
  CHECK(dg.tau(0.1) == doctest::Approx(std::expm1(0.4)));

  // Monte Carlo estimate of E[e^{2Kc} - 1]
  auto c = sample_amplitudes(50000, {ex, 1.0, 3});
  double acc = 0.0;
  for (double x : c) acc += std::expm1(0.2 * x);
  CHECK(acc / c.size() == doctest::Approx(ex.tau(0.1)).epsilon(0.02));
}

TEST_CASE("disorder threshold solves tau = e^{-abar}") {
  auto d = AmplitudeDistribution::exponential(1.0);
  auto th = tau_threshold(d, std::log(3.0));
  // 2K / (1 - 2K) = 1/3 gives K = 1/8
  CHECK(th.k_star == doctest::Approx(0.125).epsilon(1e-10));
  CHECK(d.tau(th.k_star) == doctest::Approx(th.target).epsilon(1e-9));

  for (auto dist : {AmplitudeDistribution::uniform(0.5, 2.0), AmplitudeDistribution::degenerate(1.3)}) {
    auto t = tau_threshold(dist, 1.1);
    CHECK(dist.tau(t.k_star) == doctest::Approx(std::exp(-1.1)).epsilon(1e-9));
  }
  CHECK(std::isinf(tau_threshold(AmplitudeDistribution::degenerate(0.0), 1.0).k_star));
}

TEST_CASE("generated trees") {
  auto reg = regular_tree(3, 3);
  CHECK(reg.size() == 1 + 3 + 6 + 12);
  CHECK(reg.degree(0) == 3);
  CHECK(reg.is_forest());

  auto fac = factorial_tree(3, 6);
  CHECK(fac.nominal_degree[0] == 1);
  for (NodeId v = 0; v < fac.graph.size(); ++v) {
    std::size_t f = 1;
    for (std::size_t i = 2; i <= fac.level[v] + 1; ++i) f *= i;
    CHECK(fac.nominal_degree[v] == f);
  }
  CHECK(*std::max_element(fac.level.begin(), fac.level.end()) == 6);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto t = random_tree(60, 4, seed);
    CHECK(t.size() == 60);
    CHECK(t.num_edges() == 59);
    CHECK(t.is_forest());
    for (auto d : t.degrees()) CHECK(d <= 4);
  }
}

TEST_CASE("model spec round trip and build") {
  auto j = nlohmann::json::parse(R"({"family":"cliques","degrees":[3],"depth":3,"interaction":"curie-weiss","K":0.1,
                                     "distribution":{"kind":"exponential","rate":2.0},"seed":5})");
  auto spec = j.get<ModelSpec>();
  nlohmann::json back = spec;
  CHECK(back.get<ModelSpec>().coupling == doctest::Approx(0.1));
  auto built = build_model(spec);
  CHECK(built.hypergraph.num_edges() == 10);
  CHECK(built.amplitudes.size() == 10);
  auto delta = built.interactions.bounds().delta;
  for (std::size_t e = 0; e < 10; ++e) CHECK(delta[e] == doctest::Approx(0.1 * built.amplitudes[e]).epsilon(1e-12));

  auto custom = nlohmann::json::parse(R"({"family":"hypergraph","edges":[[1,2],[2,3]],"interaction":"custom-table",
                                          "tables":{"2":[1,-1,-1,1]},"K":0.5})");
  auto m = build_model(custom.get<ModelSpec>());
  CHECK(m.interactions.bounds().delta[0] == doctest::Approx(1.0));

  auto bad = nlohmann::json::parse(R"({"family":"hypergraph","edges":[[1,2,3]],"interaction":"custom-table",
                                       "tables":{"2":[1,-1,-1,1]},"K":0.5})");
  CHECK_THROWS_AS(build_model(bad.get<ModelSpec>()), std::invalid_argument);
}
