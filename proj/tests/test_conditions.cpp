#include <doctest.h>

#include <cmath>
#include <random>

#include "hmrf/conditions.hpp"
#include "hmrf/models.hpp"
#include "oracles.hpp"

using namespace hmrf;

namespace {

// Independent reference for the path functional sup.
double brute_path_sup(const SimpleGraph& g, const std::vector<double>& delta, const std::vector<std::size_t>& radii) {
  double best = -INFINITY;
  for (NodeId x = 0; x < g.size(); ++x)
    for (std::size_t r : radii) {
      const std::size_t ball = g.ball(x, r).size();
      for (std::size_t n = r + 1; n <= ball; ++n)
        for (const auto& p : oracle::paths(g, x, r, n)) {
          double sum = 0.0;
          for (NodeId v : p) sum += std::log(std::expm1(2.0 * delta[v]));
          best = std::max(best, sum / static_cast<double>(p.size()));
        }
    }
  return best;
}

double brute_animal_max(const SimpleGraph& g, const std::vector<std::size_t>& radii) {
  double best = -INFINITY;
  for (NodeId x = 0; x < g.size(); ++x)
    for (std::size_t r : radii)
      for (const auto& a : oracle::animals(g, x, r, g.size())) {
        double sum = 0.0;
        for (NodeId v : a) sum += std::log(static_cast<double>(g.degree(v)));
        best = std::max(best, sum / static_cast<double>(a.size()));
      }
  return best;
}

TemperednessCertificate closed_form(double abar) {
  TemperednessCertificate c;
  c.abar = abar;
  c.status = TemperednessCertificate::Status::ClosedForm;
  return c;
}

SimpleGraph single_edge() {
  SimpleGraph g(2);
  g.add_edge(0, 1);
  return g;
}

}  // namespace

TEST_CASE("names round trip") {
  for (auto c : {Criterion::Dobrushin, Criterion::TemperedMain, Criterion::ExplicitKappa, Criterion::PhiClass})
    CHECK(criterion_from_string(to_string(c)) == c);
  CHECK_THROWS_AS(criterion_from_string("nonsense"), std::invalid_argument);
  CHECK(exit_code(Verdict::Holds) == 0);
  CHECK(exit_code(Verdict::HoldsToDepth) == 0);
  CHECK(exit_code(Verdict::Fails) == 1);
  CHECK(exit_code(Verdict::Inconclusive) == 2);
}

TEST_CASE("dobrushin sum") {
  auto h = Hypergraph::from_edges({{1, 2, 3}, {1, 4, 5}});
  auto fail = dobrushin_check(h, InteractionBounds::from_oscillations({0.6, 0.6}));
  CHECK(fail.verdict == Verdict::Fails);
  CHECK(fail.supremum == doctest::Approx(2.4));
  CHECK(fail.witness["vertex"] == 1);

  auto hold = dobrushin_check(h, InteractionBounds::from_oscillations({0.4, 0.4}));
  CHECK(hold.holds());
  CHECK(hold.supremum == doctest::Approx(1.6));
  CHECK(hold.margin == doctest::Approx(0.4));
}

TEST_CASE("dobrushin threshold on cliques") {
  const double c = curie_weiss_oscillation(3);
  const double k = dobrushin_threshold(3, c);
  CliqueTreeSpec spec;
  spec.degrees = {3};
  spec.depth = 3;
  auto tree = build_overlapping_cliques(spec);
  auto below = dobrushin_check(tree.hypergraph, curie_weiss_model(tree.hypergraph, 0.999 * k).bounds());
  auto above = dobrushin_check(tree.hypergraph, curie_weiss_model(tree.hypergraph, 1.001 * k).bounds());
  CHECK(below.holds());
  CHECK(above.verdict == Verdict::Fails);
}

TEST_CASE("tree closed form flips at the threshold") {
  for (std::size_t n : {2, 3, 5}) {
    const double c = 1.3;
    const double k = tree_threshold(n, c);
    CHECK(closed_form_tree_check(n, (1 - 1e-6) * k * c, 1e-9).verdict == Verdict::Holds);
    CHECK(closed_form_tree_check(n, (1 + 1e-6) * k * c, 1e-9).verdict == Verdict::Fails);
    CHECK(closed_form_tree_check(n, 0.0, 0.1).verdict == Verdict::Holds);
  }
}

TEST_CASE("mixed path average") {
  auto g = single_edge();
  // e^{2 delta} - 1 equal to 1 and 1/4: average log is -log 2
  auto bounds = InteractionBounds::from_oscillations({0.5 * std::log(2.0), 0.5 * std::log(1.25)});
  MainCheckOptions opt;
  opt.depth_cap = 1;
  opt.epsilon = 0.1;
  ExpansionBudget budget;
  auto holds = main_uniqueness_check(g, bounds, closed_form(0.5), opt, budget);
  CHECK(holds.supremum == doctest::Approx(-std::log(2.0)));
  CHECK(holds.verdict == Verdict::HoldsToDepth);
  ExpansionBudget b2;
  auto fails = main_uniqueness_check(g, bounds, closed_form(0.6), opt, b2);
  CHECK(fails.verdict == Verdict::Fails);
  CHECK(fails.margin < 0);
}

TEST_CASE("main check agrees with brute force on random graphs") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 0.8);
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    auto g = oracle::random_graph(8, 0.3, seed);
    std::vector<double> delta(g.size());
    for (auto& d : delta) d = u(rng);
    MainCheckOptions opt;
    opt.depth_cap = 3;
    opt.epsilon = 0.05;
    ExpansionBudget budget;
    auto report = main_uniqueness_check(g, InteractionBounds::from_oscillations(delta), closed_form(0.2), opt, budget);
    CHECK(report.supremum == doctest::Approx(brute_path_sup(g, delta, {1, 2, 3})).epsilon(1e-12));
  }
}

TEST_CASE("zero oscillation gives minus infinity without arithmetic") {
  auto g = single_edge();
  MainCheckOptions opt;
  opt.depth_cap = 1;
  ExpansionBudget budget;
  auto r = main_uniqueness_check(g, InteractionBounds::from_oscillations({0.0, 0.0}), closed_form(1.0), opt, budget);
  CHECK(r.supremum == -INFINITY);
  CHECK(r.holds());
}

TEST_CASE("main check refuses a refuted certificate and bad epsilon") {
  auto g = single_edge();
  auto b = InteractionBounds::from_oscillations({0.1, 0.1});
  auto bad = closed_form(1.0);
  bad.status = TemperednessCertificate::Status::Refuted;
  MainCheckOptions opt;
  ExpansionBudget budget;
  CHECK_THROWS_AS(main_uniqueness_check(g, b, bad, opt, budget), std::invalid_argument);
  opt.epsilon = 0.0;
  CHECK_THROWS_AS(main_uniqueness_check(g, b, closed_form(1.0), opt, budget), std::invalid_argument);

  auto unsure = closed_form(1.0);
  unsure.status = TemperednessCertificate::Status::Inconclusive;
  opt.epsilon = 0.1;
  CHECK(main_uniqueness_check(g, b, unsure, opt, budget).verdict == Verdict::Inconclusive);
}

TEST_CASE("temperedness on a regular tree") {
  auto g = regular_tree(3, 5);
  CertifyOptions opt;
  opt.depth_cap = 3;
  opt.probes = {0};
  opt.degrees.assign(g.size(), 3);
  ExpansionBudget budget;
  auto cert = certify_temperedness(g, GrowthFunction::log(), RadiusSchedule::linear(3), opt, budget);
  CHECK(cert.status == TemperednessCertificate::Status::VerifiedToDepth);
  CHECK(cert.abar == doctest::Approx(std::log(3.0)));
  CHECK(cert.usable());
}

TEST_CASE("temperedness maximum matches a subset scan") {
  for (std::uint64_t seed = 5; seed <= 12; ++seed) {
    auto g = oracle::random_graph(8, 0.35, seed);
    for (NodeId v = 0; v + 1 < 8; v += 2) g.add_edge(v, v + 1);  // no isolated nodes, log degree stays finite
    CertifyOptions opt;
    opt.depth_cap = 2;
    ExpansionBudget budget;
    auto cert = certify_temperedness(g, GrowthFunction::log(), RadiusSchedule::linear(2), opt, budget);
    double expected = brute_animal_max(g, {1, 2});
    if (std::isfinite(expected)) CHECK(cert.observed_max == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("factorial degrees refute any fixed abar") {
  auto tree = factorial_tree(3, 8);
  CertifyOptions opt;
  opt.depth_cap = 1;
  opt.abar = 5.0;
  opt.degrees = tree.nominal_degree;
  ExpansionBudget budget;
  auto cert = certify_temperedness(tree.graph, GrowthFunction::log(), RadiusSchedule::linear(1), opt, budget);
  CHECK(cert.status == TemperednessCertificate::Status::Refuted);
  REQUIRE(cert.witness);
  CHECK(cert.witness->average > 5.0);
}

TEST_CASE("budget exhaustion is inconclusive, never a pass") {
  auto g = regular_tree(3, 6);
  CertifyOptions opt;
  opt.depth_cap = 4;
  opt.abar = 100.0;
  ExpansionBudget tiny(20);
  auto cert = certify_temperedness(g, GrowthFunction::log(), RadiusSchedule::linear(4), opt, tiny);
  CHECK(cert.status == TemperednessCertificate::Status::Inconclusive);
}

TEST_CASE("explicit kappa bound") {
  auto g = regular_tree(3, 3);
  std::vector<std::size_t> degrees(g.size(), 3);
  const double abar = std::log(3.0), eps = 0.5;
  const double allowed = std::exp(-7 * abar - eps) * (abar + std::log(3.0));
  auto cert = closed_form(abar);
  std::vector<double> below(g.size(), 0.999 * allowed), above(g.size(), 0.999 * allowed);
  above[4] = 1.001 * allowed;
  auto ok = explicit_kappa_check(g, InteractionBounds::from_oscillations(below), cert, eps, degrees);
  CHECK(ok.holds());
  auto bad = explicit_kappa_check(g, InteractionBounds::from_oscillations(above), cert, eps, degrees);
  CHECK(bad.verdict == Verdict::Fails);
  CHECK(bad.witness["edge"] == 4);
  CHECK_THROWS(explicit_kappa_check(g, InteractionBounds::from_oscillations(below), cert, 1.5, degrees));
}

TEST_CASE("explicit kappa implies the path condition") {
  auto g = regular_tree(3, 4);
  std::vector<std::size_t> degrees(g.size(), 3);
  const double abar = std::log(3.0), eps = 0.2;
  auto cert = closed_form(abar);
  std::vector<double> delta(g.size(), std::exp(-7 * abar - eps) * 2 * abar);
  auto bounds = InteractionBounds::from_oscillations(delta);
  REQUIRE(explicit_kappa_check(g, bounds, cert, eps, degrees).holds());
  MainCheckOptions opt;
  opt.depth_cap = 3;
  opt.epsilon = eps;
  opt.probes = {0};
  ExpansionBudget budget;
  CHECK(main_uniqueness_check(g, bounds, cert, opt, budget).holds());
}

TEST_CASE("phi class series and hub separation") {
  SimpleGraph far(7);
  for (NodeId i = 0; i + 1 < 7; ++i) far.add_edge(i, i + 1);
  PhiClassOptions opt;
  opt.phi = GrowthFunction::log_squared();
  opt.g = GrowthFunction::log();
  opt.t = IndexSequence::double_exponential(2.0);
  opt.hub_threshold = 3;
  // terms 2^{k+1} / 4^k sum to 2 exactly
  auto res = phi_class_certificate(far, opt);
  CHECK(res.violations.empty());
  REQUIRE(res.ratio);
  CHECK(*res.ratio == doctest::Approx(0.5));
  CHECK(res.bbar == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(res.certificate.status == TemperednessCertificate::Status::ClosedForm);
  CHECK(res.certificate.abar == doctest::Approx(4.0));

  PhiClassOptions near = opt;
  near.phi = GrowthFunction::constant(2.0);
  near.hub_threshold = 2;
  auto adjacent = phi_class_certificate(far, near);
  CHECK_FALSE(adjacent.violations.empty());
  CHECK(adjacent.violations.front().distance == Distance(1));
  CHECK(adjacent.certificate.status == TemperednessCertificate::Status::Refuted);

  PhiClassOptions diverging = opt;
  diverging.phi = GrowthFunction::constant(2.0);
  auto lower = phi_class_certificate(far, diverging);
  CHECK(lower.bbar_is_lower_bound);
  CHECK(lower.certificate.status == TemperednessCertificate::Status::Inconclusive);
}

TEST_CASE("scaling every factor leaves the oscillations unchanged") {
  CliqueTreeSpec spec;
  spec.degrees = {3};
  spec.depth = 3;
  auto tree = build_overlapping_cliques(spec);
  auto model = curie_weiss_model(tree.hypergraph, 0.3);
  auto scaled = model;
  for (auto& t : scaled.tables) t = t.scaled(7.3);
  auto a = model.bounds(), b = scaled.bounds();
  for (std::size_t e = 0; e < a.size(); ++e) CHECK(b.delta[e] == doctest::Approx(a.delta[e]).epsilon(1e-12));
  CHECK(dobrushin_check(tree.hypergraph, a).verdict == dobrushin_check(tree.hypergraph, b).verdict);
}

TEST_CASE("radius schedules must increase") {
  CHECK_THROWS(RadiusSchedule({2, 2}));
  RadiusSchedule s({1, 3});
  s.set_node(2, {2, 5});
  CHECK(std::vector<std::size_t>(s.for_node(2).begin(), s.for_node(2).end()) == std::vector<std::size_t>{2, 5});
  CHECK(std::vector<std::size_t>(s.for_node(0).begin(), s.for_node(0).end()) == std::vector<std::size_t>{1, 3});
}
