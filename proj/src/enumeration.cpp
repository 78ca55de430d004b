#include "hmrf/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hmrf {

namespace {

// Reverse-search enumeration of connected sets containing the root. Each call
// branches on the first candidate that joins the set; earlier candidates stay
// marked ("banned") for later siblings, so every animal has a unique parent.
class AnimalSearch {
public:
  AnimalSearch(const SimpleGraph& g, std::vector<char> in_ball, std::size_t min_size, std::size_t size_cap,
               const NodeSetVisitor& visit, ExpansionBudget& budget, std::span<const double> preference)
      : g_(g), in_ball_(std::move(in_ball)), marked_(g.size(), 0), min_size_(min_size), size_cap_(size_cap),
        visit_(visit), budget_(budget), preference_(preference) {}

  StreamStatus run(NodeId root) {
    marked_[root] = 1;
    animal_.push_back(root);
    std::vector<NodeId> candidates;
    add_neighbors(root, candidates);
    extend(candidates);
    return status_;
  }

private:
  void add_neighbors(NodeId v, std::vector<NodeId>& out) {
    auto first = out.size();
    for (NodeId w : g_.neighbors(v)) {
      if (!in_ball_[w] || marked_[w]) continue;
      marked_[w] = 1;
      out.push_back(w);
    }
    if (!preference_.empty())
      std::stable_sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(),
                       [&](NodeId a, NodeId b) { return preference_[a] > preference_[b]; });
  }

  // Returns false when the stream must stop.
  bool extend(const std::vector<NodeId>& candidates) {
    if (animal_.size() >= min_size_) {
      ++status_.emitted;
      if (!visit_(std::span<const NodeId>(animal_))) {
        status_.stopped_by_visitor = true;
        return false;
      }
    }
    if (animal_.size() == size_cap_) {
      if (!candidates.empty()) status_.size_capped = true;
      return true;
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (!budget_.consume()) {
        status_.budget_exhausted = true;
        return false;
      }
      NodeId c = candidates[i];
      std::vector<NodeId> next(candidates.begin() + static_cast<std::ptrdiff_t>(i) + 1, candidates.end());
      auto added_from = next.size();
      add_neighbors(c, next);
      animal_.push_back(c);
      bool go_on = extend(next);
      animal_.pop_back();
      for (auto j = added_from; j < next.size(); ++j) marked_[next[j]] = 0;
      if (!go_on) return false;
    }
    return true;
  }

  const SimpleGraph& g_;
  std::vector<char> in_ball_;
  std::vector<char> marked_;
  std::size_t min_size_;
  std::size_t size_cap_;
  const NodeSetVisitor& visit_;
  ExpansionBudget& budget_;
  std::span<const double> preference_;
  std::vector<NodeId> animal_;
  StreamStatus status_;
};

}  // namespace

std::vector<char> ball_mask(const SimpleGraph& g, NodeId x, std::size_t r) {
  std::vector<char> mask(g.size(), 0);
  for (NodeId v : g.ball(x, r)) mask[v] = 1;
  return mask;
}

StreamStatus enumerate_animals(const SimpleGraph& g, NodeId x, std::size_t r, std::size_t size_cap,
                               const NodeSetVisitor& visit, ExpansionBudget& budget,
                               std::span<const double> preference) {
  if (size_cap < r + 1) throw std::invalid_argument("size_cap must be at least r + 1");
  if (!preference.empty() && preference.size() != g.size())
    throw std::invalid_argument("preference must cover every node");
  AnimalSearch search(g, ball_mask(g, x, r), r + 1, size_cap, visit, budget, preference);
  return search.run(x);
}

StreamStatus enumerate_paths(const SimpleGraph& g, NodeId x, std::size_t r, std::size_t num_nodes,
                             const NodeSetVisitor& visit, ExpansionBudget& budget) {
  if (num_nodes < r + 1) throw std::invalid_argument("paths in Theta^N_r need N >= r + 1");
  auto mask = ball_mask(g, x, r);
  std::size_t yielded = 0;
  auto status = walk_simple_paths(
      g, x, mask, num_nodes,
      [&](std::span<const NodeId> path) {
        if (path.size() < num_nodes) return WalkStep::Extend;
        ++yielded;
        return visit(path) ? WalkStep::Prune : WalkStep::Stop;
      },
      budget);
  status.emitted = yielded;
  return status;
}

double animal_average(std::span<const NodeId> animal, const GrowthFunction& g,
                      std::span<const std::size_t> degrees) {
  if (animal.empty()) throw std::invalid_argument("animal is empty");
  double sum = 0.0;
  for (NodeId v : animal) {
    if (v >= degrees.size()) throw std::out_of_range("animal node without a degree");
    sum += g(degrees[v]);
  }
  return sum / static_cast<double>(animal.size());
}

double log_oscillation_term(double delta) {
  if (delta < 0.0 || std::isnan(delta)) throw std::invalid_argument("oscillation must be nonnegative");
  if (delta == 0.0) return -std::numeric_limits<double>::infinity();
  const double two_delta = 2.0 * delta;
  if (two_delta > 30.0) return two_delta + std::log1p(-std::exp(-two_delta));
  return std::log(std::expm1(two_delta));
}

PathOscillation path_oscillation_average(std::span<const NodeId> path, std::span<const double> delta) {
  if (path.empty()) throw std::invalid_argument("path is empty");
  PathOscillation out;
  double sum = 0.0;
  for (NodeId e : path) {
    if (e >= delta.size()) throw std::out_of_range("path node without an oscillation");
    double d = delta[e];
    if (d < 0.0 || std::isnan(d)) throw std::invalid_argument("oscillation must be nonnegative");
    if (d == 0.0) {
      ++out.zero_terms;
      continue;
    }
    sum += log_oscillation_term(d);
  }
  out.value = out.zero_terms > 0 ? -std::numeric_limits<double>::infinity()
                                 : sum / static_cast<double>(path.size());
  return out;
}

PathCountReport verify_path_count_bound(const SimpleGraph& g, NodeId x, std::span<const std::size_t> schedule,
                                        double abar, std::size_t max_nodes, ExpansionBudget& budget) {
  PathCountReport report;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const std::size_t radius = schedule[k];
    if (k > 0 && radius <= schedule[k - 1]) throw std::invalid_argument("schedule must be strictly increasing");
    if (radius > max_nodes) break;

    std::vector<std::uint64_t> counts(max_nodes + 1, 0);
    auto mask = ball_mask(g, x, radius);
    auto status = walk_simple_paths(
        g, x, mask, max_nodes,
        [&](std::span<const NodeId> path) {
          if (path.size() >= radius + 1) ++counts[path.size()];
          return WalkStep::Extend;
        },
        budget);
    if (!status.complete()) report.complete = false;

    for (std::size_t n = radius; n <= max_nodes; ++n) {
      PathCountRow row{k + 1, radius, n, counts[n], std::exp(abar * static_cast<double>(n))};
      double ratio = static_cast<double>(row.count) / row.bound;
      report.max_ratio = std::max(report.max_ratio, ratio);
      if (static_cast<double>(row.count) > row.bound && !report.witness) {
        report.passed = false;
        report.witness = row;
      }
      report.rows.push_back(row);
    }
    if (!status.complete()) break;
  }
  return report;
}

void write_path_count_csv(std::ostream& out, const PathCountReport& report) {
  out << "k,N_k,N,count,bound\r\n";
  for (const auto& row : report.rows)
    out << row.k << ',' << row.radius << ',' << row.num_nodes << ',' << row.count << ','
        << row.bound << "\r\n";
}

}  // namespace hmrf
