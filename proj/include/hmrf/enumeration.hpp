#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "hmrf/graph.hpp"
#include "hmrf/growth.hpp"

namespace hmrf {

/// Shared node-expansion counter for exhaustive searches. Thread safe.
class ExpansionBudget {
public:
  static constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

  explicit ExpansionBudget(std::size_t limit = kUnlimited) : limit_(limit) {}

  /// Takes one unit; false once the limit has been reached.
  bool consume() {
    if (limit_ == kUnlimited) {
      used_.fetch_add(1, std::memory_order_relaxed);
      return true;
    }
    auto before = used_.fetch_add(1, std::memory_order_relaxed);
    if (before >= limit_) {
      used_.fetch_sub(1, std::memory_order_relaxed);
      exhausted_.store(true, std::memory_order_relaxed);
      return false;
    }
    return true;
  }

  std::size_t used() const { return used_.load(std::memory_order_relaxed); }
  std::size_t limit() const { return limit_; }
  bool exhausted() const { return exhausted_.load(std::memory_order_relaxed); }

private:
  std::size_t limit_;
  std::atomic<std::size_t> used_{0};
  std::atomic<bool> exhausted_{false};
};

/// How an enumeration stream ended. A stream that was cut short always says so.
struct StreamStatus {
  std::size_t emitted = 0;
  bool budget_exhausted = false;
  bool size_capped = false;       // larger animals exist beyond size_cap
  bool stopped_by_visitor = false;

  bool complete() const { return !budget_exhausted && !stopped_by_visitor; }
};

/// Visitor receives the current animal (unordered) or path (ordered from the
/// root); returning false stops the stream.
using NodeSetVisitor = std::function<bool(std::span<const NodeId>)>;

/// Every connected A within B_r(x) containing x with r+1 <= |A| <= size_cap,
/// each exactly once. `preference`, when non-empty, orders the branching so
/// that high-preference nodes join animals first (completeness unaffected).
StreamStatus enumerate_animals(const SimpleGraph& g, NodeId x, std::size_t r, std::size_t size_cap,
                               const NodeSetVisitor& visit, ExpansionBudget& budget,
                               std::span<const double> preference = {});

/// Simple paths from x with exactly `num_nodes` nodes, all inside B_r(x)
/// (the family Theta^N_r(x) with N = num_nodes). Requires num_nodes >= r + 1.
StreamStatus enumerate_paths(const SimpleGraph& g, NodeId x, std::size_t r, std::size_t num_nodes,
                             const NodeSetVisitor& visit, ExpansionBudget& budget);

/// Decision returned by a path-walk visitor after each extension.
enum class WalkStep { Extend, Prune, Stop };

/// Depth-first walk over simple paths from x restricted to `allowed` nodes,
/// calling `visit` on every prefix (including the single node x) with at most
/// `max_nodes` nodes.
template <class Visitor>
StreamStatus walk_simple_paths(const SimpleGraph& g, NodeId x, std::span<const char> allowed,
                               std::size_t max_nodes, Visitor&& visit, ExpansionBudget& budget) {
  StreamStatus status;
  if (max_nodes == 0 || !allowed[x]) return status;
  std::vector<char> on_path(g.size(), 0);
  std::vector<NodeId> path{x};
  std::vector<std::size_t> cursor{0};
  on_path[x] = 1;
  if (!budget.consume()) {
    status.budget_exhausted = true;
    return status;
  }
  WalkStep first = visit(std::span<const NodeId>(path));
  ++status.emitted;
  if (first == WalkStep::Stop) {
    status.stopped_by_visitor = true;
    return status;
  }
  if (first == WalkStep::Prune || max_nodes == 1) return status;

  while (!path.empty()) {
    NodeId tip = path.back();
    auto nbrs = g.neighbors(tip);
    std::size_t& i = cursor.back();
    bool advanced = false;
    while (i < nbrs.size()) {
      NodeId w = nbrs[i++];
      if (!allowed[w] || on_path[w]) continue;
      if (!budget.consume()) {
        status.budget_exhausted = true;
        return status;
      }
      path.push_back(w);
      on_path[w] = 1;
      ++status.emitted;
      WalkStep step = visit(std::span<const NodeId>(path));
      if (step == WalkStep::Stop) {
        status.stopped_by_visitor = true;
        return status;
      }
      if (step == WalkStep::Extend && path.size() < max_nodes) {
        cursor.push_back(0);
        advanced = true;
        break;
      }
      on_path[w] = 0;
      path.pop_back();
    }
    if (advanced) continue;
    on_path[path.back()] = 0;
    path.pop_back();
    cursor.pop_back();
  }
  return status;
}

/// Membership mask of B_r(x).
std::vector<char> ball_mask(const SimpleGraph& g, NodeId x, std::size_t r);

/// Degree-growth average over an animal: mean of g(degree) over its nodes.
double animal_average(std::span<const NodeId> animal, const GrowthFunction& g,
                      std::span<const std::size_t> degrees);

/// log(e^{2 delta} - 1), or -infinity when delta == 0; stable for large delta.
double log_oscillation_term(double delta);

/// Average of log(e^{2 delta(e)} - 1) over the nodes of a path. Edges with
/// delta == 0 make the average -infinity; they are counted in `zero_terms`
/// and no arithmetic is done with the infinite value.
struct PathOscillation {
  double value = 0.0;
  std::size_t zero_terms = 0;

  bool is_minus_infinity() const { return zero_terms > 0; }
};

PathOscillation path_oscillation_average(std::span<const NodeId> path, std::span<const double> delta);

struct PathCountRow {
  std::size_t k = 0;
  std::size_t radius = 0;       // N_k
  std::size_t num_nodes = 0;    // N
  std::uint64_t count = 0;
  double bound = 0.0;           // exp(abar * N)
};

struct PathCountReport {
  bool passed = true;
  bool complete = true;         // false when the budget ran out
  double max_ratio = 0.0;       // max count / bound
  std::vector<PathCountRow> rows;
  std::optional<PathCountRow> witness;
};

/// Checks |Theta^N_{N_k}(x)| <= exp(abar N) for each radius N_k in `schedule`
/// and every N in [N_k, max_nodes].
PathCountReport verify_path_count_bound(const SimpleGraph& g, NodeId x, std::span<const std::size_t> schedule,
                                        double abar, std::size_t max_nodes, ExpansionBudget& budget);

/// RFC-4180 table "k,N_k,N,count,bound".
void write_path_count_csv(std::ostream& out, const PathCountReport& report);

}  // namespace hmrf
