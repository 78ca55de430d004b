#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace hmrf {

using NodeId = std::uint32_t;

/// Path length in a graph, extended by +infinity for disconnected pairs.
class Distance {
public:
  constexpr Distance() = default;
  constexpr explicit Distance(std::size_t hops) : hops_(hops), finite_(true) {}

  static constexpr Distance infinity() { return Distance{}; }

  constexpr bool is_finite() const { return finite_; }
  constexpr std::size_t hops() const { return hops_; }

  constexpr bool operator==(const Distance&) const = default;
  constexpr std::strong_ordering operator<=>(const Distance& other) const {
    if (finite_ != other.finite_) return finite_ ? std::strong_ordering::less : std::strong_ordering::greater;
    if (!finite_) return std::strong_ordering::equal;
    return hops_ <=> other.hops_;
  }

  /// Compare against a real threshold; infinity dominates every real.
  constexpr bool at_least(double threshold) const {
    return !finite_ || static_cast<double>(hops_) >= threshold;
  }

private:
  std::size_t hops_ = 0;
  bool finite_ = false;
};

/// Undirected simple graph on dense node ids 0..n-1 with sorted adjacency lists.
///
/// Breadth-first distance vectors are memoised per source in a small LRU cache
/// guarded by a mutex, so concurrent read-only queries are safe.
class SimpleGraph {
public:
  static constexpr std::int32_t kUnreachable = -1;

  SimpleGraph();
  explicit SimpleGraph(std::size_t num_nodes);
  SimpleGraph(std::size_t num_nodes, std::span<const std::pair<NodeId, NodeId>> edges);

  SimpleGraph(const SimpleGraph& other);
  SimpleGraph& operator=(const SimpleGraph& other);
  SimpleGraph(SimpleGraph&&) noexcept;
  SimpleGraph& operator=(SimpleGraph&&) noexcept;
  ~SimpleGraph();

  /// Adds {u, v}; duplicate edges are ignored, loops rejected.
  void add_edge(NodeId u, NodeId v);

  std::size_t size() const { return adjacency_.size(); }
  std::size_t num_edges() const;
  std::span<const NodeId> neighbors(NodeId v) const;
  std::size_t degree(NodeId v) const { return neighbors(v).size(); }
  bool adjacent(NodeId u, NodeId v) const;
  std::vector<std::size_t> degrees() const;

  /// Hop counts from `source` to every node, kUnreachable when disconnected.
  std::shared_ptr<const std::vector<std::int32_t>> distances_from(NodeId source) const;
  Distance distance(NodeId u, NodeId v) const;

  std::vector<NodeId> ball(NodeId center, std::size_t radius) const;
  std::vector<NodeId> sphere(NodeId center, std::size_t radius) const;

  /// True when the graph has no cycles (every component is a tree).
  bool is_forest() const;

private:
  void check_node(NodeId v) const;

  std::vector<std::vector<NodeId>> adjacency_;

  struct BfsCache;
  std::unique_ptr<BfsCache> cache_;
};

}  // namespace hmrf
