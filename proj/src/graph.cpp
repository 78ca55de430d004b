#include "hmrf/graph.hpp"

#include <algorithm>
#include <deque>
#include <list>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace hmrf {

struct SimpleGraph::BfsCache {
  static constexpr std::size_t kCapacity = 64;
  using Entry = std::pair<NodeId, std::shared_ptr<const std::vector<std::int32_t>>>;

  std::mutex mutex;
  std::list<Entry> order;  // most recent first
  std::unordered_map<NodeId, std::list<Entry>::iterator> index;

  void clear() {
    std::lock_guard lock(mutex);
    order.clear();
    index.clear();
  }
};

SimpleGraph::SimpleGraph() : SimpleGraph(0) {}

SimpleGraph::SimpleGraph(std::size_t num_nodes)
    : adjacency_(num_nodes), cache_(std::make_unique<BfsCache>()) {}

SimpleGraph::SimpleGraph(std::size_t num_nodes, std::span<const std::pair<NodeId, NodeId>> edges)
    : SimpleGraph(num_nodes) {
  for (auto [u, v] : edges) add_edge(u, v);
}

SimpleGraph::SimpleGraph(const SimpleGraph& other)
    : adjacency_(other.adjacency_), cache_(std::make_unique<BfsCache>()) {}

SimpleGraph& SimpleGraph::operator=(const SimpleGraph& other) {
  if (this != &other) {
    adjacency_ = other.adjacency_;
    cache_ = std::make_unique<BfsCache>();
  }
  return *this;
}

SimpleGraph::SimpleGraph(SimpleGraph&&) noexcept = default;
SimpleGraph& SimpleGraph::operator=(SimpleGraph&&) noexcept = default;
SimpleGraph::~SimpleGraph() = default;

void SimpleGraph::check_node(NodeId v) const {
  if (v >= adjacency_.size())
    throw std::out_of_range("graph node " + std::to_string(v) + " out of range");
}

void SimpleGraph::add_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  if (u == v) throw std::invalid_argument("simple graph cannot have loops");
  auto insert_sorted = [](std::vector<NodeId>& list, NodeId w) {
    auto it = std::lower_bound(list.begin(), list.end(), w);
    if (it != list.end() && *it == w) return;
    list.insert(it, w);
  };
  insert_sorted(adjacency_[u], v);
  insert_sorted(adjacency_[v], u);
  if (cache_) cache_->clear();
  else cache_ = std::make_unique<BfsCache>();
}

std::size_t SimpleGraph::num_edges() const {
  std::size_t twice = 0;
  for (const auto& list : adjacency_) twice += list.size();
  return twice / 2;
}

std::span<const NodeId> SimpleGraph::neighbors(NodeId v) const {
  check_node(v);
  return adjacency_[v];
}

bool SimpleGraph::adjacent(NodeId u, NodeId v) const {
  auto list = neighbors(u);
  return std::binary_search(list.begin(), list.end(), v);
}

std::vector<std::size_t> SimpleGraph::degrees() const {
  std::vector<std::size_t> out(adjacency_.size());
  for (std::size_t v = 0; v < adjacency_.size(); ++v) out[v] = adjacency_[v].size();
  return out;
}

std::shared_ptr<const std::vector<std::int32_t>> SimpleGraph::distances_from(NodeId source) const {
  check_node(source);
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->index.find(source); it != cache_->index.end()) {
      cache_->order.splice(cache_->order.begin(), cache_->order, it->second);
      return it->second->second;
    }
  }

  auto dist = std::make_shared<std::vector<std::int32_t>>(adjacency_.size(), kUnreachable);
  std::deque<NodeId> queue{source};
  (*dist)[source] = 0;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId w : adjacency_[v]) {
      if ((*dist)[w] != kUnreachable) continue;
      (*dist)[w] = (*dist)[v] + 1;
      queue.push_back(w);
    }
  }

  std::lock_guard lock(cache_->mutex);
  if (auto it = cache_->index.find(source); it != cache_->index.end()) return it->second->second;
  cache_->order.emplace_front(source, dist);
  cache_->index[source] = cache_->order.begin();
  if (cache_->order.size() > BfsCache::kCapacity) {
    cache_->index.erase(cache_->order.back().first);
    cache_->order.pop_back();
  }
  return dist;
}

Distance SimpleGraph::distance(NodeId u, NodeId v) const {
  check_node(v);
  auto dist = distances_from(u);
  auto d = (*dist)[v];
  return d == kUnreachable ? Distance::infinity() : Distance(static_cast<std::size_t>(d));
}

std::vector<NodeId> SimpleGraph::ball(NodeId center, std::size_t radius) const {
  auto dist = distances_from(center);
  std::vector<NodeId> out;
  for (NodeId v = 0; v < dist->size(); ++v) {
    auto d = (*dist)[v];
    if (d != kUnreachable && static_cast<std::size_t>(d) <= radius) out.push_back(v);
  }
  return out;
}

std::vector<NodeId> SimpleGraph::sphere(NodeId center, std::size_t radius) const {
  auto dist = distances_from(center);
  std::vector<NodeId> out;
  for (NodeId v = 0; v < dist->size(); ++v) {
    auto d = (*dist)[v];
    if (d != kUnreachable && static_cast<std::size_t>(d) == radius) out.push_back(v);
  }
  return out;
}

bool SimpleGraph::is_forest() const {
  std::vector<char> seen(adjacency_.size(), 0);
  std::size_t components = 0;
  for (NodeId s = 0; s < adjacency_.size(); ++s) {
    if (seen[s]) continue;
    ++components;
    std::vector<NodeId> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (NodeId w : adjacency_[v])
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
  }
  return num_edges() + components == adjacency_.size();
}

}  // namespace hmrf
