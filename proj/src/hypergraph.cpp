#include "hmrf/hypergraph.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace hmrf {

bool Hyperedge::contains(VertexId x) const {
  return std::binary_search(vertices.begin(), vertices.end(), x);
}

Hypergraph Hypergraph::from_edges(std::vector<std::vector<VertexId>> edges,
                                  std::vector<VertexId> extra_vertices) {
  Hypergraph h;
  std::set<std::vector<VertexId>> seen;
  std::set<VertexId> all(extra_vertices.begin(), extra_vertices.end());

  h.edges_.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto vs = std::move(edges[i]);
    std::sort(vs.begin(), vs.end());
    if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
      throw std::invalid_argument("edge " + std::to_string(i) + " repeats a vertex");
    if (vs.size() < 2)
      throw std::invalid_argument("edge " + std::to_string(i) + " has fewer than two vertices");
    if (!seen.insert(vs).second)
      throw std::invalid_argument("edge " + std::to_string(i) + " duplicates an earlier edge");
    all.insert(vs.begin(), vs.end());
    h.edges_.push_back(Hyperedge{static_cast<EdgeId>(i), std::move(vs)});
  }

  h.vertices_.assign(all.begin(), all.end());
  h.index_.reserve(h.vertices_.size());
  for (std::size_t p = 0; p < h.vertices_.size(); ++p) h.index_.emplace(h.vertices_[p], p);

  h.incidence_.assign(h.vertices_.size(), {});
  for (const auto& e : h.edges_)
    for (VertexId x : e.vertices) h.incidence_[h.index_.at(x)].push_back(e.id);
  return h;
}

const Hyperedge& Hypergraph::edge(EdgeId e) const {
  if (e >= edges_.size()) throw std::out_of_range("unknown edge id " + std::to_string(e));
  return edges_[e];
}

std::size_t Hypergraph::position(VertexId x) const {
  auto it = index_.find(x);
  if (it == index_.end()) throw std::out_of_range("unknown vertex id " + std::to_string(x));
  return it->second;
}

std::span<const EdgeId> Hypergraph::edge_neighborhood(VertexId x) const {
  return incidence_[position(x)];
}

std::vector<VertexId> Hypergraph::boundary(std::span<const VertexId> region) const {
  if (region.empty()) throw std::invalid_argument("boundary of an empty set");
  std::vector<char> inside(vertices_.size(), 0);
  for (VertexId x : region) inside[position(x)] = 1;

  std::vector<char> out_mark(vertices_.size(), 0);
  std::vector<char> edge_seen(edges_.size(), 0);
  for (VertexId x : region) {
    for (EdgeId e : incidence_[position(x)]) {
      if (edge_seen[e]) continue;
      edge_seen[e] = 1;
      for (VertexId y : edges_[e].vertices) {
        auto p = index_.at(y);
        if (!inside[p]) out_mark[p] = 1;
      }
    }
  }
  std::vector<VertexId> out;
  for (std::size_t p = 0; p < vertices_.size(); ++p)
    if (out_mark[p]) out.push_back(vertices_[p]);
  return out;
}

std::vector<VertexId> Hypergraph::span(std::span<const EdgeId> edge_ids) const {
  std::vector<VertexId> out;
  for (EdgeId e : edge_ids) {
    const auto& vs = edge(e).vertices;
    out.insert(out.end(), vs.begin(), vs.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<EdgeId> Hypergraph::edges_meeting(std::span<const VertexId> region) const {
  std::vector<EdgeId> out;
  for (VertexId x : region) {
    auto ex = edge_neighborhood(x);
    out.insert(out.end(), ex.begin(), ex.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SeparabilityReport Hypergraph::check_separability(bool strict) const {
  SeparabilityReport report;
  report.strict = strict;

  std::vector<std::size_t> n_h(vertices_.size());
  for (std::size_t p = 0; p < vertices_.size(); ++p) n_h[p] = incidence_[p].size();

  for (std::size_t p = 0; p < vertices_.size(); ++p) {
    const auto& ex = incidence_[p];
    if (ex.empty()) continue;
    if (ex.size() == 1 && !strict) {
      report.exempt_leaves.push_back(vertices_[p]);
      continue;
    }
    std::vector<VertexId> common = edges_[ex.front()].vertices;
    for (std::size_t i = 1; i < ex.size() && common.size() > 1; ++i) {
      std::vector<VertexId> next;
      const auto& vs = edges_[ex[i]].vertices;
      std::set_intersection(common.begin(), common.end(), vs.begin(), vs.end(),
                            std::back_inserter(next));
      common = std::move(next);
    }
    for (VertexId y : common)
      if (y != vertices_[p]) report.offending_pairs.push_back({vertices_[p], y});
  }
  report.passed = report.offending_pairs.empty();
  if (!report.passed) return report;

  // Degree bracket on the line graph. The lower bound needs at most one leaf per
  // edge, which fails on the rim of a finite truncation; those edges are skipped.
  for (const auto& e : edges_) {
    std::size_t leaves = 0;
    std::size_t upper = 0;
    std::vector<EdgeId> nbrs;
    for (VertexId x : e.vertices) {
      auto p = index_.at(x);
      if (n_h[p] == 1) ++leaves;
      upper += n_h[p] - 1;
      for (EdgeId f : incidence_[p])
        if (f != e.id) nbrs.push_back(f);
    }
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    const std::size_t n_l = nbrs.size();
    if (leaves > 1) {
      ++report.bracket_skipped;
      if (n_l > upper) report.bracket_violations.push_back(e.id);
      continue;
    }
    ++report.bracket_checked;
    if (e.size() - 1 > n_l || n_l > upper) report.bracket_violations.push_back(e.id);
  }
  report.passed = report.bracket_violations.empty();
  return report;
}

bool Hypergraph::edges_equal(const Hypergraph& other) const {
  if (vertices_ != other.vertices_ || edges_.size() != other.edges_.size()) return false;
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].vertices != other.edges_[i].vertices) return false;
  return true;
}

void to_json(nlohmann::json& j, const Hypergraph& h) {
  j = nlohmann::json::object();
  j["vertices"] = h.vertices();
  auto edges = nlohmann::json::array();
  for (const auto& e : h.edges()) edges.push_back(e.vertices);
  j["edges"] = std::move(edges);
}

void from_json(const nlohmann::json& j, Hypergraph& h) {
  auto edges = j.at("edges").get<std::vector<std::vector<VertexId>>>();
  std::vector<VertexId> vertices;
  if (j.contains("vertices")) vertices = j.at("vertices").get<std::vector<VertexId>>();
  h = Hypergraph::from_edges(std::move(edges), std::move(vertices));
}

}  // namespace hmrf
