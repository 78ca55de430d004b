#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

namespace hmrf {

using VertexId = std::int64_t;
using EdgeId = std::uint32_t;

struct Hyperedge {
  EdgeId id = 0;
  std::vector<VertexId> vertices;  // sorted, distinct, at least two

  std::size_t size() const { return vertices.size(); }
  bool contains(VertexId x) const;
};

struct VertexPair {
  VertexId first;
  VertexId second;
  bool operator==(const VertexPair&) const = default;
};

/// Outcome of the separability test (the edges through x meet only in x),
/// together with the degree bracket |e|-1 <= n_L(e) <= sum_{x in e}(n_H(x)-1)
/// that separability implies.
struct SeparabilityReport {
  bool passed = true;
  bool strict = false;
  std::vector<VertexPair> offending_pairs;  // (x, y): y lies in every edge through x
  std::vector<VertexId> exempt_leaves;      // n_H(x) == 1, skipped in lenient mode

  std::size_t bracket_checked = 0;
  std::size_t bracket_skipped = 0;          // edges holding two or more leaves (truncation rim)
  std::vector<EdgeId> bracket_violations;
};

/// Finite dependence hypergraph. Immutable after construction.
///
/// Edge ids are dense (0..m-1) in the order the edges were supplied; vertex
/// sets are stored sorted so equality and serialisation are canonical.
class Hypergraph {
public:
  Hypergraph() = default;

  /// Validates and builds. `extra_vertices` may add vertices not covered by any
  /// edge (allowed for finite truncations, isolated in H).
  static Hypergraph from_edges(std::vector<std::vector<VertexId>> edges,
                               std::vector<VertexId> extra_vertices = {});

  const std::vector<VertexId>& vertices() const { return vertices_; }
  const std::vector<Hyperedge>& edges() const { return edges_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const Hyperedge& edge(EdgeId e) const;
  bool contains(VertexId x) const { return index_.contains(x); }
  /// Dense position of x in vertices(); throws std::out_of_range when unknown.
  std::size_t position(VertexId x) const;

  /// E_x, sorted ascending.
  std::span<const EdgeId> edge_neighborhood(VertexId x) const;
  std::size_t edge_degree(VertexId x) const { return edge_neighborhood(x).size(); }

  /// Vertices outside D sharing an edge with some vertex of D.
  std::vector<VertexId> boundary(std::span<const VertexId> region) const;

  /// Union of the vertex sets of the given edges.
  std::vector<VertexId> span(std::span<const EdgeId> edge_ids) const;

  /// Edges meeting the region (E_Lambda), sorted.
  std::vector<EdgeId> edges_meeting(std::span<const VertexId> region) const;

  SeparabilityReport check_separability(bool strict = false) const;

  bool operator==(const Hypergraph& other) const { return edges_equal(other); }

private:
  bool edges_equal(const Hypergraph& other) const;

  std::vector<VertexId> vertices_;
  std::vector<Hyperedge> edges_;
  std::unordered_map<VertexId, std::size_t> index_;
  std::vector<std::vector<EdgeId>> incidence_;
};

void to_json(nlohmann::json& j, const Hypergraph& h);
void from_json(const nlohmann::json& j, Hypergraph& h);

}  // namespace hmrf
