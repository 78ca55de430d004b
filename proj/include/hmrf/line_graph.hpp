#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include <json.hpp>

#include "hmrf/graph.hpp"
#include "hmrf/hypergraph.hpp"

namespace hmrf {

/// Vertex volume <B_r(e_x)> of an edge ball together with its outer boundary
/// <S_{r+1}(e_x)> minus the volume.
struct BallVolume {
  std::vector<VertexId> volume;
  std::vector<VertexId> boundary;
};

/// Line graph L(H): nodes are the hyperedges of H (node id == edge id), two
/// nodes adjacent when the edges intersect. Keeps a reference to its source,
/// which must outlive it.
class LineGraph {
public:
  explicit LineGraph(const Hypergraph& source);

  const Hypergraph& source() const { return *source_; }
  const SimpleGraph& graph() const { return graph_; }

  std::size_t size() const { return graph_.size(); }
  std::span<const NodeId> neighbors(EdgeId e) const { return graph_.neighbors(e); }
  std::size_t degree(EdgeId e) const { return graph_.degree(e); }
  std::vector<std::size_t> degrees() const { return graph_.degrees(); }

  Distance dist(EdgeId a, EdgeId b) const { return graph_.distance(a, b); }
  std::vector<EdgeId> ball(EdgeId e, std::size_t r) const { return graph_.ball(e, r); }
  std::vector<EdgeId> sphere(EdgeId e, std::size_t r) const { return graph_.sphere(e, r); }

  /// Lambda_{x,r} = <B_r(e_x)> and its boundary. Requires x in e_x.
  BallVolume volume_of_ball(VertexId x, EdgeId e_x, std::size_t r) const;

  /// Adjacency list keyed by edge id.
  nlohmann::json to_json() const;
  /// RFC-4180 edge list "source,target" with source < target.
  void write_edge_csv(std::ostream& out) const;

private:
  const Hypergraph* source_;
  SimpleGraph graph_;
};

}  // namespace hmrf
