#include "hmrf/line_graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hmrf {

LineGraph::LineGraph(const Hypergraph& source) : source_(&source), graph_(source.num_edges()) {
  for (VertexId x : source.vertices()) {
    auto ex = source.edge_neighborhood(x);
    for (std::size_t i = 0; i < ex.size(); ++i)
      for (std::size_t j = i + 1; j < ex.size(); ++j) graph_.add_edge(ex[i], ex[j]);
  }
}

BallVolume LineGraph::volume_of_ball(VertexId x, EdgeId e_x, std::size_t r) const {
  if (!source_->edge(e_x).contains(x))
    throw std::invalid_argument("vertex " + std::to_string(x) + " is not in edge " + std::to_string(e_x));
  BallVolume out;
  out.volume = source_->span(ball(e_x, r));
  auto rim = source_->span(sphere(e_x, r + 1));
  std::set_difference(rim.begin(), rim.end(), out.volume.begin(), out.volume.end(),
                      std::back_inserter(out.boundary));
  return out;
}

nlohmann::json LineGraph::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (EdgeId e = 0; e < size(); ++e) {
    auto nb = neighbors(e);
    nodes.push_back({{"id", e}, {"neighbors", std::vector<EdgeId>(nb.begin(), nb.end())}});
  }
  return {{"nodes", std::move(nodes)}};
}

void LineGraph::write_edge_csv(std::ostream& out) const {
  out << "source,target\r\n";
  for (EdgeId e = 0; e < size(); ++e)
    for (EdgeId f : neighbors(e))
      if (e < f) out << e << ',' << f << "\r\n";
}

}  // namespace hmrf
