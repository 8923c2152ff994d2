#include "modnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "modnet/errors.hpp"

namespace modnet {

std::size_t LayerGraph::total_units() const {
  std::size_t n = 0;
  for (const auto& m : unit_map) n += m.size();
  return n;
}

void LayerGraph::validate() const {
  if (depth() < 2) throw ShapeError("layer graph needs at least two layers");
  if (connections.size() + 1 != depth()) throw ShapeError("layer graph connection count mismatch");
  for (std::size_t d = 0; d + 1 < depth(); ++d) {
    const Matrix& c = connections[d];
    if (c.rows() != width(d) || c.cols() != width(d + 1))
      throw ShapeError("connection matrix " + std::to_string(d) + " has the wrong shape");
    for (double v : c.data())
      if (v != kConnected && v != kDisconnected)
        throw ShapeError("connection entries must be 0.99 or 0.01");
  }
  for (const auto& m : unit_map)
    if (!std::is_sorted(m.begin(), m.end()) ||
        std::adjacent_find(m.begin(), m.end()) != m.end())
      throw ShapeError("unit map must be strictly increasing");
}

LayerGraph remove_isolated_units(LayerGraph graph) {
  const std::size_t depth = graph.depth();
  for (;;) {
    std::vector<std::vector<bool>> keep(depth);
    bool removed = false;
    for (std::size_t d = 0; d < depth; ++d) {
      keep[d].assign(graph.width(d), false);
      if (const Matrix* a = graph.incoming(d))
        for (std::size_t i = 0; i < a->rows(); ++i)
          for (std::size_t k = 0; k < a->cols(); ++k)
            if (is_connected((*a)(i, k))) keep[d][k] = true;
      if (const Matrix* b = graph.outgoing(d))
        for (std::size_t k = 0; k < b->rows(); ++k)
          for (std::size_t j = 0; j < b->cols(); ++j)
            if (is_connected((*b)(k, j))) keep[d][k] = true;
      if (std::find(keep[d].begin(), keep[d].end(), false) != keep[d].end()) removed = true;
    }
    if (!removed) break;

    std::vector<std::vector<std::size_t>> survivors(depth);
    for (std::size_t d = 0; d < depth; ++d) {
      for (std::size_t k = 0; k < keep[d].size(); ++k)
        if (keep[d][k]) survivors[d].push_back(k);
      if (survivors[d].empty())
        throw EmptyLayerError("layer " + std::to_string(d) +
                              " has no connected units at xi = " + std::to_string(graph.xi));
    }
    for (std::size_t d = 0; d + 1 < depth; ++d) {
      Matrix next(survivors[d].size(), survivors[d + 1].size());
      for (std::size_t r = 0; r < next.rows(); ++r)
        for (std::size_t c = 0; c < next.cols(); ++c)
          next(r, c) = graph.connections[d](survivors[d][r], survivors[d + 1][c]);
      graph.connections[d] = std::move(next);
    }
    for (std::size_t d = 0; d < depth; ++d) {
      std::vector<std::size_t> map;
      for (std::size_t k : survivors[d]) map.push_back(graph.unit_map[d][k]);
      graph.unit_map[d] = std::move(map);
    }
  }
  return graph;
}

LayerGraph extract_adjacency(const NetworkParams& net, double xi) {
  if (!(xi >= 0.0)) throw ArgumentError("xi must be >= 0");
  net.validate();
  LayerGraph graph;
  graph.xi = xi;
  for (std::size_t d = 0; d < net.depth(); ++d) {
    std::vector<std::size_t> map(net.layer_sizes[d]);
    for (std::size_t k = 0; k < map.size(); ++k) map[k] = k;
    graph.unit_map.push_back(std::move(map));
  }
  for (const Matrix& w : net.weights) {
    Matrix c(w.rows(), w.cols());
    for (std::size_t e = 0; e < w.size(); ++e)
      c.data()[e] = std::abs(w.data()[e]) >= xi ? kConnected : kDisconnected;
    graph.connections.push_back(std::move(c));
  }
  return remove_isolated_units(std::move(graph));
}

void write_edge_list(std::ostream& out, const LayerGraph& graph) {
  out << "# layer source target\n";
  for (std::size_t d = 0; d + 1 < graph.depth(); ++d) {
    const Matrix& c = graph.connections[d];
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (std::size_t j = 0; j < c.cols(); ++j)
        if (is_connected(c(i, j)))
          out << d << ' ' << graph.unit_map[d][i] << ' ' << graph.unit_map[d + 1][j] << '\n';
  }
}

}  // namespace modnet
