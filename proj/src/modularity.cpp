#include "modnet/modularity.hpp"

#include "modnet/errors.hpp"

namespace modnet {

std::vector<std::size_t> layer_offsets(const LayerGraph& graph) {
  std::vector<std::size_t> offsets(graph.depth() + 1, 0);
  for (std::size_t d = 0; d < graph.depth(); ++d) offsets[d + 1] = offsets[d] + graph.width(d);
  return offsets;
}

Matrix modified_adjacency(const LayerGraph& graph) {
  graph.validate();
  const auto offsets = layer_offsets(graph);
  const std::size_t total = offsets.back();

  // Neighbour lists over the joint index.
  std::vector<std::vector<std::size_t>> neighbours(total);
  for (std::size_t d = 0; d + 1 < graph.depth(); ++d) {
    const Matrix& c = graph.connections[d];
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (std::size_t j = 0; j < c.cols(); ++j)
        if (is_connected(c(i, j))) {
          neighbours[offsets[d] + i].push_back(offsets[d + 1] + j);
          neighbours[offsets[d + 1] + j].push_back(offsets[d] + i);
        }
  }
  Matrix m(total, total);
  for (const auto& around : neighbours)
    for (std::size_t a = 0; a < around.size(); ++a)
      for (std::size_t b = a + 1; b < around.size(); ++b) {
        m(around[a], around[b]) += 1.0;
        m(around[b], around[a]) += 1.0;
      }
  return m;
}

MixingMatrix mixing_matrix(const Matrix& adjacency, const CommunityStructure& structure,
                           const std::vector<bool>& include) {
  std::vector<std::size_t> community_of;
  std::size_t base = 0;
  for (std::size_t d = 0; d < structure.depth(); ++d) {
    for (std::size_t g : structure.assignment[d]) community_of.push_back(base + g);
    base += structure.community_count[d];
  }
  return mixing_matrix(adjacency, community_of, base, include);
}

MixingMatrix mixing_matrix(const Matrix& adjacency, const std::vector<std::size_t>& community_of,
                           std::size_t communities, const std::vector<bool>& include) {
  if (community_of.size() != adjacency.rows() || adjacency.rows() != adjacency.cols())
    throw ShapeError("assignments do not cover the modified adjacency matrix");
  if (!include.empty() && include.size() != community_of.size())
    throw ShapeError("unit filter does not match the modified adjacency matrix");
  for (std::size_t c : community_of)
    if (c >= communities) throw ShapeError("community id out of range");

  MixingMatrix mix;
  mix.fractions = Matrix(communities, communities);
  for (std::size_t i = 0; i < adjacency.rows(); ++i) {
    if (!include.empty() && !include[i]) continue;
    for (std::size_t j = 0; j < adjacency.cols(); ++j) {
      if (!include.empty() && !include[j]) continue;
      mix.fractions(community_of[i], community_of[j]) += adjacency(i, j);
    }
  }
  mix.total = mix.fractions.sum();
  if (!(mix.total > 0.0))
    throw NumericDomainError("modified adjacency has no mass; modularity is undefined");
  for (double& v : mix.fractions.data()) v /= mix.total;
  return mix;
}

double modularity_q(const MixingMatrix& mixing) {
  const Matrix& a = mixing.fractions;
  double q = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) row += a(i, j);
    q += a(i, i) - row * row;
  }
  return q;
}

double network_modularity(const LayerGraph& graph, const CommunityStructure& structure,
                          const ModularRepresentation* pruned) {
  structure.validate(graph);
  const Matrix adjacency = modified_adjacency(graph);
  std::vector<bool> include;
  if (pruned) {
    const auto offsets = layer_offsets(graph);
    include.assign(offsets.back(), false);
    for (const auto& c : pruned->communities)
      for (std::size_t k : c.members) include[offsets[c.layer] + k] = true;
  }
  return modularity_q(mixing_matrix(adjacency, structure, include));
}

}  // namespace modnet
