#pragma once

#include <vector>

#include "modnet/graph.hpp"
#include "modnet/matrix.hpp"
#include "modnet/modular.hpp"

namespace modnet {

// Surviving units of all layers are indexed jointly, layer by layer.
std::vector<std::size_t> layer_offsets(const LayerGraph& graph);

// Unit x unit matrix whose (i, j) entry counts units adjacent to both i and
// j, treating binarized connections as undirected. The diagonal is zero.
Matrix modified_adjacency(const LayerGraph& graph);

// Community-level fractions of modified-adjacency mass. Communities of all
// layers share one index space: layer d community c has index
// offset[d] + c with offset[d] = sum of community_count over earlier layers.
struct MixingMatrix {
  Matrix fractions;
  double total = 0.0;
};

// `include` optionally restricts the sum to a subset of units (one flag per
// jointly indexed unit); excluded units contribute nothing. Throws
// NumericDomainError when the included mass is zero.
MixingMatrix mixing_matrix(const Matrix& adjacency, const CommunityStructure& structure,
                           const std::vector<bool>& include = {});

// Same with an explicit community id in [0, communities) for every jointly
// indexed unit; a single id for all units treats the whole network as one
// community.
MixingMatrix mixing_matrix(const Matrix& adjacency, const std::vector<std::size_t>& community_of,
                           std::size_t communities, const std::vector<bool>& include = {});

// sum_i (A_ii - (sum_j A_ij)^2)
double modularity_q(const MixingMatrix& mixing);

// modified_adjacency + mixing_matrix + modularity_q. When `pruned` is given,
// only units belonging to its surviving communities are counted.
double network_modularity(const LayerGraph& graph, const CommunityStructure& structure,
                          const ModularRepresentation* pruned = nullptr);

}  // namespace modnet
