#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "modnet/matrix.hpp"
#include "modnet/network.hpp"

namespace modnet {

inline constexpr double kConnected = 0.99;
inline constexpr double kDisconnected = 0.01;

inline bool is_connected(double soft_entry) { return soft_entry > 0.5; }

// Binarized layered graph after isolated-unit removal.
//
// connections[d] relates surviving units of layer d (rows) to surviving units
// of layer d+1 (columns); entries are kConnected or kDisconnected. For layer
// d the incoming matrix A is connections[d-1] and the outgoing matrix B is
// connections[d]; the input layer has no A and the output layer has no B.
// unit_map[d][k] is the original index of surviving unit k of layer d.
struct LayerGraph {
  std::vector<Matrix> connections;
  std::vector<std::vector<std::size_t>> unit_map;
  double xi = 0.0;

  std::size_t depth() const noexcept { return unit_map.size(); }
  std::size_t width(std::size_t layer) const { return unit_map.at(layer).size(); }
  std::size_t total_units() const;

  const Matrix* incoming(std::size_t layer) const {
    return layer == 0 ? nullptr : &connections[layer - 1];
  }
  const Matrix* outgoing(std::size_t layer) const {
    return layer + 1 >= depth() ? nullptr : &connections[layer];
  }

  // Shape and entry-value checks; throws ShapeError.
  void validate() const;

  friend bool operator==(const LayerGraph&, const LayerGraph&) = default;
};

// Entry 0.99 iff |w| >= xi, else 0.01; then units with no 0.99 entry in any
// adjacent matrix are removed, repeated until nothing changes. Throws
// EmptyLayerError if a layer loses every unit.
LayerGraph extract_adjacency(const NetworkParams& net, double xi);

// Applies the same isolated-unit removal to an existing graph. Used to check
// that extraction is idempotent.
LayerGraph remove_isolated_units(LayerGraph graph);

// One line per 0.99 entry: "layer source target" using original indices
// (layer is the 0-based index of the source layer).
void write_edge_list(std::ostream& out, const LayerGraph& graph);

}  // namespace modnet
