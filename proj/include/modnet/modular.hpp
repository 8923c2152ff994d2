#pragma once

#include <cstddef>
#include <compare>
#include <iosfwd>
#include <string>
#include <tuple>
#include <vector>

#include "modnet/community.hpp"
#include "modnet/graph.hpp"

namespace modnet {

// Hard community assignment of every surviving unit, per layer.
struct CommunityStructure {
  std::vector<std::vector<std::size_t>> assignment;
  std::vector<std::size_t> community_count;

  std::size_t depth() const noexcept { return assignment.size(); }
  // Member count of every community id in `layer` (zero for unused ids).
  std::vector<std::size_t> sizes(std::size_t layer) const;
  // Local (surviving-unit) indices of community `id` in `layer`.
  std::vector<std::size_t> members(std::size_t layer, std::size_t id) const;

  // Throws ShapeError unless the structure covers exactly the graph's units.
  void validate(const LayerGraph& graph) const;

  friend bool operator==(const CommunityStructure&, const CommunityStructure&) = default;
};

CommunityStructure structure_from_models(const std::vector<CommunityModel>& models);

// Puts every unit of every layer into community 0.
CommunityStructure single_community_structure(const LayerGraph& graph);

enum class BundleMethod : int {
  kAnyConnection = 1,       // at least one connection
  kDensity = 2,             // r >= zeta
  kDensityEitherMax = 3,    // method 2, and r maximal in its row OR column
  kDensityBothMax = 4,      // method 2, and r maximal in its row AND column
};

BundleMethod bundle_method_from_int(int id);

struct Community {
  std::size_t layer = 0;
  std::size_t id = 0;
  std::vector<std::size_t> members;  // local indices into the layer graph
  std::vector<std::size_t> units;    // original unit indices

  friend bool operator==(const Community&, const Community&) = default;
};

// Edge from community `from` of `layer` to community `to` of `layer + 1`.
struct BundledConnection {
  std::size_t layer = 0;
  std::size_t from = 0;
  std::size_t to = 0;
  double density = 0.0;

  friend bool operator==(const BundledConnection&, const BundledConnection&) = default;
  friend auto operator<=>(const BundledConnection& a, const BundledConnection& b) {
    return std::tie(a.layer, a.from, a.to) <=> std::tie(b.layer, b.from, b.to);
  }
};

struct ModularRepresentation {
  std::size_t depth = 0;
  std::vector<Community> communities;         // sorted by (layer, id)
  std::vector<BundledConnection> connections;  // sorted by (layer, from, to)
  BundleMethod method = BundleMethod::kDensity;
  double zeta = 0.3;
  bool pruned = false;

  const Community* find(std::size_t layer, std::size_t id) const;
  friend bool operator==(const ModularRepresentation&, const ModularRepresentation&) = default;
};

// Number of 0.99 entries between members of community a (layer) and
// community b (layer + 1).
std::size_t connection_count(const LayerGraph& graph, const CommunityStructure& structure,
                             std::size_t layer, std::size_t a, std::size_t b);

// l_ab / (l_a l_b). Throws NumericDomainError if either community is empty.
double connection_density(const LayerGraph& graph, const CommunityStructure& structure,
                          std::size_t layer, std::size_t a, std::size_t b);

// All pairwise densities between layer and layer + 1 (C_layer x C_{layer+1});
// pairs involving an empty community are 0.
Matrix density_matrix(const LayerGraph& graph, const CommunityStructure& structure,
                      std::size_t layer);

// Communities are the non-empty ones; zeta must lie in [0, 1].
ModularRepresentation bundle(const CommunityStructure& structure, const LayerGraph& graph,
                             BundleMethod method, double zeta);

// Removes, sweeping from the output layer to the input layer, output
// communities with no incoming bundled connection and all other communities
// with no outgoing one, together with their connections. Sweeps repeat until
// nothing is removed.
ModularRepresentation prune_unnecessary(ModularRepresentation repr);

// Graphviz DOT: one cluster per layer, communities as nodes, bundled
// connections labelled with r.
void write_dot(std::ostream& out, const ModularRepresentation& repr,
               const std::vector<std::vector<std::string>>& unit_names = {});

// Plain-text listing of member units per community.
void write_membership_report(std::ostream& out, const ModularRepresentation& repr,
                             const std::vector<std::vector<std::string>>& unit_names = {});

}  // namespace modnet
