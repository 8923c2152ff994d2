#include "modnet/modular.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <set>
#include <string>
#include <utility>

#include "modnet/errors.hpp"

namespace modnet {

std::vector<std::size_t> CommunityStructure::sizes(std::size_t layer) const {
  std::vector<std::size_t> out(community_count.at(layer), 0);
  for (std::size_t g : assignment.at(layer)) ++out.at(g);
  return out;
}

std::vector<std::size_t> CommunityStructure::members(std::size_t layer, std::size_t id) const {
  std::vector<std::size_t> out;
  const auto& g = assignment.at(layer);
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g[k] == id) out.push_back(k);
  return out;
}

void CommunityStructure::validate(const LayerGraph& graph) const {
  if (assignment.size() != graph.depth() || community_count.size() != graph.depth())
    throw ShapeError("community structure depth does not match the graph");
  for (std::size_t d = 0; d < depth(); ++d) {
    if (assignment[d].size() != graph.width(d))
      throw ShapeError("layer " + std::to_string(d) + " assignment does not cover the layer");
    for (std::size_t g : assignment[d])
      if (g >= community_count[d])
        throw ShapeError("community id out of range in layer " + std::to_string(d));
  }
}

CommunityStructure structure_from_models(const std::vector<CommunityModel>& models) {
  CommunityStructure s;
  for (const auto& m : models) {
    s.assignment.push_back(assign(m));
    s.community_count.push_back(m.communities());
  }
  return s;
}

CommunityStructure single_community_structure(const LayerGraph& graph) {
  CommunityStructure s;
  for (std::size_t d = 0; d < graph.depth(); ++d) {
    s.assignment.emplace_back(graph.width(d), 0);
    s.community_count.push_back(1);
  }
  return s;
}

BundleMethod bundle_method_from_int(int id) {
  if (id < 1 || id > 4) throw ArgumentError("bundling method must be 1, 2, 3 or 4");
  return static_cast<BundleMethod>(id);
}

const Community* ModularRepresentation::find(std::size_t layer, std::size_t id) const {
  for (const auto& c : communities)
    if (c.layer == layer && c.id == id) return &c;
  return nullptr;
}

namespace {

void check_pair(const LayerGraph& graph, const CommunityStructure& structure,
                std::size_t layer) {
  structure.validate(graph);
  if (layer + 1 >= graph.depth()) throw ArgumentError("layer has no child layer");
}

Matrix count_matrix(const LayerGraph& graph, const CommunityStructure& structure,
                    std::size_t layer) {
  const auto& ga = structure.assignment[layer];
  const auto& gb = structure.assignment[layer + 1];
  Matrix counts(structure.community_count[layer], structure.community_count[layer + 1]);
  const Matrix& c = graph.connections[layer];
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j)
      if (is_connected(c(i, j))) counts(ga[i], gb[j]) += 1.0;
  return counts;
}

}  // namespace

std::size_t connection_count(const LayerGraph& graph, const CommunityStructure& structure,
                             std::size_t layer, std::size_t a, std::size_t b) {
  check_pair(graph, structure, layer);
  return static_cast<std::size_t>(count_matrix(graph, structure, layer)(a, b));
}

double connection_density(const LayerGraph& graph, const CommunityStructure& structure,
                          std::size_t layer, std::size_t a, std::size_t b) {
  check_pair(graph, structure, layer);
  const auto la = structure.sizes(layer).at(a);
  const auto lb = structure.sizes(layer + 1).at(b);
  if (la == 0 || lb == 0) throw NumericDomainError("density of an empty community is undefined");
  return count_matrix(graph, structure, layer)(a, b) / static_cast<double>(la * lb);
}

Matrix density_matrix(const LayerGraph& graph, const CommunityStructure& structure,
                      std::size_t layer) {
  check_pair(graph, structure, layer);
  Matrix r = count_matrix(graph, structure, layer);
  const auto sa = structure.sizes(layer);
  const auto sb = structure.sizes(layer + 1);
  for (std::size_t a = 0; a < r.rows(); ++a)
    for (std::size_t b = 0; b < r.cols(); ++b)
      r(a, b) = (sa[a] == 0 || sb[b] == 0) ? 0.0 : r(a, b) / static_cast<double>(sa[a] * sb[b]);
  return r;
}

ModularRepresentation bundle(const CommunityStructure& structure, const LayerGraph& graph,
                             BundleMethod method, double zeta) {
  structure.validate(graph);
  const int id = static_cast<int>(method);
  bundle_method_from_int(id);
  if (!(zeta >= 0.0 && zeta <= 1.0)) throw ArgumentError("zeta must lie in [0, 1]");

  ModularRepresentation repr;
  repr.depth = graph.depth();
  repr.method = method;
  repr.zeta = zeta;
  for (std::size_t d = 0; d < graph.depth(); ++d) {
    const auto sizes = structure.sizes(d);
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      if (sizes[c] == 0) continue;
      Community com{d, c, structure.members(d, c), {}};
      for (std::size_t k : com.members) com.units.push_back(graph.unit_map[d][k]);
      repr.communities.push_back(std::move(com));
    }
  }

  for (std::size_t d = 0; d + 1 < graph.depth(); ++d) {
    const Matrix counts = count_matrix(graph, structure, d);
    const Matrix r = density_matrix(graph, structure, d);
    const auto sa = structure.sizes(d);
    const auto sb = structure.sizes(d + 1);
    auto column_max = [&](std::size_t a, std::size_t b) {
      for (std::size_t a2 = 0; a2 < r.rows(); ++a2)
        if (sa[a2] > 0 && r(a2, b) > r(a, b)) return false;
      return true;
    };
    auto row_max = [&](std::size_t a, std::size_t b) {
      for (std::size_t b2 = 0; b2 < r.cols(); ++b2)
        if (sb[b2] > 0 && r(a, b2) > r(a, b)) return false;
      return true;
    };
    for (std::size_t a = 0; a < r.rows(); ++a) {
      if (sa[a] == 0) continue;
      for (std::size_t b = 0; b < r.cols(); ++b) {
        if (sb[b] == 0) continue;
        bool keep = false;
        switch (method) {
          case BundleMethod::kAnyConnection:
            keep = counts(a, b) >= 1.0;
            break;
          case BundleMethod::kDensity:
            keep = r(a, b) >= zeta;
            break;
          case BundleMethod::kDensityEitherMax:
            keep = r(a, b) >= zeta && (column_max(a, b) || row_max(a, b));
            break;
          case BundleMethod::kDensityBothMax:
            keep = r(a, b) >= zeta && column_max(a, b) && row_max(a, b);
            break;
        }
        if (keep) repr.connections.push_back({d, a, b, r(a, b)});
      }
    }
  }
  return repr;
}

ModularRepresentation prune_unnecessary(ModularRepresentation repr) {
  if (repr.depth == 0) {
    repr.pruned = true;
    return repr;
  }
  const std::size_t last = repr.depth - 1;
  using Key = std::pair<std::size_t, std::size_t>;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t step = 0; step <= last; ++step) {
      const std::size_t d = last - step;
      std::set<Key> dead;
      for (const auto& c : repr.communities) {
        if (c.layer != d) continue;
        const bool has = std::any_of(
            repr.connections.begin(), repr.connections.end(), [&](const BundledConnection& e) {
              return d == last ? (e.layer + 1 == d && e.to == c.id)
                               : (e.layer == d && e.from == c.id);
            });
        if (!has) dead.insert({d, c.id});
      }
      if (dead.empty()) continue;
      changed = true;
      std::erase_if(repr.communities,
                    [&](const Community& c) { return dead.count({c.layer, c.id}) > 0; });
      std::erase_if(repr.connections, [&](const BundledConnection& e) {
        return dead.count({e.layer, e.from}) > 0 || dead.count({e.layer + 1, e.to}) > 0;
      });
    }
  }
  repr.pruned = true;
  return repr;
}

namespace {

std::string node_id(std::size_t layer, std::size_t id) {
  return "L" + std::to_string(layer) + "C" + std::to_string(id);
}

std::string unit_label(const std::vector<std::vector<std::string>>& names, std::size_t layer,
                       std::size_t unit) {
  if (layer < names.size() && unit < names[layer].size()) return names[layer][unit];
  return std::to_string(unit);
}

}  // namespace

void write_dot(std::ostream& out, const ModularRepresentation& repr,
               const std::vector<std::vector<std::string>>& unit_names) {
  out << "digraph modular_representation {\n";
  out << "  rankdir=TB;\n  node [shape=box];\n";
  out << "  // method " << static_cast<int>(repr.method) << ", zeta " << repr.zeta
      << (repr.pruned ? ", pruned" : "") << "\n";
  for (std::size_t d = 0; d < repr.depth; ++d) {
    out << "  subgraph cluster_layer" << d << " {\n";
    out << "    label=\"layer " << d + 1 << "\";\n    rank=same;\n";
    for (const auto& c : repr.communities) {
      if (c.layer != d) continue;
      out << "    " << node_id(d, c.id) << " [label=\"";
      for (std::size_t i = 0; i < c.units.size(); ++i)
        out << (i ? " " : "") << unit_label(unit_names, d, c.units[i]);
      out << "\"];\n";
    }
    out << "  }\n";
  }
  out << std::setprecision(3);
  for (const auto& e : repr.connections)
    out << "  " << node_id(e.layer, e.from) << " -> " << node_id(e.layer + 1, e.to)
        << " [label=\"" << e.density << "\"];\n";
  out << "}\n";
}

void write_membership_report(std::ostream& out, const ModularRepresentation& repr,
                             const std::vector<std::vector<std::string>>& unit_names) {
  out << "# layer\tcommunity\tsize\tunits\n";
  for (const auto& c : repr.communities) {
    out << c.layer + 1 << '\t' << c.id + 1 << '\t' << c.units.size() << '\t';
    for (std::size_t i = 0; i < c.units.size(); ++i)
      out << (i ? "," : "") << unit_label(unit_names, c.layer, c.units[i]);
    out << '\n';
  }
  out << "# bundled connections: " << repr.connections.size() << '\n';
  for (const auto& e : repr.connections)
    out << "# " << e.layer + 1 << ':' << e.from + 1 << " -> " << e.layer + 2 << ':' << e.to + 1
        << " r=" << e.density << '\n';
}

}  // namespace modnet
