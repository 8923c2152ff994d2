#include <gtest/gtest.h>

#include <random>

#include "modnet/errors.hpp"
#include "modnet/modularity.hpp"

using namespace modnet;

namespace {

LayerGraph layered(std::vector<std::size_t> widths, std::vector<std::vector<std::vector<int>>> pats) {
  LayerGraph g;
  for (std::size_t w : widths) {
    std::vector<std::size_t> m(w);
    for (std::size_t k = 0; k < w; ++k) m[k] = k;
    g.unit_map.push_back(m);
  }
  for (std::size_t d = 0; d < pats.size(); ++d) {
    Matrix c(widths[d], widths[d + 1]);
    for (std::size_t i = 0; i < widths[d]; ++i)
      for (std::size_t j = 0; j < widths[d + 1]; ++j)
        c(i, j) = pats[d][i][j] ? kConnected : kDisconnected;
    g.connections.push_back(c);
  }
  return g;
}

Matrix symmetric(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges) {
  Matrix m(n, n);
  for (auto [a, b] : edges) {
    m(a, b) += 1;
    m(b, a) += 1;
  }
  return m;
}

}  // namespace

TEST(ModifiedAdjacency, CommonNeighbourCounts) {
  // Inputs 0 and 1 both reach hidden 0..2; input 2 reaches hidden 3 only.
  const LayerGraph g = layered({3, 4}, {{{1, 1, 1, 0}, {1, 1, 1, 0}, {0, 0, 0, 1}}});
  const Matrix m = modified_adjacency(g);
  ASSERT_EQ(m.rows(), 7u);
  EXPECT_EQ(m(0, 1), 3.0);
  EXPECT_EQ(m(1, 0), 3.0);
  EXPECT_EQ(m(0, 2), 0.0);
  EXPECT_EQ(m(3, 4), 2.0);  // hidden 0 and 1 share inputs 0 and 1
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(m(i, i), 0.0);
}

TEST(ModifiedAdjacency, BruteForceOnRandomGraphs) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::size_t> w{2 + rng() % 4, 2 + rng() % 4, 2 + rng() % 4};
    std::vector<std::vector<std::vector<int>>> pats(2);
    for (std::size_t d = 0; d < 2; ++d) {
      pats[d].assign(w[d], std::vector<int>(w[d + 1]));
      for (auto& r : pats[d])
        for (int& v : r) v = rng() % 2;
    }
    const LayerGraph g = layered(w, pats);
    const Matrix m = modified_adjacency(g);
    const auto off = layer_offsets(g);
    const std::size_t n = off.back();
    // Undirected adjacency over the joint index.
    std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
    for (std::size_t d = 0; d < 2; ++d)
      for (std::size_t i = 0; i < w[d]; ++i)
        for (std::size_t j = 0; j < w[d + 1]; ++j)
          if (pats[d][i][j]) adj[off[d] + i][off[d + 1] + j] = adj[off[d + 1] + j][off[d] + i] = 1;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        int common = 0;
        for (std::size_t k = 0; k < n; ++k) common += adj[a][k] && adj[b][k];
        EXPECT_EQ(m(a, b), a == b ? 0.0 : common);
      }
  }
}

TEST(MixingMatrix, SingleCommunity) {
  const Matrix adj = symmetric(3, {{0, 1}, {1, 2}});
  const CommunityStructure s{{{0, 0, 0}}, {1}};
  const auto mix = mixing_matrix(adj, s);
  EXPECT_EQ(mix.fractions(0, 0), 1.0);
  EXPECT_EQ(modularity_q(mix), 0.0);
}

TEST(MixingMatrix, TwoDisconnectedEqualCommunities) {
  const Matrix adj = symmetric(4, {{0, 1}, {2, 3}});
  const CommunityStructure s{{{0, 0, 1, 1}}, {2}};
  const auto mix = mixing_matrix(adj, s);
  EXPECT_EQ(mix.fractions(0, 0), 0.5);
  EXPECT_EQ(mix.fractions(1, 1), 0.5);
  EXPECT_EQ(mix.fractions(0, 1), 0.0);
  EXPECT_EQ(modularity_q(mix), 0.5);
}

TEST(MixingMatrix, UniformMixing) {
  const Matrix adj = symmetric(4, {{0, 2}, {1, 3}, {0, 1}, {2, 3}});
  const CommunityStructure s{{{0, 1, 0, 1}}, {2}};
  const auto mix = mixing_matrix(adj, s);
  for (double v : mix.fractions.data()) EXPECT_EQ(v, 0.25);
  EXPECT_EQ(modularity_q(mix), 0.0);
}

TEST(MixingMatrix, FiveUnitBruteForce) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    Matrix adj(5, 5);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = i + 1; j < 5; ++j) adj(i, j) = adj(j, i) = static_cast<double>(rng() % 4);
    adj(0, 1) = adj(1, 0) = 1;  // never empty
    // two layers: units 0-2 and 3-4
    std::vector<std::size_t> l0{rng() % 2, rng() % 2, rng() % 2}, l1{rng() % 2, rng() % 2};
    const CommunityStructure s{{l0, l1}, {2, 2}};
    const auto mix = mixing_matrix(adj, s);
    const std::size_t glob[5] = {l0[0], l0[1], l0[2], 2 + l1[0], 2 + l1[1]};
    double total = 0;
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) total += adj(i, j);
    double q = 0;
    for (std::size_t a = 0; a < 4; ++a) {
      double row = 0;
      for (std::size_t b = 0; b < 4; ++b) {
        double sum = 0;
        for (std::size_t i = 0; i < 5; ++i)
          for (std::size_t j = 0; j < 5; ++j)
            if (glob[i] == a && glob[j] == b) sum += adj(i, j);
        EXPECT_NEAR(mix.fractions(a, b), sum / total, 1e-15);
        row += sum / total;
      }
      double diag = 0;
      for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j)
          if (glob[i] == a && glob[j] == a) diag += adj(i, j) / total;
      q += diag - row * row;
    }
    EXPECT_NEAR(modularity_q(mix), q, 1e-14);
  }
}

TEST(MixingMatrix, EmptyMassThrows) {
  const CommunityStructure s{{{0, 0}}, {1}};
  EXPECT_THROW(mixing_matrix(Matrix(2, 2), s), NumericDomainError);
  EXPECT_THROW(mixing_matrix(Matrix(3, 3), s), ShapeError);
}

TEST(MixingMatrix, WholeNetworkAsOneCommunity) {
  const LayerGraph g = layered({2, 3, 2}, {{{1, 1, 0}, {0, 1, 1}}, {{1, 0}, {1, 1}, {0, 1}}});
  const Matrix adj = modified_adjacency(g);
  const auto mix = mixing_matrix(adj, std::vector<std::size_t>(adj.rows(), 0), 1);
  EXPECT_EQ(mix.fractions(0, 0), 1.0);
  EXPECT_EQ(modularity_q(mix), 0.0);
  EXPECT_THROW(mixing_matrix(adj, std::vector<std::size_t>(adj.rows(), 1), 1), ShapeError);
}

TEST(NetworkModularity, AnalyticCases) {
  // Inputs {0,1} -> hidden 0, inputs {2,3} -> hidden 1.
  const LayerGraph g = layered({4, 2}, {{{1, 0}, {1, 0}, {0, 1}, {0, 1}}});
  const CommunityStructure split{{{0, 0, 1, 1}, {0, 1}}, {2, 2}};
  EXPECT_EQ(network_modularity(g, split), 0.5);
}

TEST(NetworkModularity, PrunedFilter) {
  const LayerGraph g = layered({4, 2}, {{{1, 0}, {1, 0}, {0, 1}, {0, 1}}});
  const CommunityStructure split{{{0, 0, 1, 1}, {0, 1}}, {2, 2}};
  ModularRepresentation repr = bundle(split, g, BundleMethod::kDensity, 0.3);
  // Keep only community 0 of each layer.
  std::erase_if(repr.communities, [](const Community& c) { return c.id == 1; });
  EXPECT_EQ(network_modularity(g, split, &repr), 0.0);  // one community left
}
