#include <gtest/gtest.h>

#include <random>

#include "etmas/graph.hpp"
#include "oracles.hpp"

using namespace etmas;

namespace {

// Two 4-cliques {1..4} and {8..11} joined only through 5, 6, 7.
Graph example1_graph() {
  std::vector<Edge> e;
  for (std::size_t a = 1; a <= 4; ++a)
    for (std::size_t b = a + 1; b <= 4; ++b) e.emplace_back(a, b);
  for (std::size_t a = 8; a <= 11; ++a)
    for (std::size_t b = a + 1; b <= 11; ++b) e.emplace_back(a, b);
  for (Edge bridge : {Edge{3, 5}, Edge{4, 5}, Edge{5, 6}, Edge{5, 8}, Edge{4, 7}, Edge{6, 7}, Edge{7, 9}, Edge{7, 10}})
    e.push_back(bridge);
  return build_graph(11, e);
}

}  // namespace

TEST(BuildGraph, SingleEdgeAdjacency) {
  const auto g = build_graph(2, {{1, 2}});
  Eigen::Matrix2d expected;
  expected << 0, 1, 1, 0;
  EXPECT_EQ(g.adjacency(), Eigen::MatrixXd(expected));
}

TEST(BuildGraph, PathDegrees) {
  const auto g = build_graph(3, {{1, 2}, {2, 3}});
  EXPECT_EQ(g.degree(0), 1u);
  EXPECT_EQ(g.degree(1), 2u);
  EXPECT_EQ(g.degree(2), 1u);
}

TEST(BuildGraph, RejectsSelfLoop) { EXPECT_THROW(build_graph(3, {{1, 1}}), GraphError); }

TEST(BuildGraph, RejectsOutOfRange) {
  EXPECT_THROW(build_graph(3, {{1, 4}}), GraphError);
  EXPECT_THROW(build_graph(3, {{0, 2}}), GraphError);
}

TEST(BuildGraph, CollapsesDuplicates) {
  const auto g = build_graph(3, {{1, 2}, {2, 1}, {1, 2}});
  ASSERT_EQ(g.edges().size(), 1u);
  EXPECT_EQ(g.edges()[0], (Edge{1, 2}));
  EXPECT_EQ(g.degree(0), 1u);
}

TEST(BuildGraph, AdjacencySymmetricAndEdgeConsistent) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const auto g = build_graph(n, oracle::random_edges(n, 0.4, rng));
    EXPECT_EQ(g.adjacency(), g.adjacency().transpose());
    EXPECT_EQ(g.adjacency().diagonal().cwiseAbs().sum(), 0.0);
    EXPECT_EQ(static_cast<std::size_t>(g.adjacency().sum()), 2 * g.edges().size());
    for (auto [i, j] : g.edges()) EXPECT_TRUE(g.adjacent(i - 1, j - 1));
  }
}

TEST(Laplacian, Path3) {
  Eigen::Matrix3d expected;
  expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  EXPECT_EQ(laplacian(path_graph(3)), Eigen::MatrixXd(expected));
}

TEST(Laplacian, Complete2) {
  Eigen::Matrix2d expected;
  expected << 1, -1, -1, 1;
  EXPECT_EQ(laplacian(complete_graph(2)), Eigen::MatrixXd(expected));
}

TEST(Laplacian, Edgeless) { EXPECT_EQ(laplacian(build_graph(3, {})), Eigen::MatrixXd::Zero(3, 3)); }

TEST(Laplacian, RowSumsExactlyZero) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 12;
    const auto l = laplacian(build_graph(n, oracle::random_edges(n, 0.5, rng)));
    const Eigen::VectorXd r = l * Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
    EXPECT_EQ(r.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(l, l.transpose());
  }
}

TEST(Connectivity, Examples) {
  EXPECT_TRUE(is_connected(path_graph(3)));
  EXPECT_FALSE(is_connected(build_graph(3, {{1, 2}})));
  EXPECT_TRUE(is_connected(build_graph(1, {})));
}

TEST(Components, PathCutAtFour) {
  const auto c = components_after_removal(path_graph(8), {4});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], (AgentSet{1, 2, 3}));
  EXPECT_EQ(c[1], (AgentSet{5, 6, 7, 8}));
}

TEST(Components, Example1Cut) {
  const auto c = components_after_removal(example1_graph(), {5, 6, 7});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], (AgentSet{1, 2, 3, 4}));
  EXPECT_EQ(c[1], (AgentSet{8, 9, 10, 11}));
}

TEST(Components, LeafRemoval) {
  const auto c = components_after_removal(path_graph(3), {1});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0], (AgentSet{2, 3}));
}

TEST(Components, RemovingEverythingFails) { EXPECT_THROW(components_after_removal(path_graph(3), {1, 2, 3}), GraphError); }

TEST(VertexCut, Examples) {
  EXPECT_TRUE(is_vertex_cut(path_graph(8), {4}));
  EXPECT_FALSE(is_vertex_cut(path_graph(8), {1}));
  EXPECT_TRUE(is_vertex_cut(example1_graph(), {5, 6, 7}));
  EXPECT_TRUE(is_connected(example1_graph()));
}

TEST(VertexCut, PreconditionsEnforced) {
  EXPECT_THROW(is_vertex_cut(build_graph(3, {{1, 2}}), {1}), GraphError);
  EXPECT_THROW(is_vertex_cut(path_graph(3), {}), GraphError);
  EXPECT_THROW(is_vertex_cut(path_graph(3), {1, 2, 3}), GraphError);
}

TEST(VertexCut, MatchesReachabilityOracleOnAllSubsets) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const auto edges = oracle::random_connected_edges(n, 0.3, rng);
    const auto g = build_graph(n, edges);
    const auto adj = oracle::adjacency(n, edges);
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
      AgentSet s;
      std::vector<bool> keep(n, true);
      for (std::size_t v = 0; v < n; ++v)
        if (mask & (1u << v)) {
          s.insert(v + 1);
          keep[v] = false;
        }
      const bool expected = oracle::component_count(adj, keep) >= 2;
      EXPECT_EQ(is_vertex_cut(g, s), expected) << "n=" << n << " mask=" << mask;
      EXPECT_EQ(components_after_removal(g, s).size(), oracle::component_count(adj, keep));
    }
  }
}

TEST(Spectrum, Complete2) {
  const auto s = laplacian_eigenvalues(complete_graph(2));
  ASSERT_EQ(s.eigenvalues.size(), 2u);
  EXPECT_NEAR(s.eigenvalues[0], 0.0, 1e-12);
  EXPECT_NEAR(s.eigenvalues[1], 2.0, 1e-12);
  EXPECT_EQ(s.multiplicity_of_zero, 1u);
}

TEST(Spectrum, Path3MatchesCharacteristicPolynomialRoots) {
  // det(L - s I) = -s (s - 1)(s - 3) for the 3-node path.
  const auto s = laplacian_eigenvalues(path_graph(3));
  ASSERT_EQ(s.eigenvalues.size(), 3u);
  EXPECT_NEAR(s.eigenvalues[0], 0.0, 1e-12);
  EXPECT_NEAR(s.eigenvalues[1], 1.0, 1e-12);
  EXPECT_NEAR(s.eigenvalues[2], 3.0, 1e-12);
  ASSERT_EQ(s.nonzero().size(), 2u);
}

TEST(Spectrum, Edgeless) {
  const auto s = laplacian_eigenvalues(build_graph(3, {}));
  EXPECT_EQ(s.multiplicity_of_zero, 3u);
  for (double v : s.eigenvalues) EXPECT_EQ(v, 0.0);
}

TEST(Spectrum, ZeroMultiplicityEqualsComponentCount) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 12;
    const auto edges = oracle::random_edges(n, 0.15 + 0.05 * (trial % 5), rng);
    const auto g = build_graph(n, edges);
    const auto s = laplacian_eigenvalues(g);
    const auto expected = oracle::component_count(oracle::adjacency(n, edges), std::vector<bool>(n, true));
    EXPECT_EQ(s.multiplicity_of_zero, expected);
    EXPECT_EQ(s.multiplicity_of_zero == 1, is_connected(g));
    const double tol = zero_eigenvalue_tolerance(s.eigenvalues.back());
    EXPECT_GE(s.eigenvalues.front(), -tol);
    EXPECT_NEAR(s.eigenvalues.front(), 0.0, tol);
    EXPECT_TRUE(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
  }
}

TEST(Spectrum, EigenpairResiduals) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 10;
    const auto g = build_graph(n, oracle::random_edges(n, 0.5, rng));
    const auto l = laplacian(g);
    const auto pairs = laplacian_eigenpairs(g);
    const double scale = std::max(1.0, l.norm());
    for (Eigen::Index k = 0; k < pairs.values.size(); ++k) {
      const Eigen::VectorXd v = pairs.vectors.col(k);
      EXPECT_LE((l * v - pairs.values(k) * v).norm(), 1e-9 * scale);
    }
  }
}
