#include <gtest/gtest.h>

#include <random>

#include "orthext/treedec.hpp"
#include "support.hpp"

using namespace orthext;

namespace {

AdjacencyList graph(int n, const std::vector<std::pair<int, int>>& edges) {
  AdjacencyList g(static_cast<std::size_t>(n));
  for (auto [a, b] : edges) {
    g[static_cast<std::size_t>(a)].push_back(b);
    g[static_cast<std::size_t>(b)].push_back(a);
  }
  return g;
}

AdjacencyList random_graph(std::mt19937& rng, int n, double p) {
  std::vector<std::pair<int, int>> edges;
  std::bernoulli_distribution coin(p);
  for (int a = 1; a < n; ++a) {
    edges.push_back({a, std::uniform_int_distribution<int>(0, a - 1)(rng)});
    for (int b = 0; b < a - 1; ++b)
      if (coin(rng)) edges.push_back({a, b});
  }
  return graph(n, edges);
}

}  // namespace

TEST(TreeDec, PathHasWidthOne) {
  auto g = graph(3, {{0, 1}, {1, 2}});
  auto td = decompose(g);
  EXPECT_TRUE(verify(g, td));
  EXPECT_EQ(td.width(), 1);
}

TEST(TreeDec, SingleVertex) {
  auto g = graph(1, {});
  auto td = decompose(g);
  EXPECT_TRUE(verify(g, td));
  EXPECT_EQ(td.width(), 0);
  ASSERT_EQ(td.bags.size(), 1u);
  EXPECT_EQ(td.bags[0].size(), 1u);
}

TEST(TreeDec, FourCycleHasWidthTwo) {
  auto g = graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  auto td = decompose(g);
  EXPECT_TRUE(verify(g, td));
  EXPECT_EQ(td.width(), 2);
}

TEST(TreeDec, VerifyRejectsUncoveredEdge) {
  auto g = graph(3, {{0, 1}, {1, 2}, {0, 2}});
  TreeDecomposition td;
  td.bags = {{0, 1}, {1, 2}};
  td.parent = {-1, 0};
  td.root = 0;
  EXPECT_FALSE(verify(g, td));
}

TEST(TreeDec, VerifyRejectsBrokenSubtree) {
  // Vertex 0 sits in the two ends of a path of four bags but not in the middle ones.
  auto g = graph(4, {{0, 1}, {1, 2}, {2, 3}});
  TreeDecomposition td;
  td.bags = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  td.parent = {-1, 0, 1, 2};
  td.root = 0;
  EXPECT_FALSE(verify(g, td));
}

TEST(TreeDec, RandomGraphsNiceKeepsWidth) {
  std::mt19937 rng(3);
  for (int t = 0; t < 100; ++t) {
    auto g = random_graph(rng, 2 + t % 14, 0.25);
    auto td = decompose(g, static_cast<std::uint64_t>(t));
    ASSERT_TRUE(verify(g, td));
    auto nice = make_nice(td);
    EXPECT_NO_THROW(nice.check());
    EXPECT_EQ(nice.width(), td.width());
    EXPECT_TRUE(verify(g, nice.plain()));
    EXPECT_TRUE(nice.nodes.back().bag.empty());
    for (const auto& n : nice.nodes)
      if (n.kind == NiceKind::Join)
        for (int c : n.children) EXPECT_EQ(nice.nodes[static_cast<std::size_t>(c)].bag, n.bag);
  }
}

TEST(TreeDec, SingleBagBecomesChain) {
  TreeDecomposition td;
  td.bags = {{0, 1, 2}};
  td.parent = {-1};
  td.root = 0;
  auto nice = make_nice(td);
  ASSERT_EQ(nice.nodes.size(), 7u);
  EXPECT_EQ(nice.nodes[0].kind, NiceKind::Leaf);
  for (int t = 1; t <= 3; ++t) EXPECT_EQ(nice.nodes[static_cast<std::size_t>(t)].kind, NiceKind::Introduce);
  for (int t = 4; t <= 6; ++t) EXPECT_EQ(nice.nodes[static_cast<std::size_t>(t)].kind, NiceKind::Forget);
}

TEST(TreeDec, DeterministicForSeed) {
  std::mt19937 rng(9);
  auto g = random_graph(rng, 12, 0.3);
  EXPECT_EQ(decompose(g, 5).bags, decompose(g, 5).bags);
}

TEST(TreeDec, OnePortSectorTreesHaveWidthOne) {
  std::mt19937 rng(21);
  for (int t = 0; t < 30; ++t) {
    auto fi = testsupport::random_face(rng, 1);
    auto dec = decompose_sectors(build_complex(fi).region, fi.h, fi.ports);
    ASSERT_TRUE(dec.graph.is_tree());
    auto td = decompose(dec.graph);
    EXPECT_TRUE(verify(dec.graph, td));
    EXPECT_EQ(td.width(), dec.graph.size > 1 ? 1 : 0);
  }
}

TEST(TreeDec, DotDump) {
  auto g = graph(3, {{0, 1}, {1, 2}});
  auto nice = make_nice(decompose(g));
  auto dot = to_dot(nice);
  EXPECT_NE(dot.find("graph nice"), std::string::npos);
  EXPECT_NE(dot.find("leaf {}"), std::string::npos);
  EXPECT_NE(to_dot(decompose(g)).find("--"), std::string::npos);
}

TEST(TreeDec, PathDecompositionIsValidAndJoinFree) {
  std::mt19937 rng(11);
  for (int t = 0; t < 100; ++t) {
    auto g = random_graph(rng, 1 + t % 15, 0.2);
    auto pd = path_decomposition(g);
    ASSERT_TRUE(verify(g, pd));
    for (std::size_t i = 0; i + 1 < pd.bags.size(); ++i) EXPECT_EQ(pd.parent[i], static_cast<int>(i + 1));
    auto nice = make_nice(pd);
    EXPECT_NO_THROW(nice.check());
    EXPECT_EQ(nice.width(), pd.width());
    for (const auto& n : nice.nodes) EXPECT_NE(n.kind, NiceKind::Join);
  }
}

TEST(TreeDec, PathDecompositionOfCycleHasWidthTwo) {
  auto g = graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
  EXPECT_EQ(path_decomposition(g).width(), 2);
  EXPECT_EQ(path_decomposition(graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}})).width(), 1);
}
