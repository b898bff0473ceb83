// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "sublink/common.hpp"
#include "sublink/graph.hpp"

namespace sublink {
namespace {

Graph parse(const std::string& text, std::vector<std::string>* labels = nullptr) {
  std::istringstream in(text);
  return load_edge_list(in, labels);
}

Graph path(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t v = 0; v + 1 < n; ++v) edges.push_back({static_cast<NodeId>(v), static_cast<NodeId>(v + 1)});
  return Graph::from_edges(n, edges);
}

TEST(EdgeList, Triangle) {
  const Graph g = parse("0 1\n1 2\n2 0\n");
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.num_edges(), 3u);
}

TEST(EdgeList, DuplicateAndReversedEdgesCollapse) {
  std::vector<std::string> labels;
  const Graph g = parse("a b\nb a\n", &labels);
  EXPECT_EQ(g.num_nodes(), 2u);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_EQ(labels, (std::vector<std::string>{"a", "b"}));
}

TEST(EdgeList, SelfLoopReportsLine) {
  try {
    parse("0 0\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  try {
    parse("# header\n0 1\n\n2 2\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(EdgeList, CommentsBlankLinesAndExtraColumns) {
  std::vector<std::string> labels;
  const Graph g = parse("% comment\n\n10 20 0.5\n# x\n20 30 1.0 extra\n", &labels);
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(labels, (std::vector<std::string>{"10", "20", "30"}));
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 2));
  EXPECT_FALSE(g.has_edge(0, 2));
}

TEST(EdgeList, MalformedInputs) {
  EXPECT_THROW(parse("0\n"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("# only comments\n"), ParseError);
}

TEST(Graph, FromEdgesValidates) {
  const std::vector<Edge> loop{{1, 1}};
  EXPECT_THROW(Graph::from_edges(3, loop), std::invalid_argument);
  const std::vector<Edge> out_of_range{{0, 5}};
  EXPECT_THROW(Graph::from_edges(3, out_of_range), std::invalid_argument);
}

TEST(Graph, AdjacencyIsSortedAndSymmetric) {
  const auto edges = oracle::gnp_edges(40, 0.2, 5);
  const Graph g = Graph::from_edges(40, edges);
  const auto adj = oracle::adjacency(40, edges);
  for (NodeId v = 0; v < 40; ++v) {
    const auto nb = g.neighbors(v);
    EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
    EXPECT_EQ(g.degree(v), static_cast<std::size_t>(std::count(adj[v].begin(), adj[v].end(), true)));
    for (NodeId w = 0; w < 40; ++w) EXPECT_EQ(g.has_edge(v, w), adj[v][w]);
  }
}

TEST(Graph, AttributesLoadInRemappedOrder) {
  const Graph g = parse("0 1\n1 2\n");
  std::istringstream attrs("1 2\n3 4\n5 6\n");
  const Matrix m = load_node_attributes(attrs, g.num_nodes());
  const Graph ga = g.with_attributes(m);
  EXPECT_EQ(ga.attr_dim(), 2u);
  EXPECT_EQ(ga.attributes()(2, 1), 6.0);
  std::istringstream short_attrs("1 2\n");
  EXPECT_THROW(load_node_attributes(short_attrs, 3), ParseError);
}

TEST(Bfs, PathDistances) {
  const Graph g = path(3);
  EXPECT_EQ(bfs_distances(g, 0), (std::vector<int>{0, 1, 2}));
}

TEST(Bfs, MaskingCutsThePath) {
  const Graph g = path(3);
  EXPECT_EQ(bfs_distances(g, 0, NodeId{1}), (std::vector<int>{0, kUnreachable, kUnreachable}));
  EXPECT_THROW(bfs_distances(g, 0, NodeId{0}), std::invalid_argument);
  EXPECT_THROW(bfs_distances(g, 7), std::out_of_range);
}

TEST(Bfs, MatchesFloydWarshall) {
  const auto edges = oracle::gnp_edges(30, 0.2, 11);
  const Graph g = Graph::from_edges(30, edges);
  const auto dist = oracle::floyd_warshall(30, edges);
  for (NodeId s = 0; s < 30; ++s) {
    const auto d = bfs_distances(g, s);
    for (std::size_t v = 0; v < 30; ++v) EXPECT_EQ(d[v], dist[s][v]) << s << "->" << v;
  }
}

TEST(Extract, PathAroundMiddleEdge) {
  const Graph g = path(4);
  const EnclosingSubgraph s = extract_subgraph(g, 1, 2, 1);
  EXPECT_EQ(s.nodes, (std::vector<NodeId>{1, 2, 0, 3}));
  // Local ids: 1->0, 2->1, 0->2, 3->3.
  EXPECT_EQ(s.edges, (std::vector<Edge>{{0, 1}, {0, 2}, {1, 3}}));
  EXPECT_TRUE(s.has_focal_edge());
  EXPECT_EQ(s.node_map.at(3), 3);
}

TEST(Extract, TriangleIsWhole) {
  const std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}};
  const EnclosingSubgraph s = extract_subgraph(Graph::from_edges(3, tri), 0, 1, 1);
  EXPECT_EQ(s.num_nodes(), 3u);
  EXPECT_EQ(s.edges.size(), 3u);
}

TEST(Extract, NodeSetsMatchBruteForce) {
  const auto edges = oracle::gnp_edges(50, 0.1, 3);
  const Graph g = Graph::from_edges(50, edges);
  const auto dist = oracle::floyd_warshall(50, edges);
  Rng rng(99);
  for (int t = 0; t < 20; ++t) {
    const auto i = static_cast<NodeId>(uniform_index(rng, 50));
    auto j = static_cast<NodeId>(uniform_index(rng, 49));
    if (j >= i) ++j;
    const EnclosingSubgraph s = extract_subgraph(g, i, j, 2, kNoCap);
    const std::set<NodeId> got(s.nodes.begin(), s.nodes.end());
    EXPECT_EQ(got, oracle::enclosing_nodes(dist, i, j, 2));
    EXPECT_EQ(s.nodes[0], i);
    EXPECT_EQ(s.nodes[1], j);
    // Induced: every parent edge among the kept nodes is present, nothing else.
    std::size_t induced = 0;
    for (const Edge& e : edges) induced += got.count(e.u) && got.count(e.v);
    EXPECT_EQ(s.edges.size(), induced);
    for (const Edge& e : s.edges) EXPECT_TRUE(g.has_edge(s.nodes[e.u], s.nodes[e.v]));
  }
}

TEST(Extract, DisconnectedPairIsUnionOfBalls) {
  const std::vector<Edge> edges{{0, 2}, {1, 3}};
  const EnclosingSubgraph s = extract_subgraph(Graph::from_edges(4, edges), 0, 1, 2);
  EXPECT_EQ(s.num_nodes(), 4u);
  EXPECT_FALSE(s.has_focal_edge());
}

TEST(Extract, Idempotent) {
  const auto edges = oracle::gnp_edges(40, 0.12, 8);
  const Graph g = Graph::from_edges(40, edges);
  for (NodeId i = 0; i < 10; ++i) {
    const EnclosingSubgraph s = extract_subgraph(g, i, i + 10, 2, kNoCap);
    const EnclosingSubgraph again = extract_subgraph(s.to_graph(), 0, 1, 2, kNoCap);
    std::vector<NodeId> local(s.num_nodes());
    std::iota(local.begin(), local.end(), 0);
    EXPECT_EQ(again.nodes, local);
    EXPECT_EQ(again.edges, s.edges);
  }
}

TEST(Extract, MonotoneInRadius) {
  const auto edges = oracle::gnp_edges(60, 0.05, 21);
  const Graph g = Graph::from_edges(60, edges);
  for (NodeId i = 0; i < 10; ++i) {
    std::set<NodeId> prev;
    for (int r = 1; r <= 4; ++r) {
      const auto s = extract_subgraph(g, i, 59 - i, r, kNoCap);
      const std::set<NodeId> cur(s.nodes.begin(), s.nodes.end());
      EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
      prev = cur;
    }
  }
}

TEST(Extract, CapKeepsNearLevelsAndIsDeterministic) {
  // Star-of-stars: focal pair 0,1 share hub neighbours with many leaves.
  std::vector<Edge> edges{{0, 2}, {1, 2}};
  NodeId next = 3;
  for (int k = 0; k < 30; ++k) edges.push_back({2, next++});
  for (int k = 0; k < 30; ++k) edges.push_back({next - 1 - k, next++});
  const Graph g = Graph::from_edges(static_cast<std::size_t>(next), edges);
  const auto a = extract_subgraph(g, 0, 1, 3, 20, 5);
  const auto b = extract_subgraph(g, 0, 1, 3, 20, 5);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.num_nodes(), 20u);
  EXPECT_EQ(a.nodes[2], 2);  // the only hop-1 node always survives
  const auto dist_i = bfs_distances(g, 0);
  const auto dist_j = bfs_distances(g, 1);
  for (std::size_t k = 3; k < a.num_nodes(); ++k)
    EXPECT_EQ(std::min(dist_i[a.nodes[k]], dist_j[a.nodes[k]]), 2);
  const auto c = extract_subgraph(g, 0, 1, 3, 20, 6);
  EXPECT_NE(a.nodes, c.nodes);
}

TEST(Extract, RejectsBadArguments) {
  const Graph g = path(4);
  EXPECT_THROW(extract_subgraph(g, 0, 0, 1), std::invalid_argument);
  EXPECT_THROW(extract_subgraph(g, 0, 9, 1), std::out_of_range);
  EXPECT_THROW(extract_subgraph(g, 0, 1, 0), std::invalid_argument);
}

}  // namespace
}  // namespace sublink
