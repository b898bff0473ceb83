// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sublink/tensor.hpp"

namespace sublink {

using NodeId = std::int32_t;

inline constexpr int kUnreachable = std::numeric_limits<int>::max();
inline constexpr std::size_t kDefaultSubgraphCap = 200;
inline constexpr std::size_t kNoCap = std::numeric_limits<std::size_t>::max();

/// Undirected edge, stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  static Edge normalized(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }
  auto operator<=>(const Edge&) const = default;
};

/// Immutable undirected simple graph in compressed adjacency form.
class Graph {
 public:
  Graph() = default;

  /// Throws std::invalid_argument on a self loop or an out-of-range endpoint.
  /// Duplicate and reversed edges collapse into one.
  static Graph from_edges(std::size_t num_nodes, std::span<const Edge> edges);

  /// Attaches an n x F attribute matrix (rows in node-id order).
  Graph with_attributes(Matrix attrs) const;

  std::size_t num_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const { return edges_.size(); }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeId u, NodeId v) const;

  /// Sorted, normalized edge list.
  const std::vector<Edge>& edges() const { return edges_; }

  const Matrix& attributes() const { return attrs_; }
  std::size_t attr_dim() const { return attrs_.cols(); }
  bool has_attributes() const { return attrs_.cols() > 0; }

  bool contains(NodeId v) const { return v >= 0 && static_cast<std::size_t>(v) < num_nodes(); }
  void check_node(NodeId v) const;

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
  std::vector<Edge> edges_;
  Matrix attrs_;
};

/// Parses a whitespace edge list. Lines starting with '#' or '%' and blank
/// lines are skipped; tokens are opaque labels mapped to dense ids in order of
/// first appearance. Tokens after the first two (edge features) are ignored.
/// Throws ParseError for a self loop, a short line, or an empty input.
Graph load_edge_list(std::istream& in, std::vector<std::string>* labels = nullptr);
Graph load_edge_list_file(const std::string& path, std::vector<std::string>* labels = nullptr);

/// One row of whitespace-separated reals per node, in remapped id order.
Matrix load_node_attributes(std::istream& in, std::size_t num_nodes);

/// Hop distances from `source`; kUnreachable where no path exists. A masked
/// node is treated as deleted: it gets kUnreachable and is never traversed.
std::vector<int> bfs_distances(const Graph& g, NodeId source, std::optional<NodeId> masked = std::nullopt);

/// Induced r-hop neighborhood around a focal pair.
struct EnclosingSubgraph {
  /// Global ids; the focal pair sits at local indices 0 and 1, the rest are
  /// ordered by hop distance to the pair, then by global id.
  std::vector<NodeId> nodes;
  /// Local-index edges, normalized and sorted.
  std::vector<Edge> edges;
  int hops = 0;
  std::unordered_map<NodeId, NodeId> node_map;

  std::size_t num_nodes() const { return nodes.size(); }
  bool has_focal_edge() const;
  /// Local graph over indices [0, num_nodes()).
  Graph to_graph() const;

  bool operator==(const EnclosingSubgraph&) const = default;
};

/// Extracts {v : d(v,i) <= hops or d(v,j) <= hops}. When that exceeds `cap`
/// nodes, whole hop levels are kept closest-first and the level that
/// overflows is uniformly subsampled with a generator seeded by (seed, i, j);
/// farther levels are dropped.
EnclosingSubgraph extract_subgraph(const Graph& g, NodeId i, NodeId j, int hops,
                                   std::size_t cap = kDefaultSubgraphCap, std::uint64_t seed = 0);

}  // namespace sublink
