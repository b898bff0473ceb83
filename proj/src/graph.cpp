// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#include "sublink/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "sublink/common.hpp"

namespace sublink {

Graph Graph::from_edges(std::size_t num_nodes, std::span<const Edge> edges) {
  Graph g;
  g.edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u == e.v) throw std::invalid_argument("self loop at node " + std::to_string(e.u));
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(std::max(e.u, e.v)) >= num_nodes)
      throw std::invalid_argument("edge endpoint out of range");
    g.edges_.push_back(Edge::normalized(e.u, e.v));
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

  g.offsets_.assign(num_nodes + 1, 0);
  for (const Edge& e : g.edges_) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (std::size_t v = 0; v < num_nodes; ++v) g.offsets_[v + 1] += g.offsets_[v];
  g.adjacency_.resize(2 * g.edges_.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Edges are sorted by (u, v), so each list fills in ascending order for the
  // u-side; the v-side needs the final sort below.
  for (const Edge& e : g.edges_) {
    g.adjacency_[cursor[e.u]++] = e.v;
    g.adjacency_[cursor[e.v]++] = e.u;
  }
  for (std::size_t v = 0; v < num_nodes; ++v)
    std::sort(g.adjacency_.begin() + g.offsets_[v], g.adjacency_.begin() + g.offsets_[v + 1]);
  return g;
}

Graph Graph::with_attributes(Matrix attrs) const {
  if (attrs.rows() != num_nodes())
    throw std::invalid_argument("attribute rows must match node count");
  Graph g = *this;
  g.attrs_ = std::move(attrs);
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (!contains(u) || !contains(v)) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

void Graph::check_node(NodeId v) const {
  if (!contains(v)) throw std::out_of_range("node id " + std::to_string(v) + " out of range");
}

Graph load_edge_list(std::istream& in, std::vector<std::string>* labels) {
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> names;
  std::vector<Edge> edges;
  auto id_of = [&](const std::string& token) {
    auto [it, inserted] = ids.try_emplace(token, static_cast<NodeId>(names.size()));
    if (inserted) names.push_back(token);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string a, b;
    if (!(fields >> a)) continue;
    if (a[0] == '#' || a[0] == '%') continue;
    if (!(fields >> b)) throw ParseError("expected two node tokens", line_no);
    if (a == b) throw ParseError("self loop on node '" + a + "'", line_no);
    const NodeId u = id_of(a);
    const NodeId v = id_of(b);
    edges.push_back(Edge::normalized(u, v));
  }
  if (edges.empty()) throw ParseError("edge list is empty", line_no);
  if (labels) *labels = std::move(names);
  return Graph::from_edges(ids.size(), edges);
}

Graph load_edge_list_file(const std::string& path, std::vector<std::string>* labels) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list '" + path + "'");
  return load_edge_list(in, labels);
}

Matrix load_node_attributes(std::istream& in, std::size_t num_nodes) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<double> row;
    std::string token;
    while (fields >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) throw ParseError("non-numeric attribute '" + token + "'", line_no);
      row.push_back(v);
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("attribute row width differs from the first row", line_no);
    rows.push_back(std::move(row));
  }
  if (rows.size() != num_nodes)
    throw ParseError("expected " + std::to_string(num_nodes) + " attribute rows, got " +
                         std::to_string(rows.size()),
                     line_no);
  Matrix m(num_nodes, rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  return m;
}

std::vector<int> bfs_distances(const Graph& g, NodeId source, std::optional<NodeId> masked) {
  g.check_node(source);
  if (masked) {
    g.check_node(*masked);
    if (*masked == source) throw std::invalid_argument("masked node equals BFS source");
  }
  std::vector<int> dist(g.num_nodes(), kUnreachable);
  dist[source] = 0;
  std::deque<NodeId> frontier{source};
  while (!frontier.empty()) {
    const NodeId v = frontier.front();
    frontier.pop_front();
    for (NodeId w : g.neighbors(v)) {
      if (dist[w] != kUnreachable || (masked && w == *masked)) continue;
      dist[w] = dist[v] + 1;
      frontier.push_back(w);
    }
  }
  return dist;
}

bool EnclosingSubgraph::has_focal_edge() const {
  return std::binary_search(edges.begin(), edges.end(), Edge{0, 1});
}

Graph EnclosingSubgraph::to_graph() const { return Graph::from_edges(nodes.size(), edges); }

EnclosingSubgraph extract_subgraph(const Graph& g, NodeId i, NodeId j, int hops, std::size_t cap,
                                   std::uint64_t seed) {
  g.check_node(i);
  g.check_node(j);
  if (i == j) throw std::invalid_argument("focal nodes must differ");
  if (hops < 1) throw std::invalid_argument("hop radius must be at least 1");
  if (cap < 2) throw std::invalid_argument("subgraph cap must be at least 2");

  // Multi-source BFS from the pair gives min(d(v,i), d(v,j)), one level per hop.
  std::vector<int> dist(g.num_nodes(), kUnreachable);
  dist[i] = dist[j] = 0;
  std::vector<std::vector<NodeId>> levels(1);
  std::vector<NodeId> current{i, j};
  for (int h = 1; h <= hops && !current.empty(); ++h) {
    std::vector<NodeId> next;
    for (NodeId v : current)
      for (NodeId w : g.neighbors(v))
        if (dist[w] == kUnreachable) {
          dist[w] = h;
          next.push_back(w);
        }
    std::sort(next.begin(), next.end());
    levels.push_back(next);
    current = std::move(next);
  }

  EnclosingSubgraph s;
  s.hops = hops;
  s.nodes = {i, j};
  Rng rng(mix_seed(seed, (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
                             static_cast<std::uint32_t>(j)));
  for (std::size_t h = 1; h < levels.size(); ++h) {
    auto& level = levels[h];
    const std::size_t room = cap - s.nodes.size();
    if (level.size() <= room) {
      s.nodes.insert(s.nodes.end(), level.begin(), level.end());
      continue;
    }
    // Partial Fisher-Yates: the first `room` slots become a uniform sample.
    for (std::size_t k = 0; k < room; ++k) std::swap(level[k], level[k + uniform_index(rng, level.size() - k)]);
    std::sort(level.begin(), level.begin() + static_cast<std::ptrdiff_t>(room));
    s.nodes.insert(s.nodes.end(), level.begin(), level.begin() + static_cast<std::ptrdiff_t>(room));
    break;
  }

  s.node_map.reserve(s.nodes.size());
  for (std::size_t k = 0; k < s.nodes.size(); ++k) s.node_map.emplace(s.nodes[k], static_cast<NodeId>(k));
  for (std::size_t a = 0; a < s.nodes.size(); ++a)
    for (NodeId w : g.neighbors(s.nodes[a])) {
      auto it = s.node_map.find(w);
      if (it != s.node_map.end() && static_cast<std::size_t>(it->second) > a)
        s.edges.push_back(Edge{static_cast<NodeId>(a), it->second});
    }
  std::sort(s.edges.begin(), s.edges.end());
  return s;
}

}  // namespace sublink
