// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#include "sublink/wl_probe.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "sublink/mpnn.hpp"

namespace sublink {
namespace {

std::vector<int> canonical(std::span<const int> raw) {
  std::map<int, int> ids;
  std::vector<int> out(raw.size());
  for (std::size_t v = 0; v < raw.size(); ++v)
    out[v] = ids.try_emplace(raw[v], static_cast<int>(ids.size())).first->second;
  return out;
}

std::size_t class_count(std::span<const int> colors) {
  return colors.empty() ? 0 : static_cast<std::size_t>(*std::max_element(colors.begin(), colors.end())) + 1;
}

EnclosingSubgraph whole_graph(const Graph& g) {
  EnclosingSubgraph s;
  s.nodes.resize(g.num_nodes());
  std::iota(s.nodes.begin(), s.nodes.end(), 0);
  s.edges = g.edges();
  for (NodeId v : s.nodes) s.node_map[v] = v;
  return s;
}

}  // namespace

Coloring wl_refine(const Graph& g, std::span<const int> init, std::size_t max_iter) {
  const std::size_t n = g.num_nodes();
  if (!init.empty() && init.size() != n) throw std::invalid_argument("wl_refine: one initial color per node");
  Coloring c;
  c.colors = init.empty() ? std::vector<int>(n, 0) : canonical(init);
  c.history.push_back(c.colors);
  for (std::size_t round = 0; round < max_iter; ++round) {
    std::map<std::vector<int>, int> dictionary;
    std::vector<int> next(n);
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<int> sig{c.colors[v]};
      for (NodeId w : g.neighbors(static_cast<NodeId>(v))) sig.push_back(c.colors[w]);
      std::sort(sig.begin() + 1, sig.end());
      next[v] = dictionary.try_emplace(std::move(sig), static_cast<int>(dictionary.size())).first->second;
    }
    next = canonical(next);
    const bool stable = class_count(next) == class_count(c.colors);
    c.colors = std::move(next);
    c.history.push_back(c.colors);
    if (stable) break;
    ++c.iterations;
  }
  return c;
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<Edge> edges = a.edges();
  const auto shift = static_cast<NodeId>(a.num_nodes());
  for (const Edge& e : b.edges()) edges.push_back({e.u + shift, e.v + shift});
  return Graph::from_edges(a.num_nodes() + b.num_nodes(), edges);
}

bool wl_indistinguishable(const Graph& a, const Graph& b, std::size_t iterations) {
  if (a.num_nodes() != b.num_nodes()) return false;
  const Coloring c = wl_refine(disjoint_union(a, b), {}, iterations);
  std::vector<int> ca(c.colors.begin(), c.colors.begin() + static_cast<std::ptrdiff_t>(a.num_nodes()));
  std::vector<int> cb(c.colors.begin() + static_cast<std::ptrdiff_t>(a.num_nodes()), c.colors.end());
  std::sort(ca.begin(), ca.end());
  std::sort(cb.begin(), cb.end());
  return ca == cb;
}

EnclosingSubgraph fig1_subgraph(bool with_focal_edge) {
  EnclosingSubgraph s;
  s.nodes = {0, 1, 2, 3, 4};
  for (NodeId v : s.nodes) s.node_map[v] = v;
  s.hops = 1;
  s.edges = {{0, 2}, {0, 3}, {1, 2}, {1, 4}};
  return with_focal_edge ? edge_plus(s) : s;
}

Fig1Report fig1_demo(std::uint64_t seed, std::size_t rounds) {
  const EnclosingSubgraph train_copy = fig1_subgraph(true);
  const EnclosingSubgraph test_copy = fig1_subgraph(false);
  const std::size_t n = train_copy.num_nodes();

  auto focal_colors_differ = [&](const EnclosingSubgraph& a, const EnclosingSubgraph& b) {
    const Coloring c = wl_refine(disjoint_union(a.to_graph(), b.to_graph()), {}, 1);
    return c.colors[0] != c.colors[n] || c.colors[1] != c.colors[n + 1];
  };

  Fig1Report r;
  r.shift_detected_original = focal_colors_differ(train_copy, test_copy);
  r.shift_after_plus = focal_colors_differ(edge_plus(train_copy), edge_plus(test_copy));
  r.shift_after_minus = focal_colors_differ(edge_minus(train_copy), edge_minus(test_copy));

  const Coloring c = wl_refine(disjoint_union(train_copy.to_graph(), test_copy.to_graph()), {}, rounds);
  for (const auto& colors : c.history) {
    std::size_t differ = 0;
    for (std::size_t v = 0; v < n; ++v) differ += colors[v] != colors[n + v];
    r.differing_nodes.push_back(differ);
  }

  ModelSpec spec;
  spec.layer = LayerType::Gcn;
  spec.pooling = Pooling::CenterHadamard;
  spec.strategy = Strategy::Original;
  const ModelParams params = ModelParams::init(spec, seed);
  const Matrix none;
  const Prediction a = predict(params, encode_sample(train_copy, 1, spec.strategy, none, kDefaultMaxLabel));
  const Prediction b = predict(params, encode_sample(test_copy, 1, spec.strategy, none, kDefaultMaxLabel));
  for (std::size_t k = 0; k < a.embedding.size(); ++k)
    r.original_embedding_diff = std::max(r.original_embedding_diff, std::abs(a.embedding[k] - b.embedding[k]));
  return r;
}

Graph fig3_graph() {
  const std::vector<Edge> edges{{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}};
  return Graph::from_edges(6, edges);
}

Fig3Report fig3_demo(std::uint64_t seed, std::optional<std::vector<NodeId>> permutation) {
  std::vector<NodeId> id(6);
  std::iota(id.begin(), id.end(), 0);
  if (permutation) {
    if (permutation->size() != id.size() || !std::is_permutation(id.begin(), id.end(), permutation->begin()))
      throw std::invalid_argument("fig3_demo: not a permutation of 0..5");
    id.swap(*permutation);
  }
  const Graph triangles = fig3_graph();
  std::vector<Edge> edges;
  for (const Edge& e : triangles.edges()) edges.push_back(Edge::normalized(id[e.u], id[e.v]));
  const Graph base = Graph::from_edges(6, edges);
  const NodeId u = id[0], v = id[3], w = id[4];
  edges.push_back(Edge::normalized(u, w));
  const Graph augmented = Graph::from_edges(6, edges);

  ModelSpec spec;
  spec.layer = LayerType::Gin;
  spec.pooling = Pooling::CenterHadamard;
  spec.strategy = Strategy::Original;
  spec.input_dim = 1;
  const ModelParams params = ModelParams::init(spec, seed);
  const Matrix ones(6, 1, 1.0);

  const Matrix z = forward(params, ones, whole_graph(base));
  const Matrix z_plus = forward(params, ones, whole_graph(augmented));
  const auto uw = static_cast<std::size_t>(u), vw = static_cast<std::size_t>(v), ww = static_cast<std::size_t>(w);
  Fig3Report r;
  r.original_distinguishes = pool_center(z, uw, ww) != pool_center(z, vw, ww);
  // {v,w} already carries an edge, so edge_plus leaves its graph unchanged.
  r.plus_distinguishes = pool_center(z_plus, uw, ww) != pool_center(z, vw, ww);
  return r;
}

}  // namespace sublink
