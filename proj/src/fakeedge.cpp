// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#include "sublink/fakeedge.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>

#include "sublink/common.hpp"

namespace sublink {
namespace {

constexpr Edge kFocal{0, 1};

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("plus/minus embeddings differ in width");
}

void check_finite(const Matrix& m, const char* what) {
  for (double v : m.flat())
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " has a non-finite entry");
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Original: return "original";
    case Strategy::Plus: return "plus";
    case Strategy::Minus: return "minus";
    case Strategy::Mean: return "mean";
    case Strategy::Att: return "att";
    case Strategy::Concat: return "concat";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::Original, Strategy::Plus, Strategy::Minus, Strategy::Mean, Strategy::Att,
                     Strategy::Concat})
    if (name == to_string(s)) return s;
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

bool uses_both_branches(Strategy s) {
  return s == Strategy::Mean || s == Strategy::Att || s == Strategy::Concat;
}

EnclosingSubgraph edge_plus(const EnclosingSubgraph& s) {
  EnclosingSubgraph out = s;
  auto it = std::lower_bound(out.edges.begin(), out.edges.end(), kFocal);
  if (it == out.edges.end() || *it != kFocal) out.edges.insert(it, kFocal);
  return out;
}

EnclosingSubgraph edge_minus(const EnclosingSubgraph& s) {
  EnclosingSubgraph out = s;
  auto it = std::lower_bound(out.edges.begin(), out.edges.end(), kFocal);
  if (it != out.edges.end() && *it == kFocal) out.edges.erase(it);
  return out;
}

double attention_logit(std::span<const double> h, const FusionParams& p) {
  require_width(h.size(), p.width(), "attention input");
  std::vector<double> a(p.bias.row(0).begin(), p.bias.row(0).end());
  accumulate_row_times(h, p.weight, a);
  double logit = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) logit += p.query(0, c) * std::tanh(a[c]);
  return logit;
}

AttentionWeights attention_weights(std::span<const double> h_plus, std::span<const double> h_minus,
                                   const FusionParams& p) {
  check_pair(h_plus, h_minus);
  check_finite(p.weight, "attention weight");
  check_finite(p.bias, "attention bias");
  check_finite(p.query, "attention query");
  const double lp = attention_logit(h_plus, p);
  const double lm = attention_logit(h_minus, p);
  const double top = std::max(lp, lm);
  const double ep = std::exp(lp - top);
  const double em = std::exp(lm - top);
  return {ep / (ep + em), em / (ep + em)};
}

Embedding fuse_mean(std::span<const double> h_plus, std::span<const double> h_minus) {
  check_pair(h_plus, h_minus);
  Embedding out(h_plus.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (h_plus[k] + h_minus[k]) / 2.0;
  return out;
}

Embedding fuse_att(std::span<const double> h_plus, std::span<const double> h_minus, const FusionParams& p) {
  const AttentionWeights w = attention_weights(h_plus, h_minus, p);
  Embedding out(h_plus.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = w.plus * h_plus[k] + w.minus * h_minus[k];
  return out;
}

Embedding fuse_concat(std::span<const double> h_plus, std::span<const double> h_minus) {
  check_pair(h_plus, h_minus);
  Embedding out(h_plus.begin(), h_plus.end());
  out.insert(out.end(), h_minus.begin(), h_minus.end());
  return out;
}

InvarianceReport check_edge_invariance(const SubgraphEncoder& encoder,
                                       std::span<const EnclosingSubgraph> topologies) {
  InvarianceReport report;
  for (const EnclosingSubgraph& topology : topologies) {
    const Embedding with_edge = encoder(edge_plus(topology));
    const Embedding without_edge = encoder(edge_minus(topology));
    ++report.topologies;
    if (with_edge.size() != without_edge.size()) {
      report.bitwise_equal = false;
      report.max_abs_diff = INFINITY;
      continue;
    }
    for (std::size_t k = 0; k < with_edge.size(); ++k) {
      const double d = std::abs(with_edge[k] - without_edge[k]);
      if (!(d <= report.max_abs_diff)) report.max_abs_diff = d;  // also propagates NaN
    }
    if (!with_edge.empty() &&
        std::memcmp(with_edge.data(), without_edge.data(), with_edge.size() * sizeof(double)) != 0)
      report.bitwise_equal = false;
  }
  return report;
}

std::vector<EnclosingSubgraph> random_topologies(std::size_t count, std::uint64_t seed, std::size_t max_nodes) {
  if (max_nodes < 2) throw std::invalid_argument("random_topologies needs max_nodes >= 2");
  Rng rng(mix_seed(seed, 0x746f706f));
  std::bernoulli_distribution coin(0.5), extra(0.2);
  std::vector<EnclosingSubgraph> out;
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t n = 2 + uniform_index(rng, max_nodes - 1);
    std::vector<Edge> edges;
    for (std::size_t v = 2; v < n; ++v) edges.push_back(Edge::normalized(static_cast<NodeId>(uniform_index(rng, v)), static_cast<NodeId>(v)));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (!(a == 0 && b == 1) && extra(rng)) edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b)});
    if (coin(rng)) edges.push_back({0, 1});
    const Graph g = Graph::from_edges(n, edges);
    EnclosingSubgraph s;
    s.nodes.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      s.nodes[v] = static_cast<NodeId>(v);
      s.node_map[static_cast<NodeId>(v)] = static_cast<NodeId>(v);
    }
    s.edges = g.edges();
    s.hops = 2;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace sublink
