// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#include "sublink/heuristics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sublink {
namespace {

void check_pair(const Graph& g, NodeId i, NodeId j) {
  g.check_node(i);
  g.check_node(j);
  if (i == j) throw std::invalid_argument("focal nodes must differ");
}

/// Calls fn(w) for every common neighbor, walking both sorted lists once.
template <class Fn>
void for_each_common(const Graph& g, NodeId i, NodeId j, Fn&& fn) {
  auto a = g.neighbors(i);
  auto b = g.neighbors(j);
  std::size_t x = 0, y = 0;
  while (x < a.size() && y < b.size()) {
    if (a[x] < b[y]) {
      ++x;
    } else if (b[y] < a[x]) {
      ++y;
    } else {
      fn(a[x]);
      ++x;
      ++y;
    }
  }
}

}  // namespace

std::string_view to_string(Predictor p) {
  switch (p) {
    case Predictor::CommonNeighbors: return "cn";
    case Predictor::AdamicAdar: return "aa";
    case Predictor::ResourceAllocation: return "ra";
    case Predictor::PreferentialAttachment: return "pa";
    case Predictor::Jaccard: return "jac";
  }
  return "?";
}

std::string_view to_string(HeuristicMode m) { return m == HeuristicMode::Original ? "original" : "plus"; }

Predictor parse_predictor(std::string_view name) {
  for (Predictor p : {Predictor::CommonNeighbors, Predictor::AdamicAdar, Predictor::ResourceAllocation,
                      Predictor::PreferentialAttachment, Predictor::Jaccard})
    if (name == to_string(p)) return p;
  throw std::invalid_argument("unknown predictor '" + std::string(name) + "'");
}

HeuristicMode parse_heuristic_mode(std::string_view name) {
  if (name == "original") return HeuristicMode::Original;
  if (name == "plus") return HeuristicMode::EdgePlus;
  throw std::invalid_argument("heuristic mode must be original or plus, got '" + std::string(name) + "'");
}

double common_neighbors(const Graph& g, NodeId i, NodeId j) {
  check_pair(g, i, j);
  double count = 0.0;
  for_each_common(g, i, j, [&](NodeId) { count += 1.0; });
  return count;
}

double adamic_adar(const Graph& g, NodeId i, NodeId j) {
  check_pair(g, i, j);
  double score = 0.0;
  for_each_common(g, i, j, [&](NodeId w) {
    const std::size_t d = g.degree(w);
    if (d > 1) score += 1.0 / std::log(static_cast<double>(d));
  });
  return score;
}

double resource_allocation(const Graph& g, NodeId i, NodeId j) {
  check_pair(g, i, j);
  double score = 0.0;
  for_each_common(g, i, j, [&](NodeId w) { score += 1.0 / static_cast<double>(g.degree(w)); });
  return score;
}

double preferential_attachment(const Graph& g, NodeId i, NodeId j, HeuristicMode mode) {
  check_pair(g, i, j);
  auto di = static_cast<double>(g.degree(i));
  auto dj = static_cast<double>(g.degree(j));
  if (mode == HeuristicMode::EdgePlus && !g.has_edge(i, j)) {
    di += 1.0;
    dj += 1.0;
  }
  return di * dj;
}

double jaccard(const Graph& g, NodeId i, NodeId j, HeuristicMode mode) {
  check_pair(g, i, j);
  const double common = common_neighbors(g, i, j);
  double uni = static_cast<double>(g.degree(i) + g.degree(j)) - common;
  if (mode == HeuristicMode::EdgePlus) {
    // |N(i) u N(j) u {i,j}|: i and j are already in the union exactly when
    // they are adjacent (no self loops).
    if (!g.has_edge(i, j)) uni += 2.0;
  }
  return uni == 0.0 ? 0.0 : common / uni;
}

double heuristic_score(Predictor p, const Graph& g, NodeId i, NodeId j, HeuristicMode mode) {
  switch (p) {
    case Predictor::CommonNeighbors: return common_neighbors(g, i, j);
    case Predictor::AdamicAdar: return adamic_adar(g, i, j);
    case Predictor::ResourceAllocation: return resource_allocation(g, i, j);
    case Predictor::PreferentialAttachment: return preferential_attachment(g, i, j, mode);
    case Predictor::Jaccard: return jaccard(g, i, j, mode);
  }
  return 0.0;
}

}  // namespace sublink
