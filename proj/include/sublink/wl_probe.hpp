// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sublink/graph.hpp"

namespace sublink {

struct Coloring {
  std::vector<int> colors;
  /// Refinement rounds that split at least one color class.
  std::size_t iterations = 0;
  /// Colors before the first round and after each executed round.
  std::vector<std::vector<int>> history;
};

/// 1-WL refinement. Signatures (own color, sorted neighbor colors) are mapped
/// through an exact dictionary; ids are renumbered by first appearance in node
/// order. Empty `init` means every node starts with the same color. Stops at a
/// fixed point or after `max_iter` rounds.
Coloring wl_refine(const Graph& g, std::span<const int> init = {}, std::size_t max_iter = 10);

/// Disjoint union; nodes of b are shifted by a.num_nodes().
Graph disjoint_union(const Graph& a, const Graph& b);

/// True if the two graphs end with equal color multisets after refining their
/// disjoint union for `iterations` rounds.
bool wl_indistinguishable(const Graph& a, const Graph& b, std::size_t iterations);

/// Fixed instance: focal nodes 0 and 1, edges 0-2, 1-2, 0-3, 1-4. The train
/// copy also contains the focal edge 0-1, the test copy does not.
EnclosingSubgraph fig1_subgraph(bool with_focal_edge);

struct Fig1Report {
  bool shift_detected_original = false;
  bool shift_after_plus = false;
  bool shift_after_minus = false;
  /// Max abs difference of the pooled GCN embedding between the two copies
  /// under the original strategy.
  double original_embedding_diff = 0.0;
  /// Nodes whose color differs between the copies, per round 0..rounds.
  std::vector<std::size_t> differing_nodes;
};

Fig1Report fig1_demo(std::uint64_t seed = 42, std::size_t rounds = 3);

/// Two disjoint triangles {u=0, x1=1, x2=2} and {v=3, w=4, y=5}.
Graph fig3_graph();

struct Fig3Report {
  bool original_distinguishes = true;
  bool plus_distinguishes = false;
};

/// `permutation[k]` is the new id of node k; pass it to run the same
/// construction under relabeling.
Fig3Report fig3_demo(std::uint64_t seed = 42, std::optional<std::vector<NodeId>> permutation = std::nullopt);

}  // namespace sublink
