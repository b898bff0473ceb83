// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sublink/graph.hpp"
#include "sublink/tensor.hpp"

namespace sublink {

/// Pooled subgraph representation h.
using Embedding = std::vector<double>;

/// How the focal edge is treated before encoding.
enum class Strategy { Original, Plus, Minus, Mean, Att, Concat };

std::string_view to_string(Strategy s);
/// Accepts original|plus|minus|mean|att|concat; throws std::invalid_argument.
Strategy parse_strategy(std::string_view name);
/// True for strategies that encode both the plus and the minus graph.
bool uses_both_branches(Strategy s);

/// Copy of s with the focal edge (local 0-1) present. Idempotent.
EnclosingSubgraph edge_plus(const EnclosingSubgraph& s);
/// Copy of s with the focal edge absent. Idempotent.
EnclosingSubgraph edge_minus(const EnclosingSubgraph& s);

/// Attention head shared by the plus and minus branches:
/// logit_k = q . tanh(W h_k + b), weights = softmax(logit_plus, logit_minus).
struct FusionParams {
  Matrix weight;  // F x F, applied as h * weight
  Matrix bias;    // 1 x F
  Matrix query;   // 1 x F

  std::size_t width() const { return weight.rows(); }
  bool operator==(const FusionParams&) const = default;
};

struct AttentionWeights {
  double plus = 0.5;
  double minus = 0.5;
};

double attention_logit(std::span<const double> h, const FusionParams& p);
AttentionWeights attention_weights(std::span<const double> h_plus, std::span<const double> h_minus,
                                   const FusionParams& p);

Embedding fuse_mean(std::span<const double> h_plus, std::span<const double> h_minus);
Embedding fuse_att(std::span<const double> h_plus, std::span<const double> h_minus, const FusionParams& p);
/// [h_plus ; h_minus], width 2F.
Embedding fuse_concat(std::span<const double> h_plus, std::span<const double> h_minus);

struct InvarianceReport {
  std::size_t topologies = 0;
  double max_abs_diff = 0.0;
  bool bitwise_equal = true;

  bool holds() const { return bitwise_equal; }
};

using SubgraphEncoder = std::function<Embedding(const EnclosingSubgraph&)>;

/// For each topology, encodes its e=1 (focal edge present) and e=0 variants
/// and compares them. Invariance holds only for bit-identical outputs.
InvarianceReport check_edge_invariance(const SubgraphEncoder& encoder,
                                       std::span<const EnclosingSubgraph> topologies);

/// Seeded random subgraphs with 2..max_nodes nodes, focal pair at 0 and 1,
/// each remaining node attached to the focal pair or an earlier node, plus
/// extra random edges. The focal edge is present in roughly half of them.
std::vector<EnclosingSubgraph> random_topologies(std::size_t count, std::uint64_t seed, std::size_t max_nodes = 12);

}  // namespace sublink
