// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "sublink/graph.hpp"
#include "sublink/tensor.hpp"

namespace sublink {

inline constexpr int kDefaultMaxLabel = 10;

/// Structural labels per local node of an enclosing subgraph.
struct NodeLabeling {
  std::vector<int> labels;

  int max_label() const;
  bool operator==(const NodeLabeling&) const = default;
};

/// Double-radius node labeling. Distances are taken with the focal edge
/// removed, d_i with j masked and d_j with i masked. Focal nodes get 1, a node
/// missing either distance gets 0, others
///   1 + min(d_i, d_j) + (d/2) * (d/2 + d%2 - 1),  d = d_i + d_j.
NodeLabeling drnl_label(const EnclosingSubgraph& s);

/// One-hot of min(label, max_label) (width max_label + 1), followed by the
/// attribute row of the node when `attrs` is non-empty.
Matrix encode_features(const NodeLabeling& labeling, const Matrix& attrs, int max_label);

/// Attribute rows of the subgraph nodes taken from the parent graph; empty
/// when the parent has no attributes.
Matrix gather_attributes(const Graph& parent, const EnclosingSubgraph& s);

}  // namespace sublink
