// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#include "sublink/labeling.hpp"

#include <algorithm>
#include <stdexcept>

#include "sublink/fakeedge.hpp"

namespace sublink {

int NodeLabeling::max_label() const {
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
}

NodeLabeling drnl_label(const EnclosingSubgraph& s) {
  const Graph local = edge_minus(s).to_graph();
  const std::vector<int> di = bfs_distances(local, 0, NodeId{1});
  const std::vector<int> dj = bfs_distances(local, 1, NodeId{0});

  NodeLabeling out;
  out.labels.resize(s.num_nodes(), 0);
  out.labels[0] = out.labels[1] = 1;
  for (std::size_t v = 2; v < s.num_nodes(); ++v) {
    if (di[v] == kUnreachable || dj[v] == kUnreachable) continue;
    const int d = di[v] + dj[v];
    const int half = d / 2;
    out.labels[v] = 1 + std::min(di[v], dj[v]) + half * (half + d % 2 - 1);
  }
  return out;
}

Matrix encode_features(const NodeLabeling& labeling, const Matrix& attrs, int max_label) {
  if (max_label < 1) throw std::invalid_argument("max_label must be at least 1");
  const std::size_t n = labeling.labels.size();
  if (!attrs.empty() && attrs.rows() != n) throw std::invalid_argument("attribute rows must match labels");
  const std::size_t width = static_cast<std::size_t>(max_label) + 1;
  Matrix x(n, width + attrs.cols());
  for (std::size_t v = 0; v < n; ++v) {
    x(v, static_cast<std::size_t>(std::clamp(labeling.labels[v], 0, max_label))) = 1.0;
    for (std::size_t c = 0; c < attrs.cols(); ++c) x(v, width + c) = attrs(v, c);
  }
  return x;
}

Matrix gather_attributes(const Graph& parent, const EnclosingSubgraph& s) {
  if (!parent.has_attributes()) return {};
  Matrix out(s.num_nodes(), parent.attr_dim());
  for (std::size_t v = 0; v < s.num_nodes(); ++v) {
    auto src = parent.attributes().row(static_cast<std::size_t>(s.nodes[v]));
    std::copy(src.begin(), src.end(), out.row(v).begin());
  }
  return out;
}

}  // namespace sublink
