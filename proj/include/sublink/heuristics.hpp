// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

#include "sublink/graph.hpp"

namespace sublink {

enum class Predictor { CommonNeighbors, AdamicAdar, ResourceAllocation, PreferentialAttachment, Jaccard };

/// Original scores the graph as observed; EdgePlus scores it as if the focal
/// edge were present.
enum class HeuristicMode { Original, EdgePlus };

std::string_view to_string(Predictor p);
std::string_view to_string(HeuristicMode m);
/// Accepts cn|aa|ra|pa|jac.
Predictor parse_predictor(std::string_view name);
/// Accepts original|plus.
HeuristicMode parse_heuristic_mode(std::string_view name);

struct HeuristicScore {
  Edge pair;
  double value = 0.0;
  Predictor predictor = Predictor::CommonNeighbors;
  HeuristicMode mode = HeuristicMode::Original;
};

// CN, AA and RA do not depend on the focal edge, so they take no mode.
double common_neighbors(const Graph& g, NodeId i, NodeId j);
/// Sum of 1/log(deg w) over common neighbors; degree-1 terms are skipped.
double adamic_adar(const Graph& g, NodeId i, NodeId j);
double resource_allocation(const Graph& g, NodeId i, NodeId j);
double preferential_attachment(const Graph& g, NodeId i, NodeId j, HeuristicMode mode);
/// Zero when the denominator is empty.
double jaccard(const Graph& g, NodeId i, NodeId j, HeuristicMode mode);

double heuristic_score(Predictor p, const Graph& g, NodeId i, NodeId j, HeuristicMode mode);

}  // namespace sublink
