// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sublink/graph.hpp"

namespace sublink {

enum class Phase { Train, Val, Test };

std::string_view to_string(Phase p);

struct SplitFractions {
  double train = 0.85;
  double val = 0.05;
  double test = 0.10;
  bool operator==(const SplitFractions&) const = default;
};

/// Edge split for one run. The union of val_pos and test_pos is the
/// unobserved edge set; observed_graph holds train_pos only (plus every node
/// and the source attributes).
struct Split {
  std::vector<Edge> train_pos, val_pos, test_pos;
  std::vector<Edge> train_neg, val_neg, test_neg;
  Graph observed_graph;

  const std::vector<Edge>& positives(Phase p) const;
  const std::vector<Edge>& negatives(Phase p) const;
  bool operator==(const Split&) const = default;
};

/// Seeded shuffle of the edges, cut into train/val/test by floor(train*|E|),
/// floor(val*|E|) and the remainder. Negatives are drawn per phase with
/// sample_negatives, `negatives_per_positive` per positive edge.
Split split_edges(const Graph& g, const SplitFractions& fractions, std::uint64_t seed,
                  std::size_t negatives_per_positive = 1);

/// Uniform non-edges of g, distinct within and across the three lists.
/// Throws Error when the request exceeds the number of non-edges.
std::array<std::vector<Edge>, 3> sample_negatives(const Graph& g, std::array<std::size_t, 3> counts,
                                                  std::uint64_t seed);

/// Throws Error if any val/test positive edge leaked into the observed graph
/// or any negative pair is an edge of `source`.
void audit_split(const Graph& source, const Split& split);

/// Writes train_pos.txt, val_pos.txt, test_pos.txt and neg/{train,val,test}.txt
/// as "u v" lines under `dir`.
void write_split(const Split& split, const std::string& dir);
/// Reads a split written by write_split; the observed graph is rebuilt over
/// the nodes and attributes of `source`.
Split read_split(const Graph& source, const std::string& dir);

/// Labeled training unit: an enclosing subgraph of the observed graph with
/// label y, focal-edge existence e, and phase c.
struct SubgraphSample {
  EnclosingSubgraph subgraph;
  int label = 0;
  int exists = 0;
  Phase phase = Phase::Train;
};

struct SampleSet {
  std::vector<SubgraphSample> train, val, test;

  std::vector<SubgraphSample>& phase(Phase p);
  const std::vector<SubgraphSample>& phase(Phase p) const;
};

/// Extracts one sample per positive and negative pair of every phase from the
/// observed graph; positives first, then negatives, in split order.
SampleSet build_samples(const Split& split, int hops, std::size_t cap, std::uint64_t seed,
                        std::size_t threads = 1);

}  // namespace sublink
