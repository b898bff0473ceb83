// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sublink/fakeedge.hpp"

namespace sublink {

/// Probability that a random positive outranks a random negative, ties
/// counted as one half. Throws std::invalid_argument if either side is empty.
double auc(std::span<const double> pos, std::span<const double> neg);

/// Fraction of positives scoring strictly above the k-th largest negative.
/// Throws std::invalid_argument if k is 0 or exceeds the negative count.
double hits_at_k(std::span<const double> pos, std::span<const double> neg, std::size_t k);

struct ProbeOptions {
  std::size_t hidden = 32;
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  double train_fraction = 0.8;
};

/// Trains a small MLP to tell the two embedding sets apart and returns its
/// AUC on held-out rows. Features are standardized with training-split
/// statistics; the split is stratified by origin. Returns 0.5 when every
/// embedding is identical.
double distribution_gap_probe(std::span<const Embedding> train_pos, std::span<const Embedding> test_pos,
                              std::uint64_t seed, const ProbeOptions& opts = {});

struct WelchResult {
  double t = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

/// Two-sided Welch t-test. Needs at least two values per side.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> v);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double stddev(std::span<const double> v);

struct MetricReport {
  std::string dataset;
  std::string model;
  std::string strategy;
  std::uint64_t seed = 0;
  double auc = 0.0;
  double hits_at_k = 0.0;
  std::size_t k = 20;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  /// Negative when the probe was not run.
  double probe_auc = -1.0;
};

}  // namespace sublink
