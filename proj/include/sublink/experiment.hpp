// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sublink/dataset.hpp"
#include "sublink/eval.hpp"
#include "sublink/heuristics.hpp"
#include "sublink/mpnn.hpp"

namespace sublink {

struct GeneratorSpec {
  std::size_t n = 350;
  std::size_t m = 4;
  std::uint64_t seed = 1;
  bool operator==(const GeneratorSpec&) const = default;
};

/// Degree-proportional growth from an (m+1)-clique; each new node links to m
/// distinct existing nodes. Throws std::invalid_argument unless n > m >= 1.
Graph generate_ba_graph(std::size_t n, std::size_t m, std::uint64_t seed);

struct ExperimentConfig {
  /// Edge-list path; when empty the generator builds the graph.
  std::string dataset;
  GeneratorSpec generator;
  SplitFractions split;
  int hops = 2;
  std::size_t cap = kDefaultSubgraphCap;
  /// gcn, gin, or heuristic:<cn|aa|ra|pa|jac>.
  std::string model = "gcn";
  std::vector<Strategy> strategies{Strategy::Plus};
  Pooling pooling = Pooling::CenterHadamard;
  std::size_t layers = 2;
  std::size_t hidden = 32;
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  double lr = 1e-3;
  int max_label = kDefaultMaxLabel;
  std::size_t neg_ratio = 1;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::size_t hits_k = 20;
  /// CSV path; a summary is written next to it with a .summary suffix.
  std::string output;
  /// Required before the original strategy may run.
  bool allow_shift = false;
  bool probe = false;
  bool parallel_seeds = false;

  bool is_heuristic() const;
  Predictor predictor() const;
  LayerType layer_type() const;
  std::string dataset_name() const;
  /// Throws ConfigError on any constraint violation.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Line-oriented `key = value` text with `#` comments. Unknown keys,
/// malformed values and constraint violations throw ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config_file(const std::string& path);
std::string emit_config(const ExperimentConfig& config);

Graph load_dataset(const ExperimentConfig& config);

struct ExperimentResult {
  std::vector<MetricReport> reports;
  std::string csv;
  std::string summary;
};

/// Every (seed, strategy) pair: split, audit, train or score, evaluate.
/// Writes the CSV and summary when config.output is set.
ExperimentResult run_experiment(const ExperimentConfig& config);

std::string metrics_csv(std::span<const MetricReport> reports, std::size_t k);

struct AblationRow {
  std::size_t layers = 0;
  double auc_original = 0.0;
  double auc_att = 0.0;
  /// (auc_att - auc_original) / auc_original on the seed means.
  double rel_impr = 0.0;
  std::vector<double> per_seed_rel_impr;
};

struct AblationResult {
  std::vector<AblationRow> rows;
  std::vector<MetricReport> reports;
  std::string csv;
};

/// GIN with 1..3 layers, original against att. Writes the table to
/// config.output when set.
AblationResult preset_depth_ablation(const ExperimentConfig& config);

/// Labeled samples on random topologies, for gradient and invariance checks.
std::vector<EncodedSample> random_encoded_batch(Strategy strategy, std::size_t count, std::uint64_t seed,
                                                int max_label = kDefaultMaxLabel);

}  // namespace sublink
