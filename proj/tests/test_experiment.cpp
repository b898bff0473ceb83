// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sublink/experiment.hpp"

namespace sublink {
namespace {

TEST(Config, DefaultsFromEmptyText) {
  const ExperimentConfig c = parse_config("# nothing but a comment\n\n");
  EXPECT_EQ(c, ExperimentConfig{});
  EXPECT_EQ(c.strategies, std::vector<Strategy>{Strategy::Plus});
  EXPECT_EQ(c.dataset_name(), "ba-n350-m4-s1");
}

TEST(Config, ParsesEveryKey) {
  const ExperimentConfig c = parse_config(
      "dataset = data/x.txt\nsplit = 0.7 0.1 0.2\nhops = 1\ncap = 50\nmodel = gin\n"
      "strategy = original att  # trailing comment\npooling = center-mlp\nlayers = 3\nhidden = 16\n"
      "epochs = 7\nbatch_size = 0\nlr = 0.01\nmax_label = 5\nneg_ratio = 2\nseeds = 4 9\nhits_k = 10\n"
      "output = out.csv\nallow_shift = true\nprobe = true\nparallel_seeds = true\n");
  EXPECT_EQ(c.dataset, "data/x.txt");
  EXPECT_EQ(c.dataset_name(), "x");
  EXPECT_DOUBLE_EQ(c.split.val, 0.1);
  EXPECT_EQ(c.layer_type(), LayerType::Gin);
  EXPECT_EQ(c.strategies, (std::vector<Strategy>{Strategy::Original, Strategy::Att}));
  EXPECT_EQ(c.pooling, Pooling::CenterMlp);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{4, 9}));
  EXPECT_EQ(c.batch_size, 0u);
  EXPECT_DOUBLE_EQ(c.lr, 0.01);
  EXPECT_TRUE(c.allow_shift && c.probe && c.parallel_seeds);
}

TEST(Config, EmitRoundTrips) {
  ExperimentConfig c;
  c.generator = {120, 3, 8};
  c.model = "heuristic:jac";
  c.strategies = {Strategy::Original, Strategy::Plus};
  c.allow_shift = true;
  c.lr = 0.1 + 0.2;
  c.seeds = {11, 12};
  EXPECT_EQ(parse_config(emit_config(c)), c);
  EXPECT_TRUE(c.is_heuristic());
  EXPECT_EQ(c.predictor(), Predictor::Jaccard);
}

TEST(Config, RejectsBadInput) {
  const char* bad[] = {
      "colour = red\n",                              // unknown key
      "hops\n",                                      // no '='
      "hops = two\n",                                // not a number
      "strategy = original\n",                       // shift without opt-in
      "strategy = plus plus\n",                      // duplicate
      "split = 0.5 0.5 0.5\n",                       // does not sum to 1
      "split = 0.9 0.0 0.1\n",                       // empty validation split
      "model = heuristic:cn\nstrategy = att\n",      // heuristics only take original/plus
      "model = heuristic:cn\nprobe = true\n",        // probe needs a model
      "model = transformer\n",                       // unknown model
      "generator = ba 4 4 1\n",                      // n must exceed m
      "allow_shift = maybe\n",                       // not a boolean
  };
  for (const char* text : bad) EXPECT_THROW(parse_config(text), ConfigError) << text;
  try {
    parse_config("hops = 2\n\ncolour = red\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Config, ShippedPresetsParse) {
  for (const char* name : {"gcn_shift.conf", "gin_depth.conf", "heuristic_pa.conf"})
    EXPECT_NO_THROW(load_config_file(std::string(SUBLINK_SOURCE_DIR) + "/configs/" + name)) << name;
}

TEST(Generator, SmallestGraphIsComplete) {
  const Graph g = generate_ba_graph(5, 4, 1);
  EXPECT_EQ(g.num_edges(), 10u);
  EXPECT_THROW(generate_ba_graph(3, 3, 1), std::invalid_argument);
  EXPECT_THROW(generate_ba_graph(3, 0, 1), std::invalid_argument);
}

TEST(Generator, EdgeCountAndDeterminism) {
  const Graph g = generate_ba_graph(200, 3, 5);
  EXPECT_EQ(g.num_edges(), 6u + 3u * (200u - 4u));
  EXPECT_EQ(g, generate_ba_graph(200, 3, 5));
  EXPECT_NE(g, generate_ba_graph(200, 3, 6));
  for (NodeId v = 0; v < 200; ++v) EXPECT_GE(g.degree(v), 3u);
}

TEST(Generator, HeavyTailedDegrees) {
  // Uniform attachment would keep the maximum degree near 3 log n.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Graph g = generate_ba_graph(500, 3, seed);
    std::size_t max_degree = 0;
    for (NodeId v = 0; v < 500; ++v) max_degree = std::max(max_degree, g.degree(v));
    EXPECT_GT(max_degree, 30u) << seed;
  }
}

ExperimentConfig heuristic_config() {
  ExperimentConfig c;
  c.generator = {150, 3, 2};
  c.model = "heuristic:ra";
  c.strategies = {Strategy::Original, Strategy::Plus};
  c.allow_shift = true;
  c.seeds = {1, 2, 3};
  return c;
}

TEST(Run, HeuristicReportsOneRowPerSeedAndStrategy) {
  const auto r = run_experiment(heuristic_config());
  ASSERT_EQ(r.reports.size(), 6u);
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_EQ(r.reports[k].strategy, k < 3 ? "original" : "plus");
    EXPECT_EQ(r.reports[k].seed, k % 3 + 1);
    EXPECT_GT(r.reports[k].auc, 0.5);
    EXPECT_EQ(r.reports[k].n_pos, r.reports[k].n_neg);
    EXPECT_LT(r.reports[k].probe_auc, 0.0);
  }
  // RA ignores the focal edge, so both modes agree exactly.
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(r.reports[k].auc, r.reports[k + 3].auc);
  const auto lines = std::count(r.csv.begin(), r.csv.end(), '\n');
  EXPECT_EQ(lines, 8);
  EXPECT_EQ(r.csv.rfind("# sublink-metrics v1\ndataset,model,strategy,seed,auc,hits@20,probe_auc\n", 0), 0u);
}

TEST(Run, CsvIsByteIdenticalAcrossRunsAndWrittenToDisk) {
  ExperimentConfig c;
  c.generator = {120, 3, 3};
  c.seeds = {1, 2};
  c.epochs = 3;
  c.hidden = 8;
  const auto dir = std::filesystem::temp_directory_path() / "sublink_run_test";
  std::filesystem::create_directories(dir);
  c.output = (dir / "m.csv").string();
  const auto a = run_experiment(c);
  c.parallel_seeds = true;
  const auto b = run_experiment(c);
  EXPECT_EQ(a.csv, b.csv);
  std::ifstream in(c.output);
  std::stringstream disk;
  disk << in.rdbuf();
  EXPECT_EQ(disk.str(), a.csv);
  EXPECT_TRUE(std::filesystem::exists(c.output + ".summary"));
  std::filesystem::remove_all(dir);
}

TEST(Ablation, ThreeRowsWithRelativeImprovement) {
  ExperimentConfig c;
  c.generator = {100, 3, 4};
  c.model = "gin";
  c.strategies = {Strategy::Att};
  c.seeds = {1, 2};
  c.epochs = 2;
  c.hidden = 8;
  const AblationResult r = preset_depth_ablation(c);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.reports.size(), 12u);
  std::istringstream lines(r.csv);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "# sublink-ablation v1");
  std::getline(lines, line);
  EXPECT_EQ(line, "layers,auc_orig,auc_att,rel_impr");
  for (std::size_t k = 0; k < 3; ++k) {
    const AblationRow& row = r.rows[k];
    EXPECT_EQ(row.layers, k + 1);
    EXPECT_DOUBLE_EQ(row.rel_impr, (row.auc_att - row.auc_original) / row.auc_original);
    ASSERT_EQ(row.per_seed_rel_impr.size(), 2u);
    ASSERT_TRUE(std::getline(lines, line));
    double l = 0, o = 0, a = 0, rel = 0;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &l, &o, &a, &rel), 4);
    EXPECT_EQ(l, static_cast<double>(k + 1));
    // Recompute from the printed, rounded values.
    EXPECT_NEAR(rel, (a - o) / o, 2e-6);
  }
  c.model = "gcn";
  EXPECT_THROW(preset_depth_ablation(c), ConfigError);
}

// Row L=2 of the depth ablation on the default generated graph, checked per
// seed. Takes a few minutes on one core.
TEST(Ablation, DepthTwoAttentionNeverHurtsOnFixture) {
  ExperimentConfig c;
  c.model = "gin";
  c.layers = 2;
  c.strategies = {Strategy::Original, Strategy::Att};
  c.allow_shift = true;
  const auto reports = run_experiment(c).reports;
  ASSERT_EQ(reports.size(), 10u);
  for (std::size_t k = 0; k < 5; ++k) {
    ASSERT_EQ(reports[k].seed, reports[k + 5].seed);
    const double rel = (reports[k + 5].auc - reports[k].auc) / reports[k].auc;
    EXPECT_GE(rel, 0.0) << "seed " << reports[k].seed;
  }
}

TEST(Run, RandomEncodedBatchAlternatesLabels) {
  const auto batch = random_encoded_batch(Strategy::Concat, 9, 4);
  ASSERT_EQ(batch.size(), 9u);
  for (std::size_t k = 0; k < 9; ++k) {
    EXPECT_EQ(batch[k].label, static_cast<int>(k % 2));
    EXPECT_EQ(batch[k].branches.size(), 2u);
  }
}

}  // namespace
}  // namespace sublink
