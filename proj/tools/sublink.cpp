// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "sublink/allocator.hpp"
#include "sublink/experiment.hpp"
#include "sublink/wl_probe.hpp"

namespace {

using namespace sublink;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;
constexpr int kCheckFailed = 3;

const char* yes_no(bool b) { return b ? "true" : "false"; }

int cmd_run(const std::string& config_path, const std::string& output) {
  ExperimentConfig config = load_config_file(config_path);
  if (!output.empty()) config.output = output;
  const ExperimentResult r = run_experiment(config);
  if (config.output.empty()) std::cout << r.csv;
  std::cout << r.summary;
  return kOk;
}

int cmd_ablate(const std::string& config_path, const std::string& output) {
  ExperimentConfig config = load_config_file(config_path);
  if (!output.empty()) config.output = output;
  std::cout << preset_depth_ablation(config).csv;
  return kOk;
}

int cmd_probe(const std::string& which, std::uint64_t seed) {
  if (which == "fig1") {
    const Fig1Report r = fig1_demo(seed);
    std::cout << "shift_detected_original " << yes_no(r.shift_detected_original) << '\n'
              << "shift_after_plus " << yes_no(r.shift_after_plus) << '\n'
              << "shift_after_minus " << yes_no(r.shift_after_minus) << '\n'
              << "original_embedding_diff " << r.original_embedding_diff << '\n'
              << "differing_nodes_per_round";
    for (auto d : r.differing_nodes) std::cout << ' ' << d;
    std::cout << '\n';
    const bool ok = r.shift_detected_original && !r.shift_after_plus && !r.shift_after_minus;
    return ok ? kOk : kCheckFailed;
  }
  const Fig3Report r = fig3_demo(seed);
  std::cout << "original_distinguishes " << yes_no(r.original_distinguishes) << '\n'
            << "plus_distinguishes " << yes_no(r.plus_distinguishes) << '\n';
  return !r.original_distinguishes && r.plus_distinguishes ? kOk : kCheckFailed;
}

int cmd_heuristic(const std::string& dataset, const std::string& predictor, const std::string& mode,
                  std::uint64_t seed, const std::string& output) {
  ExperimentConfig config;
  config.dataset = dataset;
  const Graph g = load_dataset(config);
  const Predictor p = parse_predictor(predictor);
  const HeuristicMode m = parse_heuristic_mode(mode);
  const Split split = split_edges(g, config.split, seed);
  audit_split(g, split);
  std::ofstream file;
  if (!output.empty()) {
    file.open(output);
    if (!file) throw Error("cannot write '" + output + "'");
  }
  std::ostream& out = output.empty() ? std::cout : file;
  out << "i,j,phase,label,score\n";
  char buf[64];
  for (Phase phase : {Phase::Train, Phase::Val, Phase::Test})
    for (int label : {1, 0})
      for (const Edge& e : label ? split.positives(phase) : split.negatives(phase)) {
        std::snprintf(buf, sizeof(buf), "%.12g", heuristic_score(p, split.observed_graph, e.u, e.v, m));
        out << e.u << ',' << e.v << ',' << to_string(phase) << ',' << label << ',' << buf << '\n';
      }
  return kOk;
}

int cmd_gradcheck(const std::string& layer, const std::string& pooling, const std::string& strategy,
                  std::size_t coords, std::uint64_t seed, double tolerance) {
  ModelSpec spec;
  spec.layer = parse_layer_type(layer);
  spec.pooling = parse_pooling(pooling);
  spec.strategy = parse_strategy(strategy);
  spec.hidden = 8;
  spec.classifier_hidden = 8;
  const ModelParams params = jitter_biases(ModelParams::init(spec, seed), seed);
  const auto batch = random_encoded_batch(spec.strategy, 6, seed);
  const GradCheckReport r = gradient_check(params, batch, coords, seed);
  for (const TensorCheck& t : r.tensors)
    std::cout << t.name << " coords " << t.coordinates << " skipped " << t.skipped_kinks << " max_rel_error " << t.max_rel_error << '\n';
  std::cout << "max_rel_error " << r.max_rel_error << '\n';
  return r.max_rel_error < tolerance ? kOk : kCheckFailed;
}

int cmd_invariance(std::size_t count, std::uint64_t seed) {
  const auto topologies = random_topologies(count, seed);
  bool ok = true;
  for (Strategy s : {Strategy::Plus, Strategy::Minus, Strategy::Mean, Strategy::Att, Strategy::Concat}) {
    for (LayerType layer : {LayerType::Gcn, LayerType::Gin}) {
      ModelSpec spec;
      spec.layer = layer;
      spec.strategy = s;
      const InvarianceReport r = check_edge_invariance(prediction_encoder(ModelParams::init(spec, seed)), topologies);
      std::cout << to_string(s) << ' ' << to_string(layer) << " topologies " << r.topologies << " bitwise_equal "
                << yes_no(r.bitwise_equal) << " max_abs_diff " << r.max_abs_diff << '\n';
      ok = ok && r.holds();
    }
  }
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  keep_heap_resident();
  CLI::App app{"Subgraph link prediction with focal-edge augmentation"};
  app.require_subcommand(1);

  std::string config_path, output;
  auto* run = app.add_subcommand("run", "Train and evaluate every (seed, strategy) in a config");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", output, "CSV path (overrides the config)");

  auto* ablate = app.add_subcommand("ablate-depth", "GIN depth ablation, original against att");
  ablate->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  ablate->add_option("-o,--output", output, "CSV path (overrides the config)");

  std::string which;
  std::uint64_t seed = 42;
  auto* probe = app.add_subcommand("probe", "Run a 1-WL construction");
  probe->add_option("which", which, "fig1 or fig3")->required()->check(CLI::IsMember({"fig1", "fig3"}));
  probe->add_option("--seed", seed, "Weight seed");

  std::string dataset, predictor = "cn", mode = "original";
  std::uint64_t split_seed = 1;
  auto* heur = app.add_subcommand("heuristic", "Score every split pair with a heuristic");
  heur->add_option("dataset", dataset, "Edge list; omit for the bundled generator graph");
  heur->add_option("--predictor", predictor, "cn|aa|ra|pa|jac");
  heur->add_option("--mode", mode, "original|plus");
  heur->add_option("--seed", split_seed, "Split seed");
  heur->add_option("-o,--output", output, "CSV path (default stdout)");

  std::string layer = "gcn", pooling = "center-hadamard", strategy = "att";
  std::size_t coords = 30;
  double tolerance = 1e-4;
  std::uint64_t check_seed = 7;
  auto* grad = app.add_subcommand("gradcheck", "Compare analytic and finite-difference gradients");
  grad->add_option("--layer", layer, "gcn|gin");
  grad->add_option("--pooling", pooling, "center-hadamard|center-mlp|mean");
  grad->add_option("--strategy", strategy, "Fusion strategy");
  grad->add_option("--coords", coords, "Coordinates per tensor");
  grad->add_option("--tolerance", tolerance, "Maximum relative error");
  grad->add_option("--seed", check_seed, "Seed");

  std::size_t count = 100;
  auto* inv = app.add_subcommand("invariance", "Check bitwise edge invariance on random topologies");
  inv->add_option("--count", count, "Number of topologies");
  inv->add_option("--seed", check_seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(config_path, output);
    if (*ablate) return cmd_ablate(config_path, output);
    if (*probe) return cmd_probe(which, seed);
    if (*heur) return cmd_heuristic(dataset, predictor, mode, split_seed, output);
    if (*grad) return cmd_gradcheck(layer, pooling, strategy, coords, check_seed, tolerance);
    if (*inv) return cmd_invariance(count, check_seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}
