// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#include "sublink/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

namespace sublink {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& token) {
  T v{};
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw ConfigError("'" + key + "': malformed value '" + token + "'");
  return v;
}

template <class T>
T single_number(const std::string& key, const std::string& value) {
  const auto w = words(value);
  if (w.size() != 1) throw ConfigError("'" + key + "' expects one value");
  return parse_number<T>(key, w[0]);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("'" + key + "': expected true or false, got '" + value + "'");
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

std::string fixed(double v, int digits = 6) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

bool has_strategy(const ExperimentConfig& c, Strategy s) {
  return std::find(c.strategies.begin(), c.strategies.end(), s) != c.strategies.end();
}

struct SeedOutput {
  std::vector<MetricReport> reports;
};

MetricReport evaluate_scores(const ExperimentConfig& config, std::span<const double> pos,
                             std::span<const double> neg) {
  MetricReport r;
  r.dataset = config.dataset_name();
  r.model = config.model;
  r.k = config.hits_k;
  r.n_pos = pos.size();
  r.n_neg = neg.size();
  r.auc = auc(pos, neg);
  r.hits_at_k = neg.size() >= config.hits_k ? hits_at_k(pos, neg, config.hits_k) : std::nan("");
  return r;
}

SeedOutput run_seed(const ExperimentConfig& config, const Graph& graph, std::uint64_t seed, std::size_t threads) {
  const Split split = split_edges(graph, config.split, seed, config.neg_ratio);
  audit_split(graph, split);
  SeedOutput out;

  if (config.is_heuristic()) {
    const Predictor p = config.predictor();
    for (Strategy s : config.strategies) {
      const HeuristicMode mode = s == Strategy::Plus ? HeuristicMode::EdgePlus : HeuristicMode::Original;
      std::vector<double> pos, neg;
      for (const Edge& e : split.test_pos) pos.push_back(heuristic_score(p, split.observed_graph, e.u, e.v, mode));
      for (const Edge& e : split.test_neg) neg.push_back(heuristic_score(p, split.observed_graph, e.u, e.v, mode));
      MetricReport r = evaluate_scores(config, pos, neg);
      r.strategy = std::string(to_string(s));
      r.seed = seed;
      out.reports.push_back(std::move(r));
    }
    return out;
  }

  const SampleSet samples = build_samples(split, config.hops, config.cap, seed, threads);
  const Graph& observed = split.observed_graph;
  for (Strategy s : config.strategies) {
    ModelSpec spec;
    spec.layer = config.layer_type();
    spec.pooling = config.pooling;
    spec.strategy = s;
    spec.hidden = config.hidden;
    spec.layers = config.layers;
    spec.classifier_hidden = config.hidden;
    spec.input_dim = static_cast<std::size_t>(config.max_label) + 1 + observed.attr_dim();

    const auto train_set = encode_samples(samples.train, s, observed, config.max_label, threads);
    const auto val_set = encode_samples(samples.val, s, observed, config.max_label, threads);
    const auto test_set = encode_samples(samples.test, s, observed, config.max_label, threads);

    TrainConfig tc;
    tc.epochs = config.epochs;
    tc.batch_size = config.batch_size;
    tc.adam.lr = config.lr;
    tc.seed = seed;
    tc.threads = threads;
    const TrainResult trained = train(spec, tc, train_set, val_set);

    const auto scores = score_samples(trained.params, test_set, threads);
    std::vector<double> pos, neg;
    for (std::size_t k = 0; k < test_set.size(); ++k) (test_set[k].label ? pos : neg).push_back(scores[k]);
    MetricReport r = evaluate_scores(config, pos, neg);
    r.strategy = std::string(to_string(s));
    r.seed = seed;

    if (config.probe) {
      std::vector<Embedding> h_train, h_test;
      for (const EncodedSample& e : train_set)
        if (e.label) h_train.push_back(predict(trained.params, e).embedding);
      for (const EncodedSample& e : test_set)
        if (e.label) h_test.push_back(predict(trained.params, e).embedding);
      r.probe_auc = distribution_gap_probe(h_train, h_test, seed);
    }
    out.reports.push_back(std::move(r));
  }
  return out;
}

std::vector<MetricReport> run_all_seeds(const ExperimentConfig& config, const Graph& graph) {
  const std::size_t threads = default_thread_count();
  std::vector<SeedOutput> per_seed(config.seeds.size());
  if (config.parallel_seeds) {
    parallel_for(config.seeds.size(), threads,
                 [&](std::size_t k) { per_seed[k] = run_seed(config, graph, config.seeds[k], 1); });
  } else {
    for (std::size_t k = 0; k < config.seeds.size(); ++k)
      per_seed[k] = run_seed(config, graph, config.seeds[k], threads);
  }
  std::vector<MetricReport> reports;
  for (Strategy s : config.strategies)
    for (const SeedOutput& o : per_seed)
      for (const MetricReport& r : o.reports)
        if (r.strategy == to_string(s)) reports.push_back(r);
  return reports;
}

std::string summarize(const ExperimentConfig& config, std::span<const MetricReport> reports) {
  std::ostringstream out;
  out << "dataset " << config.dataset_name() << ", model " << config.model << ", " << config.seeds.size()
      << " seed(s)\n";
  std::map<std::string, std::vector<double>> aucs;
  for (const MetricReport& r : reports) aucs[r.strategy].push_back(r.auc);
  const std::string baseline(to_string(config.strategies.front()));
  for (Strategy s : config.strategies) {
    const auto& v = aucs[std::string(to_string(s))];
    std::vector<double> hits;
    for (const MetricReport& r : reports)
      if (r.strategy == to_string(s)) hits.push_back(r.hits_at_k);
    out << "  " << to_string(s) << ": auc " << fixed(100 * mean(v), 2) << " +- " << fixed(100 * stddev(v), 2)
        << ", hits@" << config.hits_k << " " << fixed(100 * mean(hits), 2) << " +- " << fixed(100 * stddev(hits), 2);
    if (std::string(to_string(s)) != baseline && v.size() >= 2)
      out << ", welch p vs " << baseline << " = " << fixed(welch_t_test(v, aucs[baseline]).p_value, 4);
    out << '\n';
  }
  return out.str();
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
  if (!f) throw Error("failed writing '" + path + "'");
}

}  // namespace

Graph generate_ba_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || n <= m) throw std::invalid_argument("generate_ba_graph needs n > m >= 1");
  Rng rng(mix_seed(seed, 0x6261));
  std::vector<Edge> edges;
  std::vector<NodeId> endpoints;  // each node repeated once per incident edge
  for (std::size_t a = 0; a <= m; ++a)
    for (std::size_t b = a + 1; b <= m; ++b) {
      edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b)});
      endpoints.push_back(static_cast<NodeId>(a));
      endpoints.push_back(static_cast<NodeId>(b));
    }
  if (m == 1) endpoints = {0, 1};
  for (std::size_t v = m + 1; v < n; ++v) {
    std::vector<NodeId> targets;
    while (targets.size() < m) {
      const NodeId t = endpoints[uniform_index(rng, endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      edges.push_back(Edge::normalized(t, static_cast<NodeId>(v)));
      endpoints.push_back(t);
      endpoints.push_back(static_cast<NodeId>(v));
    }
  }
  return Graph::from_edges(n, edges);
}

bool ExperimentConfig::is_heuristic() const { return model.rfind("heuristic:", 0) == 0; }

Predictor ExperimentConfig::predictor() const {
  if (!is_heuristic()) throw ConfigError("model '" + model + "' is not a heuristic");
  return parse_predictor(std::string_view(model).substr(10));
}

LayerType ExperimentConfig::layer_type() const { return parse_layer_type(model); }

std::string ExperimentConfig::dataset_name() const {
  if (!dataset.empty()) return std::filesystem::path(dataset).stem().string();
  return "ba-n" + std::to_string(generator.n) + "-m" + std::to_string(generator.m) + "-s" +
         std::to_string(generator.seed);
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  try {
    if (is_heuristic())
      (void)predictor();
    else
      (void)layer_type();
  } catch (const std::invalid_argument& e) {
    fail(std::string("model: ") + e.what());
  }
  const double total = split.train + split.val + split.test;
  if (split.train <= 0 || split.val <= 0 || split.test <= 0 || std::abs(total - 1.0) > 1e-9)
    fail("split fractions must be positive and sum to 1");
  if (hops < 1) fail("hops must be at least 1");
  if (cap < 2) fail("cap must be at least 2");
  if (strategies.empty()) fail("at least one strategy is required");
  for (std::size_t a = 0; a < strategies.size(); ++a)
    for (std::size_t b = a + 1; b < strategies.size(); ++b)
      if (strategies[a] == strategies[b]) fail("duplicate strategy");
  if (has_strategy(*this, Strategy::Original) && !allow_shift)
    fail("strategy 'original' is not edge invariant; set allow_shift = true to run it");
  if (is_heuristic())
    for (Strategy s : strategies)
      if (s != Strategy::Original && s != Strategy::Plus) fail("heuristics support only original and plus");
  if (layers < 1 || hidden < 1) fail("layers and hidden must be positive");
  if (!(lr > 0) || !std::isfinite(lr)) fail("lr must be positive");
  if (max_label < 1) fail("max_label must be at least 1");
  if (neg_ratio < 1) fail("neg_ratio must be at least 1");
  if (seeds.empty()) fail("at least one seed is required");
  if (hits_k < 1) fail("hits_k must be positive");
  if (dataset.empty() && (generator.m < 1 || generator.n <= generator.m)) fail("generator needs n > m >= 1");
  if (probe && is_heuristic()) fail("the probe needs a trained model");
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto w = words(value);
    try {
      if (key == "dataset") {
        c.dataset = value;
      } else if (key == "generator") {
        if (w.size() != 4 || w[0] != "ba") throw ConfigError("'generator' expects: ba <n> <m> <seed>");
        c.generator = {parse_number<std::size_t>(key, w[1]), parse_number<std::size_t>(key, w[2]),
                       parse_number<std::uint64_t>(key, w[3])};
      } else if (key == "split") {
        if (w.size() != 3) throw ConfigError("'split' expects three fractions");
        c.split = {parse_number<double>(key, w[0]), parse_number<double>(key, w[1]), parse_number<double>(key, w[2])};
      } else if (key == "hops") {
        c.hops = single_number<int>(key, value);
      } else if (key == "cap") {
        c.cap = single_number<std::size_t>(key, value);
      } else if (key == "model") {
        c.model = value;
      } else if (key == "strategy") {
        if (w.empty()) throw ConfigError("'strategy' needs at least one value");
        c.strategies.clear();
        for (const auto& s : w) c.strategies.push_back(parse_strategy(s));
      } else if (key == "pooling") {
        c.pooling = parse_pooling(value);
      } else if (key == "layers") {
        c.layers = single_number<std::size_t>(key, value);
      } else if (key == "hidden") {
        c.hidden = single_number<std::size_t>(key, value);
      } else if (key == "epochs") {
        c.epochs = single_number<std::size_t>(key, value);
      } else if (key == "batch_size") {
        c.batch_size = single_number<std::size_t>(key, value);
      } else if (key == "lr") {
        c.lr = single_number<double>(key, value);
      } else if (key == "max_label") {
        c.max_label = single_number<int>(key, value);
      } else if (key == "neg_ratio") {
        c.neg_ratio = single_number<std::size_t>(key, value);
      } else if (key == "seeds") {
        if (w.empty()) throw ConfigError("'seeds' needs at least one value");
        c.seeds.clear();
        for (const auto& s : w) c.seeds.push_back(parse_number<std::uint64_t>(key, s));
      } else if (key == "hits_k") {
        c.hits_k = single_number<std::size_t>(key, value);
      } else if (key == "output") {
        c.output = value;
      } else if (key == "allow_shift") {
        c.allow_shift = parse_bool(key, value);
      } else if (key == "probe") {
        c.probe = parse_bool(key, value);
      } else if (key == "parallel_seeds") {
        c.parallel_seeds = parse_bool(key, value);
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream text;
  text << f.rdbuf();
  return parse_config(text.str());
}

std::string emit_config(const ExperimentConfig& c) {
  std::ostringstream out;
  auto join_strategies = [&] {
    std::string s;
    for (Strategy x : c.strategies) s += (s.empty() ? "" : " ") + std::string(to_string(x));
    return s;
  };
  if (!c.dataset.empty()) out << "dataset = " << c.dataset << '\n';
  out << "generator = ba " << c.generator.n << ' ' << c.generator.m << ' ' << c.generator.seed << '\n'
      << "split = " << format_double(c.split.train) << ' ' << format_double(c.split.val) << ' '
      << format_double(c.split.test) << '\n'
      << "hops = " << c.hops << '\n'
      << "cap = " << c.cap << '\n'
      << "model = " << c.model << '\n'
      << "strategy = " << join_strategies() << '\n'
      << "pooling = " << to_string(c.pooling) << '\n'
      << "layers = " << c.layers << '\n'
      << "hidden = " << c.hidden << '\n'
      << "epochs = " << c.epochs << '\n'
      << "batch_size = " << c.batch_size << '\n'
      << "lr = " << format_double(c.lr) << '\n'
      << "max_label = " << c.max_label << '\n'
      << "neg_ratio = " << c.neg_ratio << '\n'
      << "seeds =";
  for (auto s : c.seeds) out << ' ' << s;
  out << "\nhits_k = " << c.hits_k << '\n';
  if (!c.output.empty()) out << "output = " << c.output << '\n';
  out << "allow_shift = " << (c.allow_shift ? "true" : "false") << '\n'
      << "probe = " << (c.probe ? "true" : "false") << '\n'
      << "parallel_seeds = " << (c.parallel_seeds ? "true" : "false") << '\n';
  return out.str();
}

Graph load_dataset(const ExperimentConfig& config) {
  if (config.dataset.empty()) return generate_ba_graph(config.generator.n, config.generator.m, config.generator.seed);
  return load_edge_list_file(config.dataset);
}

std::string metrics_csv(std::span<const MetricReport> reports, std::size_t k) {
  std::ostringstream out;
  out << "# sublink-metrics v1\n"
      << "dataset,model,strategy,seed,auc,hits@" << k << ",probe_auc\n";
  for (const MetricReport& r : reports)
    out << r.dataset << ',' << r.model << ',' << r.strategy << ',' << r.seed << ',' << fixed(r.auc) << ','
        << fixed(r.hits_at_k) << ',' << (r.probe_auc < 0 ? "" : fixed(r.probe_auc)) << '\n';
  return out.str();
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Graph graph = load_dataset(config);
  ExperimentResult result;
  result.reports = run_all_seeds(config, graph);
  result.csv = metrics_csv(result.reports, config.hits_k);
  result.summary = summarize(config, result.reports);
  if (!config.output.empty()) {
    write_text(config.output, result.csv);
    write_text(config.output + ".summary", result.summary);
  }
  return result;
}

AblationResult preset_depth_ablation(const ExperimentConfig& config) {
  if (config.layer_type() != LayerType::Gin) throw ConfigError("the depth ablation needs model = gin");
  const Graph graph = load_dataset(config);
  AblationResult result;
  std::ostringstream csv;
  csv << "# sublink-ablation v1\n"
      << "layers,auc_orig,auc_att,rel_impr\n";
  for (std::size_t layers = 1; layers <= 3; ++layers) {
    ExperimentConfig c = config;
    c.layers = layers;
    c.strategies = {Strategy::Original, Strategy::Att};
    c.allow_shift = true;
    c.probe = false;
    c.output.clear();
    c.validate();
    const auto reports = run_all_seeds(c, graph);
    AblationRow row;
    row.layers = layers;
    std::vector<double> orig, att;
    for (const MetricReport& r : reports) (r.strategy == "original" ? orig : att).push_back(r.auc);
    row.auc_original = mean(orig);
    row.auc_att = mean(att);
    row.rel_impr = (row.auc_att - row.auc_original) / row.auc_original;
    for (std::size_t k = 0; k < orig.size(); ++k) row.per_seed_rel_impr.push_back((att[k] - orig[k]) / orig[k]);
    csv << layers << ',' << fixed(row.auc_original) << ',' << fixed(row.auc_att) << ',' << fixed(row.rel_impr)
        << '\n';
    result.rows.push_back(std::move(row));
    result.reports.insert(result.reports.end(), reports.begin(), reports.end());
  }
  result.csv = csv.str();
  if (!config.output.empty()) write_text(config.output, result.csv);
  return result;
}

std::vector<EncodedSample> random_encoded_batch(Strategy strategy, std::size_t count, std::uint64_t seed,
                                                int max_label) {
  const auto topologies = random_topologies(count, seed);
  std::vector<EncodedSample> batch;
  for (std::size_t k = 0; k < topologies.size(); ++k)
    batch.push_back(encode_sample(topologies[k], static_cast<int>(k % 2), strategy, Matrix(), max_label));
  return batch;
}

}  // namespace sublink
