// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#include "sublink/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "sublink/common.hpp"

namespace sublink {
namespace {

std::uint64_t pair_key(const Edge& e) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.u)) << 32) | static_cast<std::uint32_t>(e.v);
}

std::vector<Edge> read_pairs(const std::filesystem::path& path, const Graph& source) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open split file '" + path.string() + "'");
  std::vector<Edge> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    long long u = 0, v = 0;
    if (!(fields >> u)) continue;
    if (!(fields >> v)) throw ParseError("expected two node ids", line_no);
    if (u == v || !source.contains(static_cast<NodeId>(u)) || !source.contains(static_cast<NodeId>(v)))
      throw ParseError("invalid node pair in '" + path.string() + "'", line_no);
    out.push_back(Edge::normalized(static_cast<NodeId>(u), static_cast<NodeId>(v)));
  }
  return out;
}

void write_pairs(const std::filesystem::path& path, const std::vector<Edge>& pairs) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write split file '" + path.string() + "'");
  for (const Edge& e : pairs) out << e.u << ' ' << e.v << '\n';
}

Graph observed_from(const Graph& source, const std::vector<Edge>& train_pos) {
  Graph g = Graph::from_edges(source.num_nodes(), train_pos);
  return source.has_attributes() ? g.with_attributes(source.attributes()) : g;
}

}  // namespace

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Train: return "train";
    case Phase::Val: return "val";
    case Phase::Test: return "test";
  }
  return "?";
}

const std::vector<Edge>& Split::positives(Phase p) const {
  return p == Phase::Train ? train_pos : p == Phase::Val ? val_pos : test_pos;
}

const std::vector<Edge>& Split::negatives(Phase p) const {
  return p == Phase::Train ? train_neg : p == Phase::Val ? val_neg : test_neg;
}

std::vector<SubgraphSample>& SampleSet::phase(Phase p) {
  return p == Phase::Train ? train : p == Phase::Val ? val : test;
}

const std::vector<SubgraphSample>& SampleSet::phase(Phase p) const {
  return p == Phase::Train ? train : p == Phase::Val ? val : test;
}

Split split_edges(const Graph& g, const SplitFractions& f, std::uint64_t seed, std::size_t negatives_per_positive) {
  if (!(f.train > 0 && f.val > 0 && f.test > 0)) throw std::invalid_argument("split fractions must be positive");
  if (std::abs(f.train + f.val + f.test - 1.0) > 1e-9) throw std::invalid_argument("split fractions must sum to 1");
  if (g.num_edges() == 0) throw Error("cannot split a graph without edges");

  std::vector<Edge> edges = g.edges();
  Rng rng(mix_seed(seed, 0));
  for (std::size_t k = edges.size(); k > 1; --k) std::swap(edges[k - 1], edges[uniform_index(rng, k)]);

  const auto m = static_cast<double>(edges.size());
  // The epsilon keeps exact products such as 0.29 * 100 from flooring to 28.
  const auto n_train = static_cast<std::size_t>(std::floor(f.train * m + 1e-9));
  const auto n_val = static_cast<std::size_t>(std::floor(f.val * m + 1e-9));
  Split s;
  s.train_pos.assign(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.val_pos.assign(edges.begin() + static_cast<std::ptrdiff_t>(n_train),
                   edges.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  s.test_pos.assign(edges.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), edges.end());

  auto negs = sample_negatives(g,
                               {s.train_pos.size() * negatives_per_positive, s.val_pos.size() * negatives_per_positive,
                                s.test_pos.size() * negatives_per_positive},
                               mix_seed(seed, 1));
  s.train_neg = std::move(negs[0]);
  s.val_neg = std::move(negs[1]);
  s.test_neg = std::move(negs[2]);
  s.observed_graph = observed_from(g, s.train_pos);
  return s;
}

std::array<std::vector<Edge>, 3> sample_negatives(const Graph& g, std::array<std::size_t, 3> counts,
                                                  std::uint64_t seed) {
  const std::size_t n = g.num_nodes();
  const std::size_t total = counts[0] + counts[1] + counts[2];
  const std::size_t pairs = n * (n - (n > 0 ? 1 : 0)) / 2;
  const std::size_t available = pairs - g.num_edges();
  if (total > available)
    throw Error("cannot draw " + std::to_string(total) + " negatives: only " + std::to_string(available) +
                " non-edges exist");

  Rng rng(seed);
  std::vector<Edge> drawn;
  drawn.reserve(total);
  if (2 * total > available) {
    // Dense request: enumerate every non-edge and take a uniform prefix.
    std::vector<Edge> pool;
    pool.reserve(available);
    for (NodeId u = 0; static_cast<std::size_t>(u) < n; ++u)
      for (NodeId v = u + 1; static_cast<std::size_t>(v) < n; ++v)
        if (!g.has_edge(u, v)) pool.push_back({u, v});
    for (std::size_t k = 0; k < total; ++k) std::swap(pool[k], pool[k + uniform_index(rng, pool.size() - k)]);
    drawn.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(total));
  } else {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(2 * total);
    while (drawn.size() < total) {
      const auto u = static_cast<NodeId>(uniform_index(rng, n));
      const auto v = static_cast<NodeId>(uniform_index(rng, n));
      if (u == v || g.has_edge(u, v)) continue;
      const Edge e = Edge::normalized(u, v);
      if (seen.insert(pair_key(e)).second) drawn.push_back(e);
    }
  }

  std::array<std::vector<Edge>, 3> out;
  auto it = drawn.begin();
  for (std::size_t p = 0; p < 3; ++p) {
    out[p].assign(it, it + static_cast<std::ptrdiff_t>(counts[p]));
    it += static_cast<std::ptrdiff_t>(counts[p]);
  }
  return out;
}

void audit_split(const Graph& source, const Split& split) {
  for (const auto* held_out : {&split.val_pos, &split.test_pos})
    for (const Edge& e : *held_out)
      if (split.observed_graph.has_edge(e.u, e.v))
        throw Error("leakage: held-out edge " + std::to_string(e.u) + "-" + std::to_string(e.v) +
                    " is present in the observed graph");
  if (split.observed_graph.num_edges() != split.train_pos.size())
    throw Error("leakage: observed graph does not match the training edges");
  for (const auto* negs : {&split.train_neg, &split.val_neg, &split.test_neg})
    for (const Edge& e : *negs)
      if (source.has_edge(e.u, e.v)) throw Error("negative pair is an edge of the source graph");
}

void write_split(const Split& split, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  fs::create_directories(root / "neg");
  write_pairs(root / "train_pos.txt", split.train_pos);
  write_pairs(root / "val_pos.txt", split.val_pos);
  write_pairs(root / "test_pos.txt", split.test_pos);
  write_pairs(root / "neg" / "train.txt", split.train_neg);
  write_pairs(root / "neg" / "val.txt", split.val_neg);
  write_pairs(root / "neg" / "test.txt", split.test_neg);
}

Split read_split(const Graph& source, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  Split s;
  s.train_pos = read_pairs(root / "train_pos.txt", source);
  s.val_pos = read_pairs(root / "val_pos.txt", source);
  s.test_pos = read_pairs(root / "test_pos.txt", source);
  s.train_neg = read_pairs(root / "neg" / "train.txt", source);
  s.val_neg = read_pairs(root / "neg" / "val.txt", source);
  s.test_neg = read_pairs(root / "neg" / "test.txt", source);
  s.observed_graph = observed_from(source, s.train_pos);
  return s;
}

SampleSet build_samples(const Split& split, int hops, std::size_t cap, std::uint64_t seed, std::size_t threads) {
  SampleSet out;
  for (Phase phase : {Phase::Train, Phase::Val, Phase::Test}) {
    const auto& pos = split.positives(phase);
    const auto& neg = split.negatives(phase);
    auto& samples = out.phase(phase);
    samples.resize(pos.size() + neg.size());
    parallel_for(samples.size(), threads, [&](std::size_t k) {
      const bool positive = k < pos.size();
      const Edge pair = positive ? pos[k] : neg[k - pos.size()];
      SubgraphSample& s = samples[k];
      s.subgraph = extract_subgraph(split.observed_graph, pair.u, pair.v, hops, cap, seed);
      s.label = positive ? 1 : 0;
      s.exists = split.observed_graph.has_edge(pair.u, pair.v) ? 1 : 0;
      s.phase = phase;
    });
  }
  return out;
}

}  // namespace sublink
