// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#include "sublink/mpnn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <random>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sublink/eval.hpp"

namespace sublink {
namespace {

constexpr std::size_t kReduceChunk = 16;

bool finite_all(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// ---------------------------------------------------------------------------
// Encoder

struct LayerTrace {
  std::vector<NodeId> rows;  // output rows this layer computed
  Matrix agg;                // aggregated input (n x in)
  Matrix pre;                // first affine output (n x hidden)
  Matrix mid;                // GIN: ReLU(pre)
  Matrix pre2;               // GIN: second affine output
  Matrix out;                // layer output (n x hidden)
};

struct BranchTrace {
  std::vector<LayerTrace> layers;
  Matrix z;
};

std::vector<NodeId> all_rows(std::size_t n) {
  std::vector<NodeId> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

/// Rows each layer must produce. Center pooling reads only the focal rows of
/// the last layer, and each layer needs its own rows plus their neighbors from
/// the layer below. Unneeded rows are never computed (left zero).
std::vector<std::vector<NodeId>> needed_rows(const MessageGraph& g, const ModelSpec& spec, bool everything) {
  std::vector<std::vector<NodeId>> rows(spec.layers);
  if (everything || spec.pooling == Pooling::Mean || g.num_nodes < 2) {
    for (auto& r : rows) r = all_rows(g.num_nodes);
    return rows;
  }
  std::vector<char> mark(g.num_nodes, 0);
  mark[0] = mark[1] = 1;
  rows.back() = {0, 1};
  for (std::size_t l = spec.layers - 1; l-- > 0;) {
    for (NodeId v : rows[l + 1])
      for (NodeId w : g.neighbors_of(static_cast<std::size_t>(v))) mark[w] = 1;
    for (std::size_t v = 0; v < g.num_nodes; ++v)
      if (mark[v]) rows[l].push_back(static_cast<NodeId>(v));
  }
  return rows;
}

void aggregate_row(const ModelSpec& spec, const MessageGraph& g, const Matrix& h, std::size_t r,
                   std::span<double> out) {
  const auto nb = g.neighbors_of(r);
  if (spec.layer == LayerType::Gcn) {
    axpy(g.self_weight[r], h.row(r), out);
    for (std::size_t e = 0; e < nb.size(); ++e)
      axpy(g.edge_weight[g.offsets[r] + e], h.row(static_cast<std::size_t>(nb[e])), out);
  } else {
    axpy(1.0, h.row(r), out);
    for (NodeId w : nb) axpy(1.0, h.row(static_cast<std::size_t>(w)), out);
  }
}

/// Transpose of aggregate_row: spreads d(agg row r) back to the input rows.
void scatter_row(const ModelSpec& spec, const MessageGraph& g, std::span<const double> dagg, std::size_t r,
                 Matrix& dh) {
  const auto nb = g.neighbors_of(r);
  if (spec.layer == LayerType::Gcn) {
    axpy(g.self_weight[r], dagg, dh.row(r));
    for (std::size_t e = 0; e < nb.size(); ++e)
      axpy(g.edge_weight[g.offsets[r] + e], dagg, dh.row(static_cast<std::size_t>(nb[e])));
  } else {
    axpy(1.0, dagg, dh.row(r));
    for (NodeId w : nb) axpy(1.0, dagg, dh.row(static_cast<std::size_t>(w)));
  }
}

LayerTrace run_layer(const ModelSpec& spec, const MessageLayer& p, const MessageGraph& g, const Matrix& h,
                     std::vector<NodeId> rows) {
  const std::size_t n = g.num_nodes;
  LayerTrace t;
  t.rows = std::move(rows);
  t.agg = Matrix(n, h.cols());
  t.pre = Matrix(n, p.first.out());
  for (NodeId v : t.rows) {
    const auto r = static_cast<std::size_t>(v);
    aggregate_row(spec, g, h, r, t.agg.row(r));
    auto pre = t.pre.row(r);
    std::copy(p.first.bias.row(0).begin(), p.first.bias.row(0).end(), pre.begin());
    accumulate_row_times(t.agg.row(r), p.first.weight, pre);
  }
  if (spec.layer == LayerType::Gcn) {
    t.out = t.pre;
    for (NodeId v : t.rows)
      for (double& x : t.out.row(static_cast<std::size_t>(v))) x = nn::relu(x);
    return t;
  }
  t.mid = Matrix(n, p.first.out());
  t.pre2 = Matrix(n, p.second.out());
  t.out = Matrix(n, p.second.out());
  for (NodeId v : t.rows) {
    const auto r = static_cast<std::size_t>(v);
    auto mid = t.mid.row(r);
    auto pre = t.pre.row(r);
    for (std::size_t c = 0; c < mid.size(); ++c) mid[c] = nn::relu(pre[c]);
    auto pre2 = t.pre2.row(r);
    std::copy(p.second.bias.row(0).begin(), p.second.bias.row(0).end(), pre2.begin());
    accumulate_row_times(mid, p.second.weight, pre2);
    auto out = t.out.row(r);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = nn::relu(pre2[c]);
  }
  return t;
}

BranchTrace encode_branch(const ModelParams& params, const Matrix& x, const MessageGraph& g, bool everything) {
  const ModelSpec& spec = params.spec;
  if (x.rows() != g.num_nodes) throw std::invalid_argument("feature rows do not match subgraph size");
  require_width(x.cols(), spec.input_dim, "node features");
  if (!finite_all(x.flat())) throw std::invalid_argument("node features contain non-finite values");

  auto rows = needed_rows(g, spec, everything);
  BranchTrace b;
  const Matrix* h = &x;
  for (std::size_t l = 0; l < spec.layers; ++l) {
    b.layers.push_back(run_layer(spec, params.layers[l], g, *h, std::move(rows[l])));
    h = &b.layers.back().out;
  }
  if (spec.layer == LayerType::Gcn) {
    b.z = b.layers.back().out;
  } else {
    b.z = Matrix(g.num_nodes, spec.node_dim());
    for (std::size_t l = 0; l < spec.layers; ++l)
      for (NodeId v : b.layers.back().rows) {
        const auto src = b.layers[l].out.row(static_cast<std::size_t>(v));
        std::copy(src.begin(), src.end(), b.z.row(static_cast<std::size_t>(v)).begin() + l * spec.hidden);
      }
  }
  return b;
}

void backprop_branch(const ModelParams& params, const MessageGraph& g, const BranchTrace& b, const Matrix& dz,
                     ModelParams& grad) {
  const ModelSpec& spec = params.spec;
  const std::size_t n = g.num_nodes;
  const std::size_t last = spec.layers - 1;
  Matrix dout(n, spec.hidden);
  auto add_jk_slice = [&](std::size_t l) {
    if (spec.layer == LayerType::Gcn) {
      if (l == last) dout = dz;
      return;
    }
    for (NodeId v : b.layers.back().rows) {
      const auto r = static_cast<std::size_t>(v);
      axpy(1.0, dz.row(r).subspan(l * spec.hidden, spec.hidden), dout.row(r));
    }
  };

  for (std::size_t l = spec.layers; l-- > 0;) {
    add_jk_slice(l);
    const LayerTrace& t = b.layers[l];
    const MessageLayer& p = params.layers[l];
    MessageLayer& gp = grad.layers[l];
    Matrix dh = l > 0 ? Matrix(n, t.agg.cols()) : Matrix();
    std::vector<double> dpre(p.first.out());
    std::vector<double> dagg(t.agg.cols());
    for (NodeId v : t.rows) {
      const auto r = static_cast<std::size_t>(v);
      const auto pre = t.pre.row(r);
      const auto drow = dout.row(r);
      if (spec.layer == LayerType::Gcn) {
        for (std::size_t c = 0; c < dpre.size(); ++c)
          dpre[c] = pre[c] > 0.0 ? drow[c] : 0.0;
      } else {
        std::vector<double> dpre2(p.second.out());
        const auto pre2 = t.pre2.row(r);
        for (std::size_t c = 0; c < dpre2.size(); ++c) dpre2[c] = pre2[c] > 0.0 ? drow[c] : 0.0;
        std::fill(dpre.begin(), dpre.end(), 0.0);
        nn::backprop(p.second, t.mid.row(r), dpre2, gp.second, dpre);
        for (std::size_t c = 0; c < dpre.size(); ++c)
          if (!(pre[c] > 0.0)) dpre[c] = 0.0;
      }
      if (l > 0) {
        std::fill(dagg.begin(), dagg.end(), 0.0);
        nn::backprop(p.first, t.agg.row(r), dpre, gp.first, dagg);
        scatter_row(spec, g, dagg, r, dh);
      } else {
        nn::backprop(p.first, t.agg.row(r), dpre, gp.first, {});
      }
    }
    if (l > 0) dout = std::move(dh);
  }
}

// ---------------------------------------------------------------------------
// Pooling, fusion, classifier

struct PoolTrace {
  Embedding h;
  std::vector<double> hadamard;  // center variants
  std::vector<double> pre;       // center-mlp head pre-activation
};

PoolTrace pool_forward(const ModelParams& params, const Matrix& z) {
  PoolTrace t;
  switch (params.spec.pooling) {
    case Pooling::CenterHadamard:
      t.h = pool_center(z, 0, 1);
      break;
    case Pooling::CenterMlp:
      t.hadamard = pool_center(z, 0, 1);
      t.pre = nn::affine(params.pool, t.hadamard);
      t.h.resize(t.pre.size());
      for (std::size_t c = 0; c < t.pre.size(); ++c) t.h[c] = nn::relu(t.pre[c]);
      break;
    case Pooling::Mean:
      t.h = pool_mean(z);
      break;
  }
  return t;
}

void pool_backward(const ModelParams& params, const Matrix& z, const PoolTrace& t, std::span<const double> dh,
                   ModelParams& grad, Matrix& dz) {
  auto hadamard_back = [&](std::span<const double> dc) {
    for (std::size_t c = 0; c < dc.size(); ++c) {
      dz(0, c) += dc[c] * z(1, c);
      dz(1, c) += dc[c] * z(0, c);
    }
  };
  switch (params.spec.pooling) {
    case Pooling::CenterHadamard:
      hadamard_back(dh);
      break;
    case Pooling::CenterMlp: {
      std::vector<double> dpre(dh.begin(), dh.end());
      for (std::size_t c = 0; c < dpre.size(); ++c)
        if (!(t.pre[c] > 0.0)) dpre[c] = 0.0;
      std::vector<double> dc(t.hadamard.size(), 0.0);
      nn::backprop(params.pool, t.hadamard, dpre, grad.pool, dc);
      hadamard_back(dc);
      break;
    }
    case Pooling::Mean: {
      const double inv = 1.0 / static_cast<double>(z.rows());
      for (std::size_t r = 0; r < z.rows(); ++r) axpy(inv, dh, dz.row(r));
      break;
    }
  }
}

struct SampleTrace {
  std::vector<BranchTrace> branches;
  std::vector<PoolTrace> pooled;
  Embedding fused;
  AttentionWeights att;
  nn::Mlp2Trace cls;
};

SampleTrace forward_sample(const ModelParams& params, const EncodedSample& s) {
  const Strategy strategy = params.spec.strategy;
  const std::size_t want = uses_both_branches(strategy) ? 2 : 1;
  if (s.branches.size() != want) throw std::invalid_argument("sample was encoded for a different strategy");
  SampleTrace t;
  for (const MessageGraph& g : s.branches) {
    t.branches.push_back(encode_branch(params, s.features, g, false));
    t.pooled.push_back(pool_forward(params, t.branches.back().z));
  }
  switch (strategy) {
    case Strategy::Mean:
      t.fused = fuse_mean(t.pooled[0].h, t.pooled[1].h);
      break;
    case Strategy::Att:
      t.att = attention_weights(t.pooled[0].h, t.pooled[1].h, params.fusion);
      t.fused = fuse_att(t.pooled[0].h, t.pooled[1].h, params.fusion);
      break;
    case Strategy::Concat:
      t.fused = fuse_concat(t.pooled[0].h, t.pooled[1].h);
      break;
    default:
      t.fused = t.pooled[0].h;
  }
  t.cls = nn::mlp2_forward(params.classifier, t.fused);
  return t;
}

/// Gradient of the attention fusion; adds into dplus/dminus and grad.fusion.
void attention_backward(const FusionParams& p, std::span<const double> hp, std::span<const double> hm,
                        const AttentionWeights& w, std::span<const double> dout, FusionParams& gp,
                        std::span<double> dplus, std::span<double> dminus) {
  double gplus = 0.0, gminus = 0.0;
  for (std::size_t c = 0; c < dout.size(); ++c) {
    dplus[c] += w.plus * dout[c];
    dminus[c] += w.minus * dout[c];
    gplus += dout[c] * hp[c];
    gminus += dout[c] * hm[c];
  }
  const double mix = w.plus * gplus + w.minus * gminus;
  const double dlogit[2] = {w.plus * (gplus - mix), w.minus * (gminus - mix)};
  const std::span<const double> inputs[2] = {hp, hm};
  const std::span<double> dinputs[2] = {dplus, dminus};
  const std::size_t width = p.width();
  for (int k = 0; k < 2; ++k) {
    std::vector<double> a(p.bias.row(0).begin(), p.bias.row(0).end());
    accumulate_row_times(inputs[k], p.weight, a);
    std::vector<double> da(width);
    for (std::size_t c = 0; c < width; ++c) {
      const double tc = std::tanh(a[c]);
      gp.query(0, c) += dlogit[k] * tc;
      da[c] = dlogit[k] * p.query(0, c) * (1.0 - tc * tc);
    }
    accumulate_outer(inputs[k], da, gp.weight);
    axpy(1.0, da, gp.bias.row(0));
    accumulate_row_times_transposed(da, p.weight, dinputs[k]);
  }
}

void backward_sample(const ModelParams& params, const EncodedSample& s, const SampleTrace& t, double dlogit,
                     ModelParams& grad) {
  std::vector<double> dfused(t.fused.size(), 0.0);
  nn::mlp2_backward(params.classifier, t.fused, t.cls, dlogit, grad.classifier, dfused);

  const std::size_t width = params.spec.embedding_dim();
  std::vector<std::vector<double>> dpooled(t.branches.size(), std::vector<double>(width, 0.0));
  switch (params.spec.strategy) {
    case Strategy::Mean:
      for (std::size_t c = 0; c < width; ++c) dpooled[0][c] = dpooled[1][c] = dfused[c] / 2.0;
      break;
    case Strategy::Att:
      attention_backward(params.fusion, t.pooled[0].h, t.pooled[1].h, t.att, dfused, grad.fusion, dpooled[0],
                         dpooled[1]);
      break;
    case Strategy::Concat:
      std::copy(dfused.begin(), dfused.begin() + static_cast<std::ptrdiff_t>(width), dpooled[0].begin());
      std::copy(dfused.begin() + static_cast<std::ptrdiff_t>(width), dfused.end(), dpooled[1].begin());
      break;
    default:
      dpooled[0] = dfused;
  }
  for (std::size_t b = 0; b < t.branches.size(); ++b) {
    const Matrix& z = t.branches[b].z;
    Matrix dz(z.rows(), z.cols());
    pool_backward(params, z, t.pooled[b], dpooled[b], grad, dz);
    backprop_branch(params, s.branches[b], t.branches[b], dz, grad);
  }
}

void add_into(ModelParams& acc, const ModelParams& g) {
  auto dst = acc.tensors();
  auto src = g.tensors();
  for (std::size_t t = 0; t < dst.size(); ++t) axpy(1.0, src[t]->flat(), dst[t]->flat());
}

LossAndGrad loss_and_grad_indexed(const ModelParams& params, std::span<const EncodedSample> samples,
                                  std::span<const std::size_t> index, std::size_t threads) {
  if (index.empty()) throw std::invalid_argument("loss_and_grad needs a non-empty batch");
  const std::size_t chunks = (index.size() + kReduceChunk - 1) / kReduceChunk;
  const double scale = 1.0 / static_cast<double>(index.size());
  std::vector<ModelParams> grads(chunks);
  std::vector<double> losses(chunks, 0.0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    ModelParams g = params.zeros_like();
    double loss = 0.0;
    const std::size_t end = std::min(index.size(), (c + 1) * kReduceChunk);
    for (std::size_t k = c * kReduceChunk; k < end; ++k) {
      const EncodedSample& s = samples[index[k]];
      const SampleTrace t = forward_sample(params, s);
      const auto y = static_cast<double>(s.label);
      loss += nn::bce_with_logit(t.cls.logit, y);
      backward_sample(params, s, t, nn::bce_grad(t.cls.logit, y) * scale, g);
    }
    grads[c] = std::move(g);
    losses[c] = loss;
  });
  LossAndGrad out{0.0, std::move(grads[0])};
  double total = losses[0];
  for (std::size_t c = 1; c < chunks; ++c) {
    add_into(out.grad, grads[c]);
    total += losses[c];
  }
  out.loss = total * scale;
  if (!std::isfinite(out.loss)) throw TrainingDiverged("non-finite loss");
  return out;
}

std::vector<std::size_t> iota_index(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

double validation_auc(const ModelParams& params, std::span<const EncodedSample> val, std::size_t threads) {
  const std::vector<double> scores = score_samples(params, val, threads);
  std::vector<double> pos, neg;
  for (std::size_t k = 0; k < val.size(); ++k) (val[k].label ? pos : neg).push_back(scores[k]);
  return auc(pos, neg);
}

/// Sign of every ReLU input touched by a forward pass over the batch.
std::vector<bool> relu_pattern(const ModelParams& params, std::span<const EncodedSample> batch) {
  std::vector<bool> bits;
  auto add = [&](std::span<const double> v) {
    for (double x : v) bits.push_back(x > 0.0);
  };
  for (const EncodedSample& s : batch) {
    const SampleTrace t = forward_sample(params, s);
    for (const BranchTrace& b : t.branches)
      for (const LayerTrace& l : b.layers)
        for (NodeId v : l.rows) {
          add(l.pre.row(static_cast<std::size_t>(v)));
          if (params.spec.layer == LayerType::Gin) add(l.pre2.row(static_cast<std::size_t>(v)));
        }
    for (const PoolTrace& p : t.pooled) add(p.pre);
    add(t.cls.pre);
  }
  return bits;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(LayerType t) { return t == LayerType::Gcn ? "gcn" : "gin"; }

std::string_view to_string(Pooling p) {
  switch (p) {
    case Pooling::CenterHadamard: return "center-hadamard";
    case Pooling::CenterMlp: return "center-mlp";
    case Pooling::Mean: return "mean";
  }
  return "?";
}

LayerType parse_layer_type(std::string_view name) {
  if (name == "gcn") return LayerType::Gcn;
  if (name == "gin") return LayerType::Gin;
  throw std::invalid_argument("unknown layer type '" + std::string(name) + "'");
}

Pooling parse_pooling(std::string_view name) {
  for (Pooling p : {Pooling::CenterHadamard, Pooling::CenterMlp, Pooling::Mean})
    if (name == to_string(p)) return p;
  throw std::invalid_argument("unknown pooling '" + std::string(name) + "'");
}

std::size_t ModelSpec::node_dim() const { return layer == LayerType::Gin ? layers * hidden : hidden; }

std::size_t ModelSpec::embedding_dim() const { return pooling == Pooling::CenterMlp ? hidden : node_dim(); }

std::size_t ModelSpec::classifier_input_dim() const {
  return strategy == Strategy::Concat ? 2 * embedding_dim() : embedding_dim();
}

ModelParams ModelParams::init(const ModelSpec& spec, std::uint64_t seed) {
  if (spec.layers == 0 || spec.hidden == 0 || spec.input_dim == 0 || spec.classifier_hidden == 0)
    throw std::invalid_argument("model dimensions must be positive");
  Rng rng(mix_seed(seed, 0x6d706e6e));
  ModelParams p;
  p.spec = spec;
  std::size_t in = spec.input_dim;
  for (std::size_t l = 0; l < spec.layers; ++l) {
    MessageLayer layer;
    layer.first = nn::glorot_dense(in, spec.hidden, rng);
    if (spec.layer == LayerType::Gin) layer.second = nn::glorot_dense(spec.hidden, spec.hidden, rng);
    p.layers.push_back(std::move(layer));
    in = spec.hidden;
  }
  if (spec.pooling == Pooling::CenterMlp) p.pool = nn::glorot_dense(spec.node_dim(), spec.hidden, rng);
  if (spec.strategy == Strategy::Att) {
    const std::size_t f = spec.embedding_dim();
    p.fusion.weight = nn::glorot_matrix(f, f, rng);
    p.fusion.bias = Matrix(1, f);
    p.fusion.query = nn::glorot_matrix(1, f, rng);
  }
  p.classifier = nn::Mlp2::init(spec.classifier_input_dim(), spec.classifier_hidden, rng);
  return p;
}

ModelParams ModelParams::zeros_like() const {
  ModelParams z = *this;
  for (Matrix* t : z.tensors()) t->fill(0.0);
  return z;
}

std::vector<Matrix*> ModelParams::tensors() {
  std::vector<Matrix*> out;
  for (MessageLayer& l : layers) {
    out.push_back(&l.first.weight);
    out.push_back(&l.first.bias);
    if (spec.layer == LayerType::Gin) {
      out.push_back(&l.second.weight);
      out.push_back(&l.second.bias);
    }
  }
  if (spec.pooling == Pooling::CenterMlp) {
    out.push_back(&pool.weight);
    out.push_back(&pool.bias);
  }
  if (spec.strategy == Strategy::Att) {
    out.push_back(&fusion.weight);
    out.push_back(&fusion.bias);
    out.push_back(&fusion.query);
  }
  out.push_back(&classifier.hidden.weight);
  out.push_back(&classifier.hidden.bias);
  out.push_back(&classifier.out.weight);
  out.push_back(&classifier.out.bias);
  return out;
}

std::vector<const Matrix*> ModelParams::tensors() const {
  auto mut = const_cast<ModelParams*>(this)->tensors();
  return {mut.begin(), mut.end()};
}

std::vector<std::string> ModelParams::tensor_names() const {
  std::vector<std::string> names;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string prefix = "layer" + std::to_string(l);
    names.push_back(prefix + ".first.weight");
    names.push_back(prefix + ".first.bias");
    if (spec.layer == LayerType::Gin) {
      names.push_back(prefix + ".second.weight");
      names.push_back(prefix + ".second.bias");
    }
  }
  if (spec.pooling == Pooling::CenterMlp) {
    names.emplace_back("pool.weight");
    names.emplace_back("pool.bias");
  }
  if (spec.strategy == Strategy::Att) {
    names.emplace_back("fusion.weight");
    names.emplace_back("fusion.bias");
    names.emplace_back("fusion.query");
  }
  names.emplace_back("classifier.hidden.weight");
  names.emplace_back("classifier.hidden.bias");
  names.emplace_back("classifier.out.weight");
  names.emplace_back("classifier.out.bias");
  return names;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const Matrix* t : tensors()) n += t->size();
  return n;
}

std::vector<double> ModelParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const Matrix* t : tensors()) flat.insert(flat.end(), t->flat().begin(), t->flat().end());
  return flat;
}

void ModelParams::assign(std::span<const double> flat) {
  if (flat.size() != parameter_count()) throw std::invalid_argument("flat parameter vector has the wrong size");
  std::size_t at = 0;
  for (Matrix* t : tensors()) {
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(at),
              flat.begin() + static_cast<std::ptrdiff_t>(at + t->size()), t->flat().begin());
    at += t->size();
  }
}

bool ModelParams::all_finite() const {
  for (const Matrix* t : tensors())
    if (!finite_all(t->flat())) return false;
  return true;
}

MessageGraph MessageGraph::from(const EnclosingSubgraph& s) {
  const Graph local = s.to_graph();
  MessageGraph g;
  g.num_nodes = local.num_nodes();
  g.offsets.assign(g.num_nodes + 1, 0);
  for (std::size_t v = 0; v < g.num_nodes; ++v) {
    const auto nb = local.neighbors(static_cast<NodeId>(v));
    g.neighbors.insert(g.neighbors.end(), nb.begin(), nb.end());
    g.offsets[v + 1] = g.neighbors.size();
  }
  g.self_weight.resize(g.num_nodes);
  g.edge_weight.resize(g.neighbors.size());
  for (std::size_t v = 0; v < g.num_nodes; ++v) {
    const auto dv = static_cast<double>(local.degree(static_cast<NodeId>(v)) + 1);
    g.self_weight[v] = 1.0 / dv;
    for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
      const auto dw = static_cast<double>(local.degree(g.neighbors[e]) + 1);
      g.edge_weight[e] = 1.0 / std::sqrt(dv * dw);
    }
  }
  return g;
}

EncodedSample encode_sample(const EnclosingSubgraph& s, int label, Strategy strategy, const Matrix& attrs,
                            int max_label) {
  EncodedSample out;
  out.features = encode_features(drnl_label(s), attrs, max_label);
  out.label = label;
  switch (strategy) {
    case Strategy::Original:
      out.branches.push_back(MessageGraph::from(s));
      break;
    case Strategy::Plus:
      out.branches.push_back(MessageGraph::from(edge_plus(s)));
      break;
    case Strategy::Minus:
      out.branches.push_back(MessageGraph::from(edge_minus(s)));
      break;
    default:
      out.branches.push_back(MessageGraph::from(edge_plus(s)));
      out.branches.push_back(MessageGraph::from(edge_minus(s)));
  }
  return out;
}

std::vector<EncodedSample> encode_samples(std::span<const SubgraphSample> samples, Strategy strategy,
                                          const Graph& parent, int max_label, std::size_t threads) {
  std::vector<EncodedSample> out(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t k) {
    const SubgraphSample& s = samples[k];
    out[k] = encode_sample(s.subgraph, s.label, strategy, gather_attributes(parent, s.subgraph), max_label);
  });
  return out;
}

Matrix forward(const ModelParams& params, const Matrix& features, const MessageGraph& g) {
  return encode_branch(params, features, g, true).z;
}

Matrix forward(const ModelParams& params, const Matrix& features, const EnclosingSubgraph& s) {
  return forward(params, features, MessageGraph::from(s));
}

Embedding pool_center(const Matrix& z, std::size_t a, std::size_t b) {
  if (a >= z.rows() || b >= z.rows()) throw std::out_of_range("focal row out of range");
  Embedding h(z.cols());
  for (std::size_t c = 0; c < h.size(); ++c) h[c] = z(a, c) * z(b, c);
  return h;
}

Embedding pool_center_mlp(const Matrix& z, std::size_t a, std::size_t b, const nn::Dense& head) {
  Embedding h = nn::affine(head, pool_center(z, a, b));
  for (double& x : h) x = nn::relu(x);
  return h;
}

Embedding pool_mean(const Matrix& z) {
  if (z.rows() == 0) throw std::invalid_argument("mean pooling needs at least one node");
  Embedding h(z.cols(), 0.0);
  for (std::size_t r = 0; r < z.rows(); ++r) axpy(1.0, z.row(r), h);
  for (double& x : h) x /= static_cast<double>(z.rows());
  return h;
}

double classify(std::span<const double> h, const ModelParams& params) {
  require_width(h.size(), params.spec.classifier_input_dim(), "classifier input");
  const double logit = nn::mlp2_forward(params.classifier, h).logit;
  if (!std::isfinite(logit)) throw std::domain_error("classifier produced a non-finite logit");
  return nn::sigmoid(logit);
}

Prediction predict(const ModelParams& params, const EncodedSample& sample) {
  const SampleTrace t = forward_sample(params, sample);
  if (!std::isfinite(t.cls.logit)) throw std::domain_error("classifier produced a non-finite logit");
  return {nn::sigmoid(t.cls.logit), t.fused};
}

Prediction predict(const ModelParams& params, const SubgraphSample& sample, const Graph& parent, int max_label) {
  return predict(params, encode_sample(sample.subgraph, sample.label, params.spec.strategy,
                                       gather_attributes(parent, sample.subgraph), max_label));
}

SubgraphEncoder prediction_encoder(const ModelParams& params, int max_label) {
  return [params, max_label](const EnclosingSubgraph& s) {
    Prediction p = predict(params, encode_sample(s, 0, params.spec.strategy, Matrix(), max_label));
    p.embedding.push_back(p.probability);
    return p.embedding;
  };
}

std::vector<double> score_samples(const ModelParams& params, std::span<const EncodedSample> samples,
                                  std::size_t threads) {
  std::vector<double> scores(samples.size());
  parallel_for(samples.size(), threads,
               [&](std::size_t k) { scores[k] = forward_sample(params, samples[k]).cls.logit; });
  return scores;
}

LossAndGrad loss_and_grad(const ModelParams& params, std::span<const EncodedSample> batch, std::size_t threads) {
  const auto idx = iota_index(batch.size());
  return loss_and_grad_indexed(params, batch, idx, threads);
}

double loss_only(const ModelParams& params, std::span<const EncodedSample> batch) {
  if (batch.empty()) throw std::invalid_argument("loss needs a non-empty batch");
  double total = 0.0;
  for (const EncodedSample& s : batch)
    total += nn::bce_with_logit(forward_sample(params, s).cls.logit, static_cast<double>(s.label));
  return total / static_cast<double>(batch.size());
}

TrainResult train(const ModelSpec& spec, const TrainConfig& config, std::span<const EncodedSample> train_set,
                  std::span<const EncodedSample> val_set) {
  TrainResult result;
  result.params = ModelParams::init(spec, config.seed);
  if (config.epochs == 0) {
    if (!val_set.empty()) result.best_val_auc = validation_auc(result.params, val_set, config.threads);
    return result;
  }
  if (train_set.empty() || val_set.empty()) throw std::invalid_argument("training needs train and val samples");

  ModelParams params = result.params;
  nn::Adam adam(params.tensors(), config.adam);
  std::vector<std::size_t> order = iota_index(train_set.size());
  const std::size_t batch =
      config.batch_size == 0 ? train_set.size() : std::min(config.batch_size, train_set.size());
  result.best_val_auc = -1.0;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    if (batch < train_set.size()) {
      Rng rng(mix_seed(config.seed, epoch));
      for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[uniform_index(rng, k)]);
    }
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t len = std::min(batch, order.size() - start);
      LossAndGrad lg;
      try {
        lg = loss_and_grad_indexed(params, train_set, std::span(order).subspan(start, len), config.threads);
      } catch (const TrainingDiverged&) {
        throw TrainingDiverged("training diverged at epoch " + std::to_string(epoch) + ": non-finite loss");
      }
      epoch_loss += lg.loss * static_cast<double>(len);
      adam.step(std::as_const(lg.grad).tensors());
    }
    if (!params.all_finite())
      throw TrainingDiverged("training diverged at epoch " + std::to_string(epoch) + ": non-finite parameters");
    EpochMetrics m{epoch, epoch_loss / static_cast<double>(train_set.size()),
                   validation_auc(params, val_set, config.threads)};
    result.history.push_back(m);
    if (m.val_auc > result.best_val_auc) {
      result.best_val_auc = m.val_auc;
      result.best_epoch = epoch;
      result.params = params;
    }
  }
  return result;
}

GradCheckReport gradient_check(const ModelParams& params, std::span<const EncodedSample> batch,
                               std::size_t coords_per_tensor, std::uint64_t seed, double step) {
  const LossAndGrad analytic = loss_and_grad(params, batch, 1);
  const auto grads = analytic.grad.tensors();
  const auto names = params.tensor_names();
  ModelParams probe = params;
  auto probe_tensors = probe.tensors();
  Rng rng(seed);
  GradCheckReport report;
  const std::vector<bool> pattern = relu_pattern(params, batch);
  for (std::size_t t = 0; t < probe_tensors.size(); ++t) {
    Matrix& tensor = *probe_tensors[t];
    std::vector<std::size_t> coords = iota_index(tensor.size());
    for (std::size_t k = coords.size(); k > 1; --k) std::swap(coords[k - 1], coords[uniform_index(rng, k)]);
    TensorCheck check{names[t], 0, 0, 0.0};
    for (std::size_t k = 0; k < coords.size() && check.coordinates < coords_per_tensor; ++k) {
      double& x = tensor.flat()[coords[k]];
      const double saved = x;
      x = saved + step;
      const bool up_smooth = relu_pattern(probe, batch) == pattern;
      const double up = loss_only(probe, batch);
      x = saved - step;
      const bool down_smooth = relu_pattern(probe, batch) == pattern;
      const double down = loss_only(probe, batch);
      x = saved;
      if (!up_smooth || !down_smooth) {
        ++check.skipped_kinks;
        continue;
      }
      ++check.coordinates;
      const double numeric = (up - down) / (2.0 * step);
      const double exact = grads[t]->flat()[coords[k]];
      const double denom = std::max({std::abs(exact), std::abs(numeric), 1e-5});
      check.max_rel_error = std::max(check.max_rel_error, std::abs(exact - numeric) / denom);
    }
    report.max_rel_error = std::max(report.max_rel_error, check.max_rel_error);
    report.tensors.push_back(std::move(check));
  }
  return report;
}

ModelParams jitter_biases(const ModelParams& params, std::uint64_t seed, double scale) {
  ModelParams out = params;
  Rng rng(mix_seed(seed, 0x6a6974));
  std::uniform_real_distribution<double> noise(-scale, scale);
  const auto names = out.tensor_names();
  const auto tensors = out.tensors();
  for (std::size_t t = 0; t < tensors.size(); ++t)
    if (names[t].ends_with("bias"))
      for (double& b : tensors[t]->flat()) b += noise(rng);
  return out;
}

void save_checkpoint(const ModelParams& params, std::ostream& out) {
  const ModelSpec& s = params.spec;
  out << "sublink-checkpoint 1\n"
      << "layer " << to_string(s.layer) << "\n"
      << "pooling " << to_string(s.pooling) << "\n"
      << "strategy " << to_string(s.strategy) << "\n"
      << "input_dim " << s.input_dim << "\n"
      << "hidden " << s.hidden << "\n"
      << "layers " << s.layers << "\n"
      << "classifier_hidden " << s.classifier_hidden << "\n";
  const auto names = params.tensor_names();
  const auto tensors = params.tensors();
  char buf[64];
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    out << "tensor " << names[t] << ' ' << tensors[t]->rows() << ' ' << tensors[t]->cols() << '\n';
    for (std::size_t r = 0; r < tensors[t]->rows(); ++r) {
      const auto row = tensors[t]->row(r);
      for (std::size_t c = 0; c < row.size(); ++c) {
        const auto res = std::to_chars(buf, buf + sizeof(buf), row[c]);
        out << (c ? " " : "") << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
      }
      out << '\n';
    }
  }
}

ModelParams load_checkpoint(std::istream& in) {
  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != "sublink-checkpoint") throw Error("not a sublink checkpoint");
  if (version != 1) throw Error("unsupported checkpoint version " + std::to_string(version));
  ModelSpec spec;
  auto expect = [&](const char* key) {
    std::string got;
    if (!(in >> got) || got != key) throw Error(std::string("checkpoint: expected '") + key + "'");
    std::string value;
    in >> value;
    return value;
  };
  spec.layer = parse_layer_type(expect("layer"));
  spec.pooling = parse_pooling(expect("pooling"));
  spec.strategy = parse_strategy(expect("strategy"));
  spec.input_dim = std::stoul(expect("input_dim"));
  spec.hidden = std::stoul(expect("hidden"));
  spec.layers = std::stoul(expect("layers"));
  spec.classifier_hidden = std::stoul(expect("classifier_hidden"));

  ModelParams params = ModelParams::init(spec, 0);
  const auto names = params.tensor_names();
  auto tensors = params.tensors();
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    std::string tag, name;
    std::size_t rows = 0, cols = 0;
    if (!(in >> tag >> name >> rows >> cols) || tag != "tensor" || name != names[t])
      throw Error("checkpoint: expected tensor '" + names[t] + "'");
    if (rows != tensors[t]->rows() || cols != tensors[t]->cols())
      throw Error("checkpoint: tensor '" + name + "' has the wrong shape");
    for (double& v : tensors[t]->flat()) {
      std::string token;
      in >> token;
      const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
      if (res.ec != std::errc() || res.ptr != token.data() + token.size())
        throw Error("checkpoint: bad value '" + token + "' in tensor '" + name + "'");
    }
  }
  return params;
}

}  // namespace sublink
