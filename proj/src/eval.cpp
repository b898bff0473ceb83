// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#include "sublink/eval.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sublink/common.hpp"
#include "sublink/nn.hpp"

namespace sublink {

double auc(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) throw std::invalid_argument("auc needs positive and negative scores");
  for (double x : pos)
    if (std::isnan(x)) throw std::invalid_argument("auc: NaN score");
  for (double x : neg)
    if (std::isnan(x)) throw std::invalid_argument("auc: NaN score");
  std::vector<double> n(neg.begin(), neg.end());
  std::sort(n.begin(), n.end());
  // Twice the Mann-Whitney U, kept integral so the result is exact.
  unsigned long long twice_u = 0;
  for (double p : pos) {
    const auto lo = std::lower_bound(n.begin(), n.end(), p);
    const auto hi = std::upper_bound(lo, n.end(), p);
    twice_u += 2ULL * static_cast<unsigned long long>(lo - n.begin()) + static_cast<unsigned long long>(hi - lo);
  }
  return static_cast<double>(twice_u) / (2.0 * static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

double hits_at_k(std::span<const double> pos, std::span<const double> neg, std::size_t k) {
  if (k == 0 || neg.size() < k) throw std::invalid_argument("hits_at_k needs 1 <= k <= number of negatives");
  if (pos.empty()) throw std::invalid_argument("hits_at_k needs positive scores");
  std::vector<double> n(neg.begin(), neg.end());
  std::nth_element(n.begin(), n.begin() + static_cast<std::ptrdiff_t>(k - 1), n.end(), std::greater<>());
  const double threshold = n[k - 1];
  const auto hits = std::count_if(pos.begin(), pos.end(), [&](double p) { return p > threshold; });
  return static_cast<double>(hits) / static_cast<double>(pos.size());
}

double distribution_gap_probe(std::span<const Embedding> train_pos, std::span<const Embedding> test_pos,
                              std::uint64_t seed, const ProbeOptions& opts) {
  if (train_pos.empty() || test_pos.empty()) throw std::invalid_argument("probe needs both embedding sets");
  const std::size_t dim = train_pos[0].size();
  for (const auto* set : {&train_pos, &test_pos})
    for (const Embedding& e : *set) require_width(e.size(), dim, "probe embedding");

  bool all_same = true;
  for (const auto* set : {&train_pos, &test_pos})
    for (const Embedding& e : *set) all_same = all_same && e == train_pos[0];
  if (all_same) return 0.5;

  Rng rng(mix_seed(seed, 0x70726f6265));
  struct Row {
    const Embedding* x;
    double y;
  };
  std::vector<Row> fit, held;
  auto split_class = [&](std::span<const Embedding> set, double y) {
    std::vector<std::size_t> idx(set.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t k = idx.size(); k > 1; --k) std::swap(idx[k - 1], idx[uniform_index(rng, k)]);
    auto n_fit = static_cast<std::size_t>(std::floor(opts.train_fraction * static_cast<double>(set.size())));
    if (set.size() >= 2) n_fit = std::clamp<std::size_t>(n_fit, 1, set.size() - 1);
    for (std::size_t k = 0; k < idx.size(); ++k) (k < n_fit ? fit : held).push_back({&set[idx[k]], y});
  };
  split_class(train_pos, 1.0);
  split_class(test_pos, 0.0);
  if (fit.empty()) throw std::invalid_argument("probe has no training rows");

  std::vector<double> mu(dim, 0.0), sd(dim, 0.0);
  for (const Row& r : fit) axpy(1.0, *r.x, mu);
  for (double& m : mu) m /= static_cast<double>(fit.size());
  for (const Row& r : fit)
    for (std::size_t c = 0; c < dim; ++c) sd[c] += ((*r.x)[c] - mu[c]) * ((*r.x)[c] - mu[c]);
  for (double& s : sd) {
    s = std::sqrt(s / static_cast<double>(fit.size()));
    if (!(s > 1e-12)) s = 1.0;
  }
  auto standardize = [&](const Embedding& x) {
    std::vector<double> z(dim);
    for (std::size_t c = 0; c < dim; ++c) z[c] = (x[c] - mu[c]) / sd[c];
    return z;
  };
  std::vector<std::vector<double>> fit_x, held_x;
  for (const Row& r : fit) fit_x.push_back(standardize(*r.x));
  for (const Row& r : held) held_x.push_back(standardize(*r.x));

  nn::Mlp2 model = nn::Mlp2::init(dim, opts.hidden, rng);
  std::vector<Matrix*> params{&model.hidden.weight, &model.hidden.bias, &model.out.weight, &model.out.bias};
  nn::Adam adam(params, {});
  std::vector<std::size_t> order(fit.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = opts.batch_size == 0 ? fit.size() : std::min(opts.batch_size, fit.size());
  for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
    for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[uniform_index(rng, k)]);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      nn::Mlp2 grad{nn::zeros_like(model.hidden), nn::zeros_like(model.out)};
      const double scale = 1.0 / static_cast<double>(end - start);
      for (std::size_t k = start; k < end; ++k) {
        const auto& x = fit_x[order[k]];
        const nn::Mlp2Trace t = nn::mlp2_forward(model, x);
        nn::mlp2_backward(model, x, t, nn::bce_grad(t.logit, fit[order[k]].y) * scale, grad, {});
      }
      adam.step({&grad.hidden.weight, &grad.hidden.bias, &grad.out.weight, &grad.out.bias});
    }
  }

  std::vector<double> pos, neg;
  for (std::size_t k = 0; k < held.size(); ++k)
    (held[k].y > 0.5 ? pos : neg).push_back(nn::mlp2_forward(model, held_x[k]).logit);
  if (pos.empty() || neg.empty()) return 0.5;
  return auc(pos, neg);
}

double mean(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("mean of an empty list");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("welch_t_test needs at least two values per side");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean(a), mb = mean(b);
  const double va = std::pow(stddev(a), 2) / na;
  const double vb = std::pow(stddev(b), 2) / nb;
  WelchResult r;
  if (va + vb == 0.0) {
    r.p_value = ma == mb ? 1.0 : 0.0;
    r.t = ma == mb ? 0.0 : std::copysign(INFINITY, ma - mb);
    r.dof = na + nb - 2.0;
    return r;
  }
  r.t = (ma - mb) / std::sqrt(va + vb);
  r.dof = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  r.p_value = boost::math::ibeta(r.dof / 2.0, 0.5, r.dof / (r.dof + r.t * r.t));
  return r;
}

}  // namespace sublink
