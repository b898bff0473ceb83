// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#include "sublink/nn.hpp"

#include <stdexcept>

namespace sublink::nn {

Matrix glorot_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix m(rows, cols);
  for (double& v : m.flat()) v = dist(rng);
  return m;
}

Dense glorot_dense(std::size_t in, std::size_t out, Rng& rng) {
  return {glorot_matrix(in, out, rng), Matrix(1, out)};
}

Dense zeros_like(const Dense& d) {
  return {Matrix(d.weight.rows(), d.weight.cols()), Matrix(d.bias.rows(), d.bias.cols())};
}

std::vector<double> affine(const Dense& d, std::span<const double> x) {
  require_width(x.size(), d.in(), "dense input");
  std::vector<double> y(d.bias.row(0).begin(), d.bias.row(0).end());
  accumulate_row_times(x, d.weight, y);
  return y;
}

void backprop(const Dense& d, std::span<const double> x, std::span<const double> dy, Dense& grad,
              std::span<double> dx) {
  accumulate_outer(x, dy, grad.weight);
  axpy(1.0, dy, grad.bias.row(0));
  if (!dx.empty()) accumulate_row_times_transposed(dy, d.weight, dx);
}

Mlp2 Mlp2::init(std::size_t in, std::size_t hidden, Rng& rng) {
  Mlp2 m;
  m.hidden = glorot_dense(in, hidden, rng);
  m.out = glorot_dense(hidden, 1, rng);
  return m;
}

Mlp2Trace mlp2_forward(const Mlp2& m, std::span<const double> x) {
  Mlp2Trace t;
  t.pre = affine(m.hidden, x);
  t.active.resize(t.pre.size());
  for (std::size_t k = 0; k < t.pre.size(); ++k) t.active[k] = relu(t.pre[k]);
  t.logit = affine(m.out, t.active)[0];
  return t;
}

void mlp2_backward(const Mlp2& m, std::span<const double> x, const Mlp2Trace& t, double dlogit, Mlp2& grad,
                   std::span<double> dx) {
  const double dout[1] = {dlogit};
  std::vector<double> dactive(t.active.size(), 0.0);
  backprop(m.out, t.active, dout, grad.out, dactive);
  for (std::size_t k = 0; k < dactive.size(); ++k)
    if (!(t.pre[k] > 0.0)) dactive[k] = 0.0;
  backprop(m.hidden, x, dactive, grad.hidden, dx);
}

Adam::Adam(std::vector<Matrix*> params, Options opts) : params_(std::move(params)), opts_(opts) {
  for (const Matrix* p : params_) {
    m_.emplace_back(p->rows(), p->cols());
    v_.emplace_back(p->rows(), p->cols());
  }
}

void Adam::step(const std::vector<const Matrix*>& grads) {
  if (grads.size() != params_.size()) throw std::invalid_argument("Adam: gradient list does not match parameters");
  ++step_;
  const double c1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(step_));
  for (std::size_t t = 0; t < params_.size(); ++t) {
    auto p = params_[t]->flat();
    auto g = grads[t]->flat();
    auto m = m_[t].flat();
    auto v = v_[t].flat();
    for (std::size_t k = 0; k < p.size(); ++k) {
      m[k] = opts_.beta1 * m[k] + (1.0 - opts_.beta1) * g[k];
      v[k] = opts_.beta2 * v[k] + (1.0 - opts_.beta2) * g[k] * g[k];
      p[k] -= opts_.lr * (m[k] / c1) / (std::sqrt(v[k] / c2) + opts_.eps);
    }
  }
}

}  // namespace sublink::nn
