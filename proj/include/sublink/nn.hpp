// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "sublink/common.hpp"
#include "sublink/tensor.hpp"

namespace sublink::nn {

/// Affine map x -> x * weight + bias on row vectors; weight is in x out.
struct Dense {
  Matrix weight;
  Matrix bias;  // 1 x out

  std::size_t in() const { return weight.rows(); }
  std::size_t out() const { return weight.cols(); }
  bool operator==(const Dense&) const = default;
};

/// Glorot-uniform weights in +-sqrt(6 / (in + out)), zero bias.
Dense glorot_dense(std::size_t in, std::size_t out, Rng& rng);
Matrix glorot_matrix(std::size_t rows, std::size_t cols, Rng& rng);
Dense zeros_like(const Dense& d);

/// y = x * weight + bias.
std::vector<double> affine(const Dense& d, std::span<const double> x);
/// Accumulates parameter gradients for y = affine(d, x) given dy; adds dx
/// into `dx` when it is non-empty.
void backprop(const Dense& d, std::span<const double> x, std::span<const double> dy, Dense& grad,
              std::span<double> dx);

inline double relu(double v) { return v > 0.0 ? v : 0.0; }

/// Logistic function on a logit clamped to +-30, so the result lies strictly
/// inside (0, 1).
inline double sigmoid(double logit) {
  const double z = std::fmax(-30.0, std::fmin(30.0, logit));
  return 1.0 / (1.0 + std::exp(-z));
}

/// Binary cross-entropy on a logit: max(l,0) - l*y + log(1 + exp(-|l|)).
inline double bce_with_logit(double logit, double label) {
  return std::fmax(logit, 0.0) - logit * label + std::log1p(std::exp(-std::fabs(logit)));
}

/// d(bce)/d(logit), without the clamp used by sigmoid().
inline double bce_grad(double logit, double label) { return 1.0 / (1.0 + std::exp(-logit)) - label; }

/// Two-layer perceptron in -> hidden (ReLU) -> 1 logit.
struct Mlp2 {
  Dense hidden;
  Dense out;

  static Mlp2 init(std::size_t in, std::size_t hidden, Rng& rng);
  bool operator==(const Mlp2&) const = default;
};

struct Mlp2Trace {
  std::vector<double> pre;     // hidden pre-activation
  std::vector<double> active;  // ReLU(pre)
  double logit = 0.0;
};

Mlp2Trace mlp2_forward(const Mlp2& m, std::span<const double> x);
/// Adds parameter gradients for d(loss)/d(logit) = dlogit; adds the input
/// gradient into dx when non-empty.
void mlp2_backward(const Mlp2& m, std::span<const double> x, const Mlp2Trace& t, double dlogit, Mlp2& grad,
                   std::span<double> dx);

/// Adam with bias correction over a fixed list of tensors.
class Adam {
 public:
  struct Options {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
  };

  Adam(std::vector<Matrix*> params, Options opts);
  void step(const std::vector<const Matrix*>& grads);

 private:
  std::vector<Matrix*> params_;
  std::vector<Matrix> m_, v_;
  Options opts_;
  long step_ = 0;
};

}  // namespace sublink::nn
