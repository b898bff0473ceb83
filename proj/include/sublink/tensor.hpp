// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sublink {

/// Dense row-major matrix of doubles.
///
/// Every kernel in this library walks rows with the same inner loop, so two
/// identical input rows always produce bit-identical output rows. Several
/// invariants (edge invariance, the two-triangle construction) are asserted
/// with exact equality and rely on that.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// out += x * w, where x is a row vector of length w.rows().
/// Zero entries of x are skipped; one-hot inputs and ReLU outputs are sparse.
inline void accumulate_row_times(std::span<const double> x, const Matrix& w, std::span<double> out) {
  const std::size_t cols = w.cols();
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double xk = x[k];
    if (xk == 0.0) continue;
    const double* wk = w.row(k).data();
    for (std::size_t c = 0; c < cols; ++c) out[c] += xk * wk[c];
  }
}

/// out[k] += dot(w.row(k), g) for every k; i.e. out += g * w^T.
inline void accumulate_row_times_transposed(std::span<const double> g, const Matrix& w,
                                            std::span<double> out) {
  const std::size_t cols = w.cols();
  for (std::size_t k = 0; k < w.rows(); ++k) {
    const double* wk = w.row(k).data();
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += wk[c] * g[c];
    out[k] += acc;
  }
}

/// grad += x^T g (rank-one update of a weight gradient).
inline void accumulate_outer(std::span<const double> x, std::span<const double> g, Matrix& grad) {
  const std::size_t cols = grad.cols();
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double xk = x[k];
    if (xk == 0.0) continue;
    double* gk = grad.row(k).data();
    for (std::size_t c = 0; c < cols; ++c) gk[c] += xk * g[c];
  }
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline void require_width(std::size_t got, std::size_t want, const char* what) {
  if (got != want) throw std::invalid_argument(std::string(what) + ": width mismatch");
}

}  // namespace sublink
