#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cfnn::train {

/// Row-major dense matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  static Matrix from_row(std::span<const double> row);

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

/// Y = X W^T + b for W stored as out x in.
Matrix affine(const Matrix& x, std::span<const double> w, std::span<const double> b, std::size_t out);

/// Softmax of logits / tau, computed stably.
std::vector<double> softmax(std::span<const double> logits, double tau = 1.0);

}  // namespace cfnn::train
