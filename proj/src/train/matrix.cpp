#include "cfnn/train/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "cfnn/error.hpp"
#include "cfnn/simd/kernels.hpp"

namespace cfnn::train {

Matrix Matrix::from_row(std::span<const double> row) {
  Matrix m(1, row.size());
  std::copy(row.begin(), row.end(), m.data.begin());
  return m;
}

Matrix affine(const Matrix& x, std::span<const double> w, std::span<const double> b, std::size_t out) {
  require(w.size() == out * x.cols && b.size() == out, "affine: shape mismatch");
  Matrix y(x.rows, out);
  const auto& k = simd::kernels();
  for (std::size_t r = 0; r < x.rows; ++r) {
    double* yr = y.data.data() + r * out;
    k.gemv(w.data(), out, x.cols, x.data.data() + r * x.cols, yr);
    for (std::size_t o = 0; o < out; ++o) yr[o] += b[o];
  }
  return y;
}

std::vector<double> softmax(std::span<const double> logits, double tau) {
  require(tau > 0.0, "softmax temperature must be positive");
  require(!logits.empty(), "softmax of an empty vector");
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp((logits[k] - top) / tau);
    total += out[k];
  }
  for (double& v : out) v /= total;
  return out;
}

}  // namespace cfnn::train
