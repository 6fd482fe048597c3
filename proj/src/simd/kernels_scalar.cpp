#include <cmath>

#include "cfnn/simd/kernels.hpp"

namespace cfnn::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_scalar(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_scalar(a + r * cols, x, cols);
}

void gemv_t_acc_scalar(const double* a, std::size_t rows, std::size_t cols, const double* v, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (v[r] != 0.0) axpy_scalar(v[r], a + r * cols, y, cols);
  }
}

void ger_acc_scalar(double* a, std::size_t rows, std::size_t cols, double alpha, const double* u,
                    const double* v) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double s = alpha * u[r];
    if (s != 0.0) axpy_scalar(s, v, a + r * cols, cols);
  }
}

double l1_distance_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i] - b[i]);
  return acc;
}

constexpr KernelTable kScalarTable{
    Isa::scalar, dot_scalar, axpy_scalar, gemv_scalar, gemv_t_acc_scalar, ger_acc_scalar, l1_distance_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() { return kScalarTable; }

}  // namespace cfnn::simd
