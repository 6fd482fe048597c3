#pragma once

// Dense double-precision inner loops used by the Monte Carlo evaluators and
// the training core. Every kernel has a scalar reference implementation; on
// x86-64 an AVX2+FMA variant and on AArch64 a NEON variant are selected at
// runtime. All matrices are row-major.

#include <cstddef>
#include <span>
#include <string_view>

namespace cfnn::simd {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = A x, A is rows x cols
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
  // y += A^T v, A is rows x cols, v has rows entries, y has cols entries
  void (*gemv_t_acc)(const double* a, std::size_t rows, std::size_t cols, const double* v, double* y);
  // A += alpha * u v^T
  void (*ger_acc)(double* a, std::size_t rows, std::size_t cols, double alpha, const double* u,
                  const double* v);
  // sum_i |a[i] - b[i]|
  double (*l1_distance)(const double* a, const double* b, std::size_t n);
};

/// Kernels for the ISA chosen at startup. The choice is the best ISA the CPU
/// supports unless the environment variable CFNN_SIMD names another
/// supported one ("scalar", "avx2", "neon").
const KernelTable& kernels();

/// Table for a specific ISA, or nullptr when this build/CPU lacks it.
const KernelTable* kernels_for(Isa isa);

bool isa_supported(Isa isa);
Isa active_isa();
std::string_view isa_name(Isa isa);

const KernelTable& scalar_kernels();

// Span front-ends over the active table. Sizes are checked.
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void gemv(std::span<const double> a, std::size_t rows, std::size_t cols, std::span<const double> x,
          std::span<double> y);
void gemv_t_acc(std::span<const double> a, std::size_t rows, std::size_t cols, std::span<const double> v,
                std::span<double> y);
void ger_acc(std::span<double> a, std::size_t rows, std::size_t cols, double alpha, std::span<const double> u,
             std::span<const double> v);
double l1_distance(std::span<const double> a, std::span<const double> b);

namespace detail {
const KernelTable* avx2_table();
const KernelTable* neon_table();
}  // namespace detail

}  // namespace cfnn::simd
