#include <cstdlib>
#include <string>

#include "cfnn/error.hpp"
#include "cfnn/simd/kernels.hpp"

namespace cfnn::simd {

#if !defined(CFNN_HAVE_AVX2_TU)
const KernelTable* detail::avx2_table() { return nullptr; }
#endif
#if !defined(CFNN_HAVE_NEON_TU)
const KernelTable* detail::neon_table() { return nullptr; }
#endif

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(CFNN_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(CFNN_HAVE_NEON_TU)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* kernels_for(Isa isa) {
  if (!isa_supported(isa)) return nullptr;
  switch (isa) {
    case Isa::scalar:
      return &scalar_kernels();
    case Isa::avx2:
      return detail::avx2_table();
    case Isa::neon:
      return detail::neon_table();
  }
  return nullptr;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

namespace {

const KernelTable& select_table() {
  if (const char* forced = std::getenv("CFNN_SIMD")) {
    const std::string name(forced);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (name == isa_name(isa)) {
        if (const KernelTable* table = kernels_for(isa)) return *table;
      }
    }
  }
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (const KernelTable* table = kernels_for(isa)) return *table;
  }
  return scalar_kernels();
}

}  // namespace

const KernelTable& kernels() {
  static const KernelTable& table = select_table();
  return table;
}

Isa active_isa() { return kernels().isa; }

double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "dot: length mismatch");
  return kernels().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  require(x.size() == y.size(), "axpy: length mismatch");
  kernels().axpy(alpha, x.data(), y.data(), x.size());
}

void gemv(std::span<const double> a, std::size_t rows, std::size_t cols, std::span<const double> x,
          std::span<double> y) {
  require(a.size() == rows * cols && x.size() == cols && y.size() == rows, "gemv: shape mismatch");
  kernels().gemv(a.data(), rows, cols, x.data(), y.data());
}

void gemv_t_acc(std::span<const double> a, std::size_t rows, std::size_t cols, std::span<const double> v,
                std::span<double> y) {
  require(a.size() == rows * cols && v.size() == rows && y.size() == cols, "gemv_t_acc: shape mismatch");
  kernels().gemv_t_acc(a.data(), rows, cols, v.data(), y.data());
}

void ger_acc(std::span<double> a, std::size_t rows, std::size_t cols, double alpha, std::span<const double> u,
             std::span<const double> v) {
  require(a.size() == rows * cols && u.size() == rows && v.size() == cols, "ger_acc: shape mismatch");
  kernels().ger_acc(a.data(), rows, cols, alpha, u.data(), v.data());
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "l1_distance: length mismatch");
  return kernels().l1_distance(a.data(), b.data(), a.size());
}

}  // namespace cfnn::simd
