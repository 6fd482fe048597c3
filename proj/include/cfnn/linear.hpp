#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace cfnn {

/// sign with sign(0) = +1.
inline int sign_of(double v) noexcept { return v >= 0.0 ? 1 : -1; }

// Binary classifiers report class indices; index 1 is the +1 label.
inline std::size_t class_of_sign(int s) noexcept { return s > 0 ? 1 : 0; }
inline int sign_of_class(std::size_t c) noexcept { return c == 1 ? 1 : -1; }

/// Raw draws that produced a SampledLinear. Fields a construction does not
/// use keep their defaults.
struct Provenance {
  std::vector<double> u;
  int t = 1;
  double theta = std::nan("");
  int branch = 0;
};

/// Affine classifier x -> sign(w.x - c).
struct SampledLinear {
  std::vector<double> w;
  double c = 0.0;
  Provenance provenance;

  double score(std::span<const double> x) const;
  int label(std::span<const double> x) const { return sign_of(score(x)); }
};

}  // namespace cfnn
