#include "cfnn/numerics/special.hpp"

#include <cmath>
#include <numbers>

#include "cfnn/error.hpp"

namespace cfnn::numerics {
namespace {

// Acklam's coefficients for the central and tail rational approximations.
constexpr double kA[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                         1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
constexpr double kB[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                         6.680131188771972e+01,  -1.328068155288572e+01};
constexpr double kC[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                         -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
constexpr double kD[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                         3.754408661907416e+00};

constexpr double kLowBreak = 0.02425;

double acklam(double p) {
  if (p < kLowBreak) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
           ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
  }
  if (p > 1.0 - kLowBreak) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
           ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r + kA[5]) * q /
         (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r + 1.0);
}

}  // namespace

double std_normal_pdf(double z) noexcept {
  return std::exp(-0.5 * z * z) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

double std_normal_cdf(double z) {
  require(!std::isnan(z), "std_normal_cdf: argument is NaN");
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double std_normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, "std_normal_quantile: p must lie strictly inside (0, 1)");
  if (p == 0.5) return 0.0;
  double z = acklam(p);
  // In the upper half, work with the complement so the residual keeps its precision.
  const double residual = p < 0.5 ? std_normal_cdf(z) - p
                                  : (1.0 - p) - 0.5 * std::erfc(z / std::numbers::sqrt2);
  // Both branches compute Phi(z) - p.
  const double density = std_normal_pdf(z);
  if (density > 0.0) z -= residual / density;
  return z;
}

}  // namespace cfnn::numerics
