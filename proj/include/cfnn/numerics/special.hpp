#pragma once

namespace cfnn::numerics {

double std_normal_pdf(double z) noexcept;

/// Phi(z) through erfc; absolute error is at the level of double rounding.
/// Infinite arguments give the limits 0 and 1; NaN is rejected.
double std_normal_cdf(double z);

/// Inverse of Phi on (0, 1). Acklam's rational approximation followed by
/// one Newton step against std_normal_cdf.
double std_normal_quantile(double p);

}  // namespace cfnn::numerics
