#pragma once

#include <cstddef>
#include <vector>

#include "cfnn/numerics/rng.hpp"

namespace cfnn::numerics {

std::vector<double> sample_std_normal_vec(RngStream& rng, std::size_t dim);

/// Returns 1 with probability alpha.
int sample_bernoulli(RngStream& rng, double alpha);

double sample_uniform(RngStream& rng, double lo, double hi);

/// Index drawn from the (unnormalised, nonnegative) weights.
std::size_t sample_categorical(RngStream& rng, const std::vector<double>& weights);

/// Uniform direction on the unit sphere in R^dim.
std::vector<double> sample_unit_vector(RngStream& rng, std::size_t dim);

}  // namespace cfnn::numerics
