#include "cfnn/numerics/sampling.hpp"

#include <cmath>

#include "cfnn/error.hpp"

namespace cfnn::numerics {

std::vector<double> sample_std_normal_vec(RngStream& rng, std::size_t dim) {
  require(dim >= 1, "sample_std_normal_vec: dimension must be at least 1");
  std::vector<double> out(dim);
  for (auto& v : out) v = rng.normal();
  return out;
}

int sample_bernoulli(RngStream& rng, double alpha) {
  require(alpha >= 0.0 && alpha <= 1.0, "sample_bernoulli: alpha must lie in [0, 1]");
  return rng.uniform() < alpha ? 1 : 0;
}

double sample_uniform(RngStream& rng, double lo, double hi) {
  require(lo <= hi, "sample_uniform: empty interval");
  return lo + (hi - lo) * rng.uniform();
}

std::size_t sample_categorical(RngStream& rng, const std::vector<double>& weights) {
  require(!weights.empty(), "sample_categorical: no categories");
  double total = 0.0;
  for (double w : weights) {
    require(w >= 0.0 && std::isfinite(w), "sample_categorical: weights must be finite and nonnegative");
    total += w;
  }
  require(total > 0.0, "sample_categorical: weights sum to zero");
  const double target = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return i;
  }
  // Rounding can leave target == total; fall back to the last positive weight.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return i;
  }
  return weights.size() - 1;
}

std::vector<double> sample_unit_vector(RngStream& rng, std::size_t dim) {
  require(dim >= 1, "sample_unit_vector: dimension must be at least 1");
  for (;;) {
    auto v = sample_std_normal_vec(rng, dim);
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    if (norm2 > 0.0) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (auto& x : v) x *= inv;
      return v;
    }
  }
}

}  // namespace cfnn::numerics
