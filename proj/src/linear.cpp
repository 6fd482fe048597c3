#include "cfnn/linear.hpp"

#include "cfnn/error.hpp"
#include "cfnn/simd/kernels.hpp"

namespace cfnn {

double SampledLinear::score(std::span<const double> x) const {
  require(x.size() == w.size(), "SampledLinear: input dimension " + std::to_string(x.size()) +
                                    " does not match weight dimension " + std::to_string(w.size()));
  return simd::dot(w, x) - c;
}

}  // namespace cfnn
