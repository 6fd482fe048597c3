#pragma once

// Separating the graph of a K-Lipschitz function f' in probability.
//
// Points live in R^{d+1} as q = (x, y). The target label of q is
// sign(f'(x) - y): +1 below the graph, -1 above it. A sample draws an apex
// t ~ zeta, sets p = (t, f'(t)), and returns a classifier built around p.
// Classifiers report a "side" (+1 above p, -1 below); the label is its
// negation.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cfnn/amplify/amplify.hpp"
#include "cfnn/linear.hpp"
#include "cfnn/numerics/rng.hpp"

namespace cfnn::cone {

using numerics::RngStream;
using Function = std::function<double(std::span<const double>)>;
using Sampler = std::function<std::vector<double>(RngStream&)>;

struct TargetFunction {
  std::string name;
  Function f;
  double K = 1.0;
};

/// "zero", "linear" (sum of coordinates), "sin" (sin x_1) or "abs-saw"
/// (unit-slope triangle wave in x_1 with period 4). Each comes with its
/// exact Lipschitz constant in the L1 norm.
TargetFunction target_function(const std::string& name);
std::vector<std::string> target_function_names();

/// zeta = N(0, scale^2 I_d).
Sampler normal_zeta(std::size_t d, double scale);

struct ConeDistribution {
  double K = 1.0;
  Function f_prime;
  Sampler zeta;
  std::size_t d = 1;

  /// Validates K and d and spot-checks |f'(s) - f'(t)| <= K |s - t|_1 on
  /// 1000 pairs (half drawn from zeta, half as close neighbours).
  static ConeDistribution make(double K, Function f_prime, Sampler zeta, std::size_t d);
};

/// K |q_{1..d} - p_{1..d}|_1 <= |q_{d+1} - p_{d+1}|; the boundary is inside.
bool cone_contains(std::span<const double> p, double K, std::span<const double> q);

/// h^{p+} (branch +1) or h^{p-} (branch -1) with equal probability. The
/// affine form is (+-K, 1).(x, y) - (+-K x_p + y_p), so +1 means "above".
SampledLinear sample_hp(std::span<const double> p, double K, RngStream& rng);

/// One draw from the separator distribution.
class ConeSample {
 public:
  enum class Kind { lines, l1_cone };

  ConeSample(Kind kind, std::vector<double> apex, double K, int branch);

  /// +1 when q is judged above the graph.
  int side(std::span<const double> q) const;
  /// Predicted sign(f'(x) - y).
  int label(std::span<const double> q) const { return -side(q); }

  Kind kind() const { return kind_; }
  const std::vector<double>& apex() const { return apex_; }
  int branch() const { return branch_; }

 private:
  Kind kind_;
  std::vector<double> apex_;
  double K_;
  int branch_;
};

/// d = 1 draws one of the two lines through p. For d >= 2 the lines are
/// replaced by the L1 cone at p with a fair orientation coin: inside the
/// cone the side relative to p is returned, outside the coin decides.
ConeSample sample_cone_classifier(const ConeDistribution& cd, RngStream& rng);

/// Same as above with the d = 2 style L1 cone forced for d = 1 as well.
ConeSample sample_l1_cone_classifier(const ConeDistribution& cd, RngStream& rng);

/// One draw of the y = 0 slice: a +-1 guess of sign(f'(x)).
int classify_in_probability(const ConeDistribution& cd, std::span<const double> x, RngStream& rng);

/// K (t_1, ..., t_d, f'(t)).
std::vector<double> generator_T(std::span<const double> t, const ConeDistribution& cd);

/// Two-layer ReLU network recognising the L1 cone at p.
struct ConeNetworkParams {
  std::vector<double> p;
  double K = 1.0;
  /// 2(d+1) rows of d+1 weights, row-major.
  std::vector<double> weights;
  std::vector<double> biases;
  /// +1 for the pair on the last coordinate, -1 for the rest.
  std::vector<int> output_signs;

  std::size_t input_dim() const { return p.size(); }
  /// Rectifiers plus the output unit, as built.
  std::size_t units_built() const { return biases.size() + 1; }
  /// The "2d + 1" count quoted for this construction.
  std::size_t units_quoted() const { return 2 * (p.size() - 1) + 1; }
};

ConeNetworkParams l1cone_network_params(std::span<const double> p, double K);

int eval_l1cone_network(const ConeNetworkParams& params, std::span<const double> q);

/// Binary classifier on q = (x, y); class 1 is the +1 label.
class ConeSeparator final : public amplify::StochasticClassifier {
 public:
  explicit ConeSeparator(ConeDistribution cd) : cd_(std::move(cd)) {}
  std::size_t num_classes() const override { return 2; }
  std::size_t sample(std::span<const double> q, RngStream& rng) const override;
  const ConeDistribution& distribution() const { return cd_; }

 private:
  ConeDistribution cd_;
};

/// Binary classifier on x in R^d through the y = 0 slice.
class SliceClassifier final : public amplify::StochasticClassifier {
 public:
  explicit SliceClassifier(ConeDistribution cd) : cd_(std::move(cd)) {}
  std::size_t num_classes() const override { return 2; }
  std::size_t sample(std::span<const double> x, RngStream& rng) const override;

 private:
  ConeDistribution cd_;
};

}  // namespace cfnn::cone
