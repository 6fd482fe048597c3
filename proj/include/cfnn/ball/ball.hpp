#pragma once

// Randomized linear classifiers for the ball {x : |x| <= R}.
//
// Ball construction: draw u ~ N(0, I_d) and t ~ Ber(alpha), output
// sign(t (u.x - b - 1) + 1). Outside the ball the +1 label wins with
// probability 1 - alpha Phi(b / |x|) > 1/2, inside it loses.
//
// Tangent construction (d = 2): draw theta ~ U[0, 2 pi] and t ~ Ber(alpha),
// output sign((cos theta, sin theta).x - b) when t = 1 and +1 otherwise.

#include <cstddef>
#include <span>
#include <vector>

#include "cfnn/amplify/amplify.hpp"
#include "cfnn/linear.hpp"
#include "cfnn/numerics/rng.hpp"

namespace cfnn::ball {

using numerics::RngStream;

double solve_ball_bias(double R, double alpha);

struct BallParams {
  std::size_t d = 0;
  double R = 0.0;
  double alpha = 0.0;
  double b = 0.0;

  static BallParams make(std::size_t d, double R, double alpha);
};

enum class TangentBiasRule {
  /// b = R cos(pi (1 - 1/(2 alpha))); p1 is exactly 1/2 on the sphere |x| = R.
  surface_half,
  /// b = R cos((pi/2)(1 - 1/(2 alpha))) as printed in the source derivation.
  /// p1(R) = 3/4 - alpha/2 < 1/2 with this choice, so points just outside R
  /// are misclassified. Kept for comparison only.
  printed,
};

double solve_tangent_bias(double R, double alpha, TangentBiasRule rule = TangentBiasRule::surface_half);

struct TangentParams {
  double R = 0.0;
  double alpha = 0.0;
  double b = 0.0;

  static TangentParams make(double R, double alpha, TangentBiasRule rule = TangentBiasRule::surface_half);
};

/// Draws u then t. A t = 0 draw is encoded as w = 0, c = -1.
SampledLinear sample_ball_classifier(const BallParams& p, RngStream& rng);
/// Draws theta then t.
SampledLinear sample_tangent_classifier(const TangentParams& p, RngStream& rng);

double analytic_p1_ball(const BallParams& p, double norm_x);
double analytic_p1_tangent(const TangentParams& p, double norm_x);

/// Smallest margin |p1 - 1/2| over radii outside (R - phi, R + phi).
double epsilon_p(const BallParams& p, double phi);

/// Smallest odd n >= ln(1/beta) / (2 eps_p^2), at least 1.
std::size_t hoeffding_samples(double beta, double eps_p);

/// Majority size for an indicator-MSE of at most eps given margin eps_p.
std::size_t mse_bound_samples_for_margin(double eps, double eps_p);
std::size_t mse_bound_samples(double eps, const BallParams& p, double phi);

/// Ball classifier as a binary StochasticClassifier (class 1 = outside).
class BallClassifier final : public amplify::StochasticClassifier {
 public:
  explicit BallClassifier(BallParams params) : params_(params) {}

  const BallParams& params() const { return params_; }
  std::size_t num_classes() const override { return 2; }
  std::size_t sample(std::span<const double> x, RngStream& rng) const override;
  std::optional<std::vector<double>> probabilities(std::span<const double> x) const override;
  /// Batched: all draws are materialised into an n x d matrix and scored
  /// with one matrix-vector product.
  std::vector<std::size_t> sample_counts(std::span<const double> x, std::size_t n,
                                         const RngStream& point_stream) const override;

 private:
  BallParams params_;
};

class TangentClassifier final : public amplify::StochasticClassifier {
 public:
  explicit TangentClassifier(TangentParams params) : params_(params) {}

  const TangentParams& params() const { return params_; }
  std::size_t num_classes() const override { return 2; }
  std::size_t sample(std::span<const double> x, RngStream& rng) const override;
  std::optional<std::vector<double>> probabilities(std::span<const double> x) const override;

 private:
  TangentParams params_;
};

/// A shell term eps (h^a_n - h^b_n) of the two-layer combiner.
struct Shell {
  double a = 0.0;
  double b = 0.0;
  int eps = 1;
};

/// x -> sum_j eps_j (h^{a_j}_n(x) - h^{b_j}_n(x)), each h^r_n being the
/// +-1 majority of n ball classifiers of radius r. Neuron k (2j for a_j,
/// 2j+1 for b_j) draws from split(rng, k).
class GtildeCombiner {
 public:
  GtildeCombiner(std::vector<Shell> shells, std::size_t d, double alpha, std::size_t n);

  double operator()(std::span<const double> x, const RngStream& rng) const;

  const std::vector<Shell>& shells() const { return shells_; }
  std::size_t samples_per_neuron() const { return n_; }

 private:
  std::vector<Shell> shells_;
  std::vector<BallClassifier> neurons_;
  std::size_t n_;
};

GtildeCombiner build_gtilde_combiner(std::vector<Shell> shells, std::size_t d, double alpha, std::size_t n);

}  // namespace cfnn::ball
