#include "cfnn/ball/ball.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cfnn/error.hpp"
#include "cfnn/numerics/sampling.hpp"
#include "cfnn/numerics/special.hpp"
#include "cfnn/simd/kernels.hpp"

namespace cfnn::ball {

namespace {

void check_radius_alpha(double R, double alpha) {
  require(std::isfinite(R) && R > 0.0, "radius must be positive, got " + std::to_string(R));
  require(alpha > 0.5 && alpha < 1.0,
          "alpha must lie strictly between 1/2 and 1, got " + std::to_string(alpha));
}

void check_norm(double norm_x) {
  require(!std::isnan(norm_x) && norm_x >= 0.0, "norm must be nonnegative, got " + std::to_string(norm_x));
}

// The ceiling tolerates round-off that lands just above an integer.
std::size_t odd_ceiling(double value) {
  double n = std::ceil(value - 1e-9);
  if (n < 1.0) n = 1.0;
  auto out = static_cast<std::size_t>(n);
  if (out % 2 == 0) ++out;
  return out;
}

}  // namespace

double solve_ball_bias(double R, double alpha) {
  check_radius_alpha(R, alpha);
  return R * numerics::std_normal_quantile(1.0 / (2.0 * alpha));
}

BallParams BallParams::make(std::size_t d, double R, double alpha) {
  require(d >= 1, "dimension must be at least 1");
  return BallParams{d, R, alpha, solve_ball_bias(R, alpha)};
}

double solve_tangent_bias(double R, double alpha, TangentBiasRule rule) {
  check_radius_alpha(R, alpha);
  const double angle = std::numbers::pi * (1.0 - 1.0 / (2.0 * alpha));
  return rule == TangentBiasRule::surface_half ? R * std::cos(angle) : R * std::cos(0.5 * angle);
}

TangentParams TangentParams::make(double R, double alpha, TangentBiasRule rule) {
  return TangentParams{R, alpha, solve_tangent_bias(R, alpha, rule)};
}

SampledLinear sample_ball_classifier(const BallParams& p, RngStream& rng) {
  SampledLinear h;
  h.provenance.u = numerics::sample_std_normal_vec(rng, p.d);
  h.provenance.t = numerics::sample_bernoulli(rng, p.alpha);
  if (h.provenance.t == 1) {
    h.w = h.provenance.u;
    h.c = p.b;
  } else {
    h.w.assign(p.d, 0.0);
    h.c = -1.0;
  }
  return h;
}

SampledLinear sample_tangent_classifier(const TangentParams& p, RngStream& rng) {
  SampledLinear h;
  h.provenance.theta = numerics::sample_uniform(rng, 0.0, 2.0 * std::numbers::pi);
  h.provenance.t = numerics::sample_bernoulli(rng, p.alpha);
  if (h.provenance.t == 1) {
    h.w = {std::cos(h.provenance.theta), std::sin(h.provenance.theta)};
    h.c = p.b;
  } else {
    h.w = {0.0, 0.0};
    h.c = -1.0;
  }
  return h;
}

double analytic_p1_ball(const BallParams& p, double norm_x) {
  check_norm(norm_x);
  if (norm_x == 0.0) return 1.0 - p.alpha;
  return 1.0 - p.alpha * numerics::std_normal_cdf(p.b / norm_x);
}

double analytic_p1_tangent(const TangentParams& p, double norm_x) {
  check_norm(norm_x);
  if (norm_x < p.b) return 1.0 - p.alpha;
  return (1.0 - p.alpha) + p.alpha / std::numbers::pi * std::acos(std::min(1.0, p.b / norm_x));
}

double epsilon_p(const BallParams& p, double phi) {
  require(phi > 0.0 && phi < p.R, "phi must lie in (0, R), got " + std::to_string(phi));
  const double outer = 0.5 - p.alpha * numerics::std_normal_cdf(p.b / (p.R + phi));
  const double inner = p.alpha * numerics::std_normal_cdf(p.b / (p.R - phi)) - 0.5;
  return std::min(outer, inner);
}

std::size_t hoeffding_samples(double beta, double eps_p) {
  require(beta > 0.0 && beta <= 1.0, "beta must lie in (0, 1], got " + std::to_string(beta));
  require(eps_p > 0.0, "eps_p must be positive, got " + std::to_string(eps_p));
  return odd_ceiling(std::log(1.0 / beta) / (2.0 * eps_p * eps_p));
}

std::size_t mse_bound_samples_for_margin(double eps, double eps_p) {
  require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1), got " + std::to_string(eps));
  const double beta = (eps / 2.0) / (1.0 - eps / 2.0);
  return hoeffding_samples(beta, eps_p);
}

std::size_t mse_bound_samples(double eps, const BallParams& p, double phi) {
  return mse_bound_samples_for_margin(eps, epsilon_p(p, phi));
}

std::size_t BallClassifier::sample(std::span<const double> x, RngStream& rng) const {
  return class_of_sign(sample_ball_classifier(params_, rng).label(x));
}

std::optional<std::vector<double>> BallClassifier::probabilities(std::span<const double> x) const {
  const double p1 = analytic_p1_ball(params_, std::sqrt(simd::dot(x, x)));
  return std::vector<double>{1.0 - p1, p1};
}

std::vector<std::size_t> BallClassifier::sample_counts(std::span<const double> x, std::size_t n,
                                                       const RngStream& point_stream) const {
  const std::size_t d = params_.d;
  require(x.size() == d, "ball classifier expects dimension " + std::to_string(d));
  std::vector<double> u(n * d);
  std::vector<int> t(n);
  for (std::size_t j = 0; j < n; ++j) {
    RngStream draw = point_stream.split(j);
    for (std::size_t k = 0; k < d; ++k) u[j * d + k] = draw.normal();
    t[j] = numerics::sample_bernoulli(draw, params_.alpha);
  }
  std::vector<double> scores(n);
  simd::gemv(u, n, d, x, scores);
  std::vector<std::size_t> counts(2, 0);
  for (std::size_t j = 0; j < n; ++j) {
    const int label = t[j] == 1 ? sign_of(scores[j] - params_.b) : 1;
    ++counts[class_of_sign(label)];
  }
  return counts;
}

std::size_t TangentClassifier::sample(std::span<const double> x, RngStream& rng) const {
  require(x.size() == 2, "tangent classifier is defined in two dimensions");
  return class_of_sign(sample_tangent_classifier(params_, rng).label(x));
}

std::optional<std::vector<double>> TangentClassifier::probabilities(std::span<const double> x) const {
  require(x.size() == 2, "tangent classifier is defined in two dimensions");
  const double p1 = analytic_p1_tangent(params_, std::hypot(x[0], x[1]));
  return std::vector<double>{1.0 - p1, p1};
}

GtildeCombiner::GtildeCombiner(std::vector<Shell> shells, std::size_t d, double alpha, std::size_t n)
    : shells_(std::move(shells)), n_(n) {
  require(!shells_.empty(), "combiner needs at least one shell");
  require(n % 2 == 1, "combiner needs an odd per-neuron sample count");
  for (const auto& s : shells_) {
    require(s.a > 0.0 && s.b > 0.0, "shell radii must be positive");
    require(s.eps == 1 || s.eps == -1, "shell sign must be +1 or -1");
    neurons_.emplace_back(BallParams::make(d, s.a, alpha));
    neurons_.emplace_back(BallParams::make(d, s.b, alpha));
  }
}

double GtildeCombiner::operator()(std::span<const double> x, const RngStream& rng) const {
  double total = 0.0;
  for (std::size_t j = 0; j < shells_.size(); ++j) {
    const int ha = sign_of_class(amplify::amplified_predict(neurons_[2 * j], x, n_, rng.split(2 * j)));
    const int hb = sign_of_class(amplify::amplified_predict(neurons_[2 * j + 1], x, n_, rng.split(2 * j + 1)));
    total += shells_[j].eps * (ha - hb);
  }
  return total;
}

GtildeCombiner build_gtilde_combiner(std::vector<Shell> shells, std::size_t d, double alpha, std::size_t n) {
  return GtildeCombiner(std::move(shells), d, alpha, n);
}

}  // namespace cfnn::ball
