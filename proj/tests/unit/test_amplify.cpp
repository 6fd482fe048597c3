#include <doctest.h>

#include <cmath>
#include <vector>

#include "cfnn/amplify/amplify.hpp"
#include "cfnn/error.hpp"

using namespace cfnn;
using namespace cfnn::amplify;

namespace {

// Returns class 1 with probability x[0].
class Coin final : public StochasticClassifier {
 public:
  std::size_t num_classes() const override { return 2; }
  std::size_t sample(std::span<const double> x, RngStream& rng) const override { return rng.uniform() < x[0] ? 1 : 0; }
};

class Constant final : public StochasticClassifier {
 public:
  explicit Constant(std::size_t c) : c_(c) {}
  std::size_t num_classes() const override { return 3; }
  std::size_t sample(std::span<const double>, RngStream&) const override { return c_; }

 private:
  std::size_t c_;
};

// P(Bin(n, q) > n/2) for odd n, summed in log space.
double majority_tail(std::size_t n, double q) {
  double total = 0.0;
  for (std::size_t k = n / 2 + 1; k <= n; ++k) {
    const double lg = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    total += std::exp(lg + k * std::log(q) + (n - k) * std::log1p(-q));
  }
  return total;
}

}  // namespace

TEST_CASE("argmax and majority break ties toward the smallest index") {
  const std::vector<double> v{0.2, 0.4, 0.4};
  CHECK(argmax(std::span<const double>(v)) == 1);
  const std::vector<std::size_t> c{3, 3, 1};
  CHECK(argmax(std::span<const std::size_t>(c)) == 0);
  const std::vector<std::size_t> labels{2, 1, 1, 2, 0};
  CHECK(majority(labels, 3) == 1);
  CHECK_THROWS_AS(majority(std::vector<std::size_t>{}, 2), DomainError);
  CHECK_THROWS_AS(majority(std::vector<std::size_t>{5}, 2), DomainError);
}

TEST_CASE("probability estimates") {
  const auto est = ProbabilityEstimate::from_counts({1, 3});
  CHECK(est.n == 4);
  CHECK(est.p_hat[0] == 0.25);
  CHECK(est.p_hat[1] == 0.75);
  CHECK(point_delta(est, 1) == 0.5);
  CHECK(point_delta(est, 0) == -0.5);

  const Constant k(2);
  const std::vector<double> x{0.0};
  const auto e = estimate_probs(k, x, 7, RngStream(1, 1));
  CHECK(e.counts == std::vector<std::size_t>{0, 0, 7});
  CHECK(amplified_predict(k, x, 7, RngStream(1, 1)) == 2);
  CHECK_THROWS_AS(estimate_probs(k, x, 0, RngStream(1, 1)), DomainError);
}

TEST_CASE("estimates are reproducible from the point stream") {
  const Coin coin;
  const std::vector<double> x{0.37};
  const RngStream s(5, 6);
  CHECK(estimate_probs(coin, x, 999, s).counts == estimate_probs(coin, x, 999, s).counts);
  CHECK(estimate_probs(coin, x, 999, s).counts != estimate_probs(coin, x, 999, s.split(1)).counts);
}

TEST_CASE("majority accuracy matches the binomial tail") {
  const Coin coin;
  const std::size_t points = 4000;
  for (const double q : {0.55, 0.6, 0.7}) {
    Dataset data(points, LabeledPoint{{q}, 1});
    for (const std::size_t n : {1u, 9u, 31u}) {
      const double ra = empirical_random_accuracy(coin, data, n, RngStream(7, n));
      const double want = majority_tail(n, q);
      CHECK(std::fabs(ra - want) <= 4.0 * std::sqrt(want * (1.0 - want) / points) + 1e-12);
    }
  }
}

TEST_CASE("random accuracy rises with n when every point has a margin") {
  const Coin coin;
  Dataset data;
  RngStream rng(2, 2);
  for (int i = 0; i < 500; ++i) {
    const double q = 0.6 + 0.3 * rng.uniform();
    data.push_back({{i % 2 ? q : 1.0 - q}, static_cast<std::size_t>(i % 2)});
  }
  const double ra1 = empirical_random_accuracy(coin, data, 1, RngStream(3, 0));
  const double ra101 = empirical_random_accuracy(coin, data, 101, RngStream(3, 1));
  const double ra1001 = empirical_random_accuracy(coin, data, 1001, RngStream(3, 2));
  CHECK(ra1 < ra101);
  CHECK(ra101 <= ra1001);
  CHECK(ra1001 > 0.99);
}

TEST_CASE("delta curve") {
  const Coin coin;
  Dataset data;
  for (int i = 0; i < 200; ++i) data.push_back({{0.3 + 0.002 * i}, 1});
  const RngStream s(4, 4);
  const auto curve = delta_curve(coin, data, 301, s);
  REQUIRE(curve.delta.size() == data.size());
  for (std::size_t k = 1; k < curve.delta.size(); ++k) CHECK(curve.delta[k - 1] >= curve.delta[k]);
  CHECK(curve.positive_fraction == empirical_random_accuracy(coin, data, 301, s));
  std::size_t positive = 0;
  for (double d : curve.delta) positive += d > 0.0;
  CHECK(static_cast<double>(positive) / data.size() == curve.positive_fraction);
}

TEST_CASE("mean aggregation") {
  CHECK(mean_aggregate({{0.9, 0.1}, {0.2, 0.8}, {0.2, 0.8}}) == 1);
  CHECK(mean_aggregate({{0.5, 0.5}}) == 0);
  CHECK_THROWS_AS(mean_aggregate({}), DomainError);
  CHECK_THROWS_AS(mean_aggregate({{0.5, 0.5}, {1.0}}), DomainError);
}

TEST_CASE("indicator MSE") {
  const Coin coin;
  const TruthFn truth = [](std::span<const double> x) { return x[0] >= 0.5 ? 1 : -1; };
  // x[0] in {0, 1}: the coin is deterministic and always right.
  const PointSampler exact = [](RngStream& rng) { return std::vector<double>{rng.uniform() < 0.5 ? 0.0 : 1.0}; };
  CHECK(empirical_mse(coin, truth, exact, 1, 500, RngStream(1, 0)) == 0.0);

  // x[0] = 0.8 with truth +1: single-sample mismatch rate is 0.2.
  const PointSampler fixed = [](RngStream&) { return std::vector<double>{0.8}; };
  const double m = empirical_mse(coin, truth, fixed, 1, 20000, RngStream(1, 1));
  CHECK(std::fabs(m - 0.2) < 4.0 * std::sqrt(0.16 / 20000));
  const double m4 = empirical_mse(coin, truth, fixed, 1, 20000, RngStream(1, 1), MseOptions{true});
  CHECK(m4 == 4.0 * m);
  CHECK(empirical_mse(coin, truth, fixed, 101, 2000, RngStream(1, 2)) < m);
  CHECK_THROWS_AS(empirical_mse(coin, truth, fixed, 10, 10, RngStream(1, 1)), DomainError);
}
