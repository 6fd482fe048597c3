#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cfnn/amplify/amplify.hpp"
#include "cfnn/cone/cone.hpp"
#include "cfnn/error.hpp"

using namespace cfnn;
using namespace cfnn::cone;
using numerics::RngStream;

namespace {

using V = std::vector<double>;

// Fraction of n separator samples at q that return +1.
double plus_rate(const ConeDistribution& cd, const V& q, std::size_t n, const RngStream& rng) {
  const ConeSeparator sep(cd);
  return amplify::estimate_probs(sep, q, n, rng).p_hat[1];
}

double sigma4(std::size_t n) { return 4.0 * std::sqrt(0.25 / static_cast<double>(n)); }

ConeDistribution named(const std::string& name, double scale, std::size_t d = 1) {
  const auto t = target_function(name);
  return ConeDistribution::make(t.K, t.f, normal_zeta(d, scale), d);
}

}  // namespace

TEST_CASE("cone membership") {
  CHECK(cone_contains(V{0, 0}, 1.0, V{1, 2}));
  CHECK_FALSE(cone_contains(V{0, 0}, 1.0, V{2, 1}));
  CHECK(cone_contains(V{0, 0}, 1.0, V{0, 0}));
  CHECK(cone_contains(V{0, 0}, 1.0, V{1, 1}));
  CHECK(cone_contains(V{1, 2, 3}, 2.0, V{2, 2, 6}));
  CHECK_FALSE(cone_contains(V{1, 2, 3}, 2.0, V{2, 3, 6}));
  CHECK_THROWS_AS(cone_contains(V{0, 0}, 1.0, V{1, 2, 3}), DomainError);
  CHECK_THROWS_AS(cone_contains(V{0, 0}, 0.0, V{1, 2}), DomainError);
}

TEST_CASE("two-line classifiers through an apex") {
  RngStream rng(1, 1);
  int plus = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto h = sample_hp(V{0, 0}, 1.0, rng);
    plus += h.provenance.branch == 1;
    CHECK(h.label(V{1, 2}) == 1);
    const int outside = h.label(V{2, 1});
    CHECK(outside == h.provenance.branch);
  }
  CHECK(std::fabs(plus / double(n) - 0.5) <= 0.015);
  CHECK_THROWS_AS(sample_hp(V{0, 0, 0}, 1.0, rng), DomainError);
}

TEST_CASE("lines and L1 cone coincide in distribution for d = 1") {
  RngStream rng(2, 2);
  for (int i = 0; i < 2000; ++i) {
    V apex{rng.normal(), rng.normal()};
    const double K = 0.2 + 3.0 * rng.uniform();
    const V q{rng.normal() * 2, rng.normal() * 2};
    double lines = 0, cone = 0;
    for (int branch : {-1, 1}) {
      lines += ConeSample(ConeSample::Kind::lines, apex, K, branch).side(q) == 1;
      cone += ConeSample(ConeSample::Kind::l1_cone, apex, K, branch).side(q) == 1;
    }
    CHECK(lines == cone);
  }
}

TEST_CASE("cones with an apex on the graph") {
  // Inside the cone every sample is right; outside the branches split evenly.
  const double K = 1.0;
  const V apex{0.3, std::sin(0.3)};
  for (const auto kind : {ConeSample::Kind::lines, ConeSample::Kind::l1_cone}) {
    for (int branch : {-1, 1}) {
      const ConeSample s(kind, apex, K, branch);
      CHECK(s.label(V{0.3, 2.0}) == -1);   // far above: f - y < 0
      CHECK(s.label(V{0.3, -2.0}) == 1);   // far below
    }
    const V outside{3.0, std::sin(0.3)};
    const int a = ConeSample(kind, apex, K, 1).label(outside);
    const int b = ConeSample(kind, apex, K, -1).label(outside);
    CHECK(a == -b);
  }
}

TEST_CASE("separation in probability") {
  const std::size_t n = 20001;
  const auto flat = named("zero", 1.0);
  // above the graph the label says f - y < 0
  CHECK(1.0 - plus_rate(flat, V{0, 1}, n, RngStream(3, 0)) - 0.5 > sigma4(n));
  CHECK(std::fabs(plus_rate(flat, V{0, 0}, n, RngStream(3, 1)) - 0.5) <= 0.014);
  const auto sine = named("sin", 2.0);
  CHECK(plus_rate(sine, V{0, -0.5}, n, RngStream(3, 2)) - 0.5 > sigma4(n));
  // f = 0 is symmetric about y = 0
  for (double y : {0.25, 0.5, 1.0}) {
    const double up = plus_rate(flat, V{0.7, y}, n, RngStream(4, 0));
    const double down = plus_rate(flat, V{0.7, -y}, n, RngStream(4, 1));
    CHECK(std::fabs(up - (1.0 - down)) <= 2.0 * sigma4(n));
  }
  // On-graph neutrality across functions and dimensions. Linear pieces with
  // slope exactly K put the graph on cone boundaries with positive mass, so
  // the slope bound is given some slack here.
  for (const auto& name : target_function_names()) {
    for (std::size_t d : {1u, 3u}) {
      const auto t = target_function(name);
      const auto cd = ConeDistribution::make(1.5 * t.K, t.f, normal_zeta(d, 2.0), d);
      RngStream pick(5, d);
      V q(d);
      for (double& v : q) v = pick.normal();
      q.push_back(cd.f_prime(std::span<const double>(q.data(), d)));
      CHECK(std::fabs(plus_rate(cd, q, n, RngStream(6, d)) - 0.5) <= sigma4(n));
    }
  }
}

TEST_CASE("a tight slope bound biases on-graph points") {
  const auto lin = named("linear", 2.0);
  const double rate = plus_rate(lin, V{0.4, 0.4}, 20001, RngStream(3, 9));
  CHECK(std::fabs(rate - 0.5) > sigma4(20001));
}

TEST_CASE("slice classification") {
  const auto lin = named("linear", 2.0);
  const SliceClassifier slice(lin);
  CHECK(amplify::amplified_predict(slice, V{2.0}, 2001, RngStream(7, 0)) == 1);
  CHECK(amplify::amplified_predict(slice, V{-2.0}, 2001, RngStream(7, 1)) == 0);
  const SliceClassifier sine(named("sin", 2.0));
  CHECK(amplify::amplified_predict(sine, V{std::numbers::pi / 2}, 2001, RngStream(7, 2)) == 1);
  CHECK(amplify::amplified_predict(sine, V{-std::numbers::pi / 2}, 2001, RngStream(7, 3)) == 0);
  RngStream rng(7, 4);
  CHECK_THROWS_AS(classify_in_probability(lin, V{1.0, 2.0}, rng), DomainError);
}

TEST_CASE("generator map") {
  const auto zero = ConeDistribution::make(2.0, target_function("zero").f, normal_zeta(1, 1.0), 1);
  CHECK(generator_T(V{1.0}, zero) == V{2.0, 0.0});
  const auto lin = named("linear", 1.0);
  CHECK(generator_T(V{3.0}, lin) == V{3.0, 3.0});
  RngStream rng(8, 8);
  const auto sine = named("sin", 2.0, 2);
  for (int i = 0; i < 1000; ++i) {
    const V s{rng.normal(), rng.normal()}, t{rng.normal(), rng.normal()};
    const auto a = generator_T(s, sine), b = generator_T(t, sine);
    double lhs = 0;
    for (std::size_t k = 0; k < a.size(); ++k) lhs += std::fabs(a[k] - b[k]);
    const double rhs = sine.K * (1.0 + sine.K) * (std::fabs(s[0] - t[0]) + std::fabs(s[1] - t[1]));
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("Lipschitz spot check") {
  const Function steep = [](std::span<const double> x) { return 3.0 * x[0]; };
  CHECK_THROWS_AS(ConeDistribution::make(1.0, steep, normal_zeta(1, 1.0), 1), DomainError);
  CHECK_NOTHROW(ConeDistribution::make(3.0, steep, normal_zeta(1, 1.0), 1));
  for (const auto& name : target_function_names()) CHECK_NOTHROW(named(name, 2.0, 2));
  CHECK_THROWS_AS(target_function("cosh"), DomainError);
  CHECK_THROWS_AS(normal_zeta(1, 0.0), DomainError);
}

TEST_CASE("L1-cone network") {
  const auto net = l1cone_network_params(V{0, 0}, 1.0);
  CHECK(eval_l1cone_network(net, V{1, 2}) == 1);
  CHECK(eval_l1cone_network(net, V{2, 1}) == -1);
  CHECK(eval_l1cone_network(net, V{1, 1}) == 1);
  CHECK(net.units_built() == 5);
  CHECK(net.units_quoted() == 3);
  CHECK_THROWS_AS(eval_l1cone_network(net, V{1, 2, 3}), DomainError);

  RngStream rng(9, 9);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t d = 1 + static_cast<std::size_t>(rng.uniform() * 5);
    V p(d + 1);
    for (double& v : p) v = rng.normal() * 3;
    const double K = 0.1 + 9.9 * rng.uniform();
    const auto params = l1cone_network_params(p, K);
    CHECK(eval_l1cone_network(params, p) == 1);
    V far = p;
    far[d] += 1e6;
    CHECK(eval_l1cone_network(params, far) == 1);
    V q(d + 1);
    for (double& v : q) v = rng.normal() * 3;
    CHECK((eval_l1cone_network(params, q) == 1) == cone_contains(p, K, q));
  }
  // integer lattice hits the boundary exactly
  for (int a = -3; a <= 3; ++a) {
    for (int b = -3; b <= 3; ++b) {
      for (int y = -6; y <= 6; ++y) {
        for (double K : {1.0, 2.0}) {
          const V p{0, 1, 0};
          const V q{double(a), double(b), double(y)};
          CHECK((eval_l1cone_network(l1cone_network_params(p, K), q) == 1) == cone_contains(p, K, q));
        }
      }
    }
  }
}
