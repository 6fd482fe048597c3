#include "cfnn/cone/cone.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cfnn/error.hpp"
#include "cfnn/numerics/sampling.hpp"

namespace cfnn::cone {

namespace {

double triangle_wave(double x) {
  // Period 4, peaks +1 at x = 1 and -1 at x = -1, slope +-1.
  const double r = std::fmod(x + 1.0, 4.0);
  const double s = r < 0.0 ? r + 4.0 : r;
  return s <= 2.0 ? s - 1.0 : 3.0 - s;
}

double l1_gap(std::span<const double> a, std::span<const double> b, double K, std::size_t d) {
  // Written as |K a - K b| so that the cone network below reproduces it
  // bit for bit.
  double total = 0.0;
  for (std::size_t i = 0; i < d; ++i) total += std::fabs(K * a[i] - K * b[i]);
  return total;
}

void check_point(std::span<const double> v, std::size_t dim, const char* what) {
  require(v.size() == dim, std::string(what) + " has dimension " + std::to_string(v.size()) + ", expected " +
                               std::to_string(dim));
}

}  // namespace

TargetFunction target_function(const std::string& name) {
  if (name == "zero") return {name, [](std::span<const double>) { return 0.0; }, 1.0};
  if (name == "linear") {
    return {name,
            [](std::span<const double> x) {
              double s = 0.0;
              for (double v : x) s += v;
              return s;
            },
            1.0};
  }
  if (name == "sin") return {name, [](std::span<const double> x) { return std::sin(x[0]); }, 1.0};
  if (name == "abs-saw") return {name, [](std::span<const double> x) { return triangle_wave(x[0]); }, 1.0};
  throw DomainError("unknown target function '" + name + "' (expected zero, linear, sin or abs-saw)");
}

std::vector<std::string> target_function_names() { return {"zero", "linear", "sin", "abs-saw"}; }

Sampler normal_zeta(std::size_t d, double scale) {
  require(d >= 1, "zeta dimension must be at least 1");
  require(scale > 0.0 && std::isfinite(scale), "zeta scale must be positive");
  return [d, scale](RngStream& rng) {
    auto t = numerics::sample_std_normal_vec(rng, d);
    for (double& v : t) v *= scale;
    return t;
  };
}

ConeDistribution ConeDistribution::make(double K, Function f_prime, Sampler zeta, std::size_t d) {
  require(K > 0.0 && std::isfinite(K), "Lipschitz constant must be positive");
  require(d >= 1, "cone dimension must be at least 1");
  require(static_cast<bool>(f_prime) && static_cast<bool>(zeta), "cone distribution needs f' and zeta");
  ConeDistribution cd{K, std::move(f_prime), std::move(zeta), d};

  RngStream check(0x4c495053ULL, 0);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> s = cd.zeta(check);
    check_point(s, d, "zeta sample");
    std::vector<double> t;
    if (i % 2 == 0) {
      t = cd.zeta(check);
    } else {
      t = s;
      for (double& v : t) v += 1e-3 * check.normal();
    }
    double dist = 0.0;
    for (std::size_t k = 0; k < d; ++k) dist += std::fabs(s[k] - t[k]);
    const double gap = std::fabs(cd.f_prime(s) - cd.f_prime(t));
    if (gap > K * dist + 1e-9) {
      std::ostringstream msg;
      msg << "f' is not " << K << "-Lipschitz: |f'(s) - f'(t)| = " << gap << " exceeds K |s - t|_1 = " << K * dist;
      throw DomainError(msg.str());
    }
  }
  return cd;
}

bool cone_contains(std::span<const double> p, double K, std::span<const double> q) {
  require(K > 0.0, "cone slope must be positive");
  require(p.size() >= 2, "cone apex needs at least two coordinates");
  check_point(q, p.size(), "query point");
  const std::size_t d = p.size() - 1;
  return l1_gap(q, p, K, d) <= std::fabs(q[d] - p[d]);
}

SampledLinear sample_hp(std::span<const double> p, double K, RngStream& rng) {
  require(p.size() == 2, "h^p is defined for points in R^2");
  require(K > 0.0, "cone slope must be positive");
  SampledLinear h;
  h.provenance.branch = numerics::sample_bernoulli(rng, 0.5) == 1 ? 1 : -1;
  const double k = h.provenance.branch * K;
  h.w = {k, 1.0};
  h.c = k * p[0] + p[1];
  return h;
}

ConeSample::ConeSample(Kind kind, std::vector<double> apex, double K, int branch)
    : kind_(kind), apex_(std::move(apex)), K_(K), branch_(branch) {
  require(apex_.size() >= 2, "cone apex needs at least two coordinates");
  require(kind_ == Kind::l1_cone || apex_.size() == 2, "line pair needs a two-dimensional apex");
}

int ConeSample::side(std::span<const double> q) const {
  check_point(q, apex_.size(), "query point");
  const std::size_t d = apex_.size() - 1;
  if (kind_ == Kind::lines) {
    const double k = branch_ * K_;
    return sign_of(k * q[0] + q[1] - (k * apex_[0] + apex_[1]));
  }
  if (cone_contains(apex_, K_, q)) return sign_of(q[d] - apex_[d]);
  return branch_;
}

namespace {

ConeSample draw(const ConeDistribution& cd, RngStream& rng, ConeSample::Kind kind) {
  std::vector<double> apex = cd.zeta(rng);
  check_point(apex, cd.d, "zeta sample");
  apex.push_back(cd.f_prime(apex));
  const int branch = numerics::sample_bernoulli(rng, 0.5) == 1 ? 1 : -1;
  return ConeSample(kind, std::move(apex), cd.K, branch);
}

}  // namespace

ConeSample sample_cone_classifier(const ConeDistribution& cd, RngStream& rng) {
  return draw(cd, rng, cd.d == 1 ? ConeSample::Kind::lines : ConeSample::Kind::l1_cone);
}

ConeSample sample_l1_cone_classifier(const ConeDistribution& cd, RngStream& rng) {
  return draw(cd, rng, ConeSample::Kind::l1_cone);
}

int classify_in_probability(const ConeDistribution& cd, std::span<const double> x, RngStream& rng) {
  check_point(x, cd.d, "input");
  std::vector<double> q(x.begin(), x.end());
  q.push_back(0.0);
  return sample_cone_classifier(cd, rng).label(q);
}

std::vector<double> generator_T(std::span<const double> t, const ConeDistribution& cd) {
  check_point(t, cd.d, "generator input");
  std::vector<double> out;
  out.reserve(cd.d + 1);
  for (double v : t) out.push_back(cd.K * v);
  out.push_back(cd.K * cd.f_prime(t));
  return out;
}

ConeNetworkParams l1cone_network_params(std::span<const double> p, double K) {
  require(K > 0.0 && std::isfinite(K), "cone slope must be positive");
  require(p.size() >= 2, "cone apex needs at least two coordinates");
  const std::size_t n = p.size();
  const std::size_t d = n - 1;
  ConeNetworkParams net;
  net.p.assign(p.begin(), p.end());
  net.K = K;
  net.weights.assign(2 * n * n, 0.0);
  net.biases.resize(2 * n);
  net.output_signs.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    // The last coordinate is compared unscaled.
    const double k = i < d ? K : 1.0;
    net.weights[(2 * i) * n + i] = k;
    net.biases[2 * i] = -k * p[i];
    net.weights[(2 * i + 1) * n + i] = -k;
    net.biases[2 * i + 1] = k * p[i];
    net.output_signs[2 * i] = net.output_signs[2 * i + 1] = i < d ? -1 : 1;
  }
  return net;
}

int eval_l1cone_network(const ConeNetworkParams& params, std::span<const double> q) {
  const std::size_t n = params.input_dim();
  check_point(q, n, "network input");
  double positive = 0.0;
  double negative = 0.0;
  for (std::size_t r = 0; r < 2 * n; ++r) {
    // Each row has a single nonzero weight; the sum is exact.
    double pre = params.biases[r];
    for (std::size_t c = 0; c < n; ++c) {
      const double w = params.weights[r * n + c];
      if (w != 0.0) pre = w * q[c] + pre;
    }
    const double h = std::max(0.0, pre);
    if (params.output_signs[r] > 0) {
      positive += h;
    } else {
      negative += h;
    }
  }
  return sign_of(positive - negative);
}

std::size_t ConeSeparator::sample(std::span<const double> q, RngStream& rng) const {
  return class_of_sign(sample_cone_classifier(cd_, rng).label(q));
}

std::size_t SliceClassifier::sample(std::span<const double> x, RngStream& rng) const {
  return class_of_sign(classify_in_probability(cd_, x, rng));
}

}  // namespace cfnn::cone
