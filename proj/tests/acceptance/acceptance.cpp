// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "../support/gradcheck.hpp"
#include "cfnn/ball/ball.hpp"
#include "cfnn/cone/cone.hpp"
#include "cfnn/harness/experiments.hpp"
#include "cfnn/numerics/sampling.hpp"
#include "cfnn/numerics/special.hpp"

using namespace cfnn;
using namespace cfnn::harness;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome ball_ra() {
  ExperimentConfig c;
  c.kind = "ball";
  c.dim = 10;
  c.radius = 1.0;
  c.alpha = 0.75;
  c.points = 1000;
  c.samples = 1501;
  c.n_test = {1501};
  c.grid_points = 2;
  c.grid_samples = 1000;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_ball_experiment(c);
  const double secs = seconds_since(t0);
  const double ra = r.metric("ra");
  return {ra >= 0.99 && secs < 10.0,
          fmt("RA=%.4f (>= 0.99), runtime %.2f s (< 10 s); analytic margin %.4f, Hoeffding point bound %.3g", ra,
              secs, r.metric("analytic_margin_min"), r.metric("hoeffding_point_error_bound"))};
}

Outcome closed_form() {
  std::string detail;
  bool pass = true;
  struct Run {
    const char* kind;
    std::size_t dim;
  };
  for (const Run run : {Run{"ball", 2}, Run{"ball", 10}, Run{"tangent", 2}}) {
    ExperimentConfig c;
    c.kind = run.kind;
    c.dim = run.dim;
    c.points = 10;
    c.samples = 1;
    c.n_test = {1};
    c.grid_points = 20;
    c.grid_samples = 100000;
    const auto r = run_ball_experiment(c);
    const double inside = r.metric("p1_within_4sigma");
    pass = pass && inside >= 19;
    detail += fmt("%s d=%zu %.0f/20; ", run.kind, run.dim, inside);
  }
  return {pass, detail + "need >= 19/20 inside 4 sigma"};
}

Outcome mse_guarantee() {
  ExperimentConfig c;
  c.kind = "mse";
  c.eps = 0.1;
  c.phi = 0.2;
  c.points = 2000;
  const auto r = run_mse_experiment(c);
  const double mse = r.metric("mse");
  return {mse <= 0.1, fmt("indicator MSE %.4f at n=%.0f (<= 0.1 gates; <= 0.05: %s)", mse, r.metric("n_bound"),
                          mse <= 0.05 ? "yes" : "no")};
}

Outcome cone_separation() {
  ExperimentConfig c;
  c.kind = "cone";
  c.target_fn = "sin";
  c.lipschitz = 1.0;
  c.zeta_scale = 2.0;
  c.points = 50;
  c.samples = 20001;
  c.margin = 0.25;
  const auto r = run_cone_experiment(c);
  const double off = r.metric("off_graph_separated_fraction");
  const double on = r.metric("on_graph_in_band_fraction");
  const bool sizes = r.metric("off_graph_points") == 200 && r.metric("on_graph_points") == 50;
  return {sizes && off >= 0.99 && on >= 0.95,
          fmt("off-graph separated %.0f/%.0f (>= 99%%), on-graph in band %.1f%% of %.0f (>= 95%%)",
              r.metric("off_graph_separated"), r.metric("off_graph_points"), 100.0 * on, r.metric("on_graph_points"))};
}

Outcome cone_network() {
  numerics::RngStream rng(20261015, 5);
  std::size_t agree = 0;
  const std::size_t cases = 10000;
  for (std::size_t i = 0; i < cases; ++i) {
    const std::size_t d = 1 + static_cast<std::size_t>(rng.uniform() * 5);
    const double K = numerics::sample_uniform(rng, 0.1, 10.0);
    std::vector<double> p(d + 1), q(d + 1);
    for (double& v : p) v = 3.0 * rng.normal();
    for (double& v : q) v = 3.0 * rng.normal();
    // Every fourth query is pushed along the axis so both outcomes are common.
    if (i % 4 == 0) q[d] = p[d] + (rng.uniform() < 0.5 ? -1.0 : 1.0) * 10.0 * K * rng.uniform();
    const bool net = cone::eval_l1cone_network(cone::l1cone_network_params(p, K), q) == 1;
    agree += net == cone::cone_contains(p, K, q) ? 1 : 0;
  }
  return {agree == cases, fmt("%zu/%zu cases agree (need all)", agree, cases)};
}

Outcome gradients() {
  numerics::RngStream rng(20261015, 6);
  double worst = 0.0;
  std::size_t checks = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto net = testing::random_net(rng, 2 + trial % 3, 2 + trial % 2);
    for (std::size_t n : {1u, 5u}) {
      const auto x = testing::random_batch(rng, 3, net.input_dim());
      std::vector<std::size_t> y(3);
      for (auto& v : y) v = std::min(net.num_classes() - 1, static_cast<std::size_t>(rng.uniform() * net.num_classes()));
      std::vector<train::RandomDraw> draws;
      for (std::size_t j = 0; j < n; ++j) draws.push_back(net.draw(rng));
      const auto r = testing::check_gradients(net, x, y, draws, 1.0);
      worst = std::max(worst, r.max_rel_error);
      ++checks;
    }
  }
  return {worst <= 1e-4, fmt("max relative error %.3g over %zu net/n_train pairs (<= 1e-4)", worst, checks)};
}

Outcome learned_cfnn() {
  ExperimentConfig c;
  c.kind = "train";
  c.arch = "hypernet";
  c.dataset = "circles";
  c.train_size = 2000;
  c.test_size = 1000;
  c.samples = 101;
  c.n_test = {101};
  c.repeats = 3;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_train_experiment(c);
  const double secs = seconds_since(t0);
  const double ra = r.metric("ra_median");
  const double lin = r.metric("linear_accuracy_median");
  return {ra >= 0.85 && lin <= 0.70 && secs < 300.0,
          fmt("median RA@101 %.4f (>= 0.85), linear %.4f (<= 0.70), runtime %.1f s (< 300 s)", ra, lin, secs)};
}

Outcome sampling_generalization() {
  ExperimentConfig c;
  c.kind = "sweep";
  c.arch = "dropout";
  c.dataset = "circles";
  c.n_train = 9;
  c.n_test = {9, 501};
  c.repeats = 5;
  const auto r = run_sweep(c);
  const double ra9 = r.metric("ra_n9");
  const double ra501 = r.metric("ra_n501");
  return {ra501 >= ra9 - 0.005, fmt("RA(501) %.4f >= RA(9) %.4f - 0.005", ra501, ra9)};
}

Outcome dropout_ablation() {
  ExperimentConfig c;
  c.kind = "train";
  c.arch = "dropout";
  c.dataset = "circles";
  c.repeats = 3;
  const auto r = run_train_experiment(c);
  const double maj = r.metric("maj_train_maj_test");
  const double stdacc = r.metric("std_train_std_test");
  const std::size_t cells = r.table("ablation").rows.size();
  return {maj >= stdacc && cells == 6,
          fmt("maj/maj %.4f >= std/std %.4f, %zu/6 cells emitted", maj, stdacc, cells)};
}

Outcome calculators() {
  const auto h = ball::hoeffding_samples(0.05, 0.1);
  const auto m = ball::mse_bound_samples_for_margin(0.1, 0.1);
  const double z = numerics::std_normal_quantile(0.975);
  return {h == 151 && m == 149 && std::fabs(z - 1.959964) <= 1e-6,
          fmt("hoeffding_samples %zu (151), mse bound %zu (149), quantile(0.975) %.7f (1.959964 +- 1e-6)", h, m, z)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"ball random accuracy", ball_ra},
      {"Monte Carlo vs closed form", closed_form},
      {"MSE guarantee", mse_guarantee},
      {"cone separation", cone_separation},
      {"L1-cone network equivalence", cone_network},
      {"gradient checks", gradients},
      {"learned CFNN vs linear", learned_cfnn},
      {"sampling generalization", sampling_generalization},
      {"dropout ablation ordering", dropout_ablation},
      {"calculator exactness", calculators},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
