#include <doctest.h>

#include <cmath>
#include <vector>

#include "../support/gradcheck.hpp"
#include "cfnn/error.hpp"
#include "cfnn/harness/datasets.hpp"
#include "cfnn/train/checkpoint.hpp"
#include "cfnn/train/complexity.hpp"
#include "cfnn/train/evaluation.hpp"
#include "cfnn/train/hypernet.hpp"
#include "cfnn/train/loss.hpp"
#include "cfnn/train/net.hpp"
#include "cfnn/train/trainer.hpp"

using namespace cfnn;
using namespace cfnn::train;
using numerics::RngStream;

namespace {

std::vector<RandomDraw> draws_for(const Model& m, RngStream& rng, std::size_t n) {
  std::vector<RandomDraw> out;
  for (std::size_t j = 0; j < n; ++j) out.push_back(m.draw(rng));
  return out;
}

std::vector<std::size_t> labels(RngStream& rng, std::size_t n, std::size_t classes) {
  std::vector<std::size_t> y(n);
  for (auto& v : y) v = std::min(classes - 1, static_cast<std::size_t>(rng.uniform() * classes));
  return y;
}

}  // namespace

TEST_CASE("softmax and cross entropy") {
  const std::vector<double> logits{1.0, 2.0, 3.0};
  const auto s = softmax(logits);
  const double z = std::exp(1.0) + std::exp(2.0) + std::exp(3.0);
  CHECK(s[2] == doctest::Approx(std::exp(3.0) / z));
  const auto big = softmax(std::vector<double>{1000.0, 1001.0});
  CHECK(big[1] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))));
  const auto g = gumbel_softmax(logits, 0.5);
  const auto ref = softmax(std::vector<double>{2.0, 4.0, 6.0});
  for (int k = 0; k < 3; ++k) CHECK(g[k] == doctest::Approx(ref[k]));
  const auto sharp = gumbel_softmax(logits, 1e-3);
  CHECK(sharp[2] == doctest::Approx(1.0));

  const auto ce = cross_entropy(std::vector<double>{0.25, 0.75}, 1);
  CHECK(ce.loss == doctest::Approx(-std::log(0.75)));
  CHECK_FALSE(ce.floored);
  const auto fl = cross_entropy(std::vector<double>{1.0, 0.0}, 1);
  CHECK(fl.floored);
  CHECK(fl.loss == doctest::Approx(-std::log(kProbabilityFloor)));
}

TEST_CASE("gradient checks on single layer kinds") {
  RngStream rng(1, 1);
  const std::vector<std::vector<LayerSpec>> stacks{
      {LayerSpec::dense(3)},
      {LayerSpec::dense(4), LayerSpec::tanh(), LayerSpec::dense(3)},
      {LayerSpec::dense(4), LayerSpec::relu(), LayerSpec::dense(3)},
      {LayerSpec::dense(4), LayerSpec::dropout(0.3), LayerSpec::dense(3)},
      {LayerSpec::concat_random(2), LayerSpec::dense(3)},
  };
  for (const auto& layers : stacks) {
    CfnnNet net(2, layers);
    net.init(rng, 1.5);
    for (std::size_t n : {1u, 5u}) {
      const auto x = testing::random_batch(rng, 4, 2);
      const auto y = labels(rng, 4, 3);
      const auto r = testing::check_gradients(net, x, y, draws_for(net, rng, n), 1.0);
      CHECK(r.max_rel_error <= 1e-4);
    }
  }
}

TEST_CASE("gradient checks on random nets through the p~ loss") {
  RngStream rng(2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    auto net = testing::random_net(rng, 2 + trial % 3, 2 + trial % 2);
    for (std::size_t n : {1u, 5u}) {
      const auto x = testing::random_batch(rng, 3, net.input_dim());
      const auto y = labels(rng, 3, net.num_classes());
      const double tau = 0.5 + 1.5 * rng.uniform();
      const auto r = testing::check_gradients(net, x, y, draws_for(net, rng, n), tau);
      CAPTURE(trial);
      CAPTURE(n);
      CHECK(r.max_rel_error <= 1e-4);
    }
  }
}

TEST_CASE("gradient checks on hypernetworks") {
  RngStream rng(3, 3);
  for (bool two_stage : {false, true}) {
    HypernetSpec spec;
    spec.m = 3;
    spec.hidden = 5;
    spec.classes = 3;
    spec.two_stage = two_stage;
    Hypernet net(spec);
    net.init(rng, 2.0);
    for (std::size_t n : {1u, 5u}) {
      const auto x = testing::random_batch(rng, 4, 2);
      const auto y = labels(rng, 4, 3);
      const auto r = testing::check_gradients(net, x, y, draws_for(net, rng, n), 1.0);
      CAPTURE(two_stage);
      CHECK(r.max_rel_error <= 1e-4);
    }
  }
}

TEST_CASE("p~ estimates are distributions") {
  RngStream rng(4, 4);
  for (int trial = 0; trial < 20; ++trial) {
    auto net = testing::random_net(rng, 2, 3);
    const std::vector<double> x{rng.normal() * 5, rng.normal() * 5};
    const auto p = estimate_ptilde(net, x, 1 + trial, 0.3 + rng.uniform(), RngStream(5, trial));
    double total = 0.0;
    for (double v : p) {
      CHECK(v >= 0.0);
      total += v;
    }
    CHECK(std::fabs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("with the random port fixed the loss is softmax cross entropy") {
  RngStream rng(6, 6);
  auto net = testing::random_net(rng, 2, 3);
  const RandomDraw d = net.draw(rng);
  const std::vector<RandomDraw> same(5, d);
  const auto x = testing::random_batch(rng, 4, 2);
  const auto y = labels(rng, 4, 3);
  const double loss = ptilde_loss(net, x, y, same, 1.0, 0.25, false).loss;
  double want = 0.0;
  for (std::size_t r = 0; r < 4; ++r) {
    const auto s = softmax(net.logits(x.row(r), d));
    want += -std::log(s[y[r]]) * 0.25;
  }
  CHECK(loss == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("floored rows contribute no gradient") {
  CfnnNet net(1, {LayerSpec::dense(2)});
  auto p = net.params();
  // weights (2 x 1) then biases: logits = (0, 100 x)
  p[0] = 0.0;
  p[1] = 100.0;
  p[2] = 0.0;
  p[3] = 0.0;
  const Matrix x = Matrix::from_row(std::vector<double>{10.0});
  const std::vector<std::size_t> y{0};
  RngStream rng(0, 0);
  const std::vector<RandomDraw> draws{net.draw(rng)};
  net.zero_grad();
  const auto v = ptilde_loss(net, x, y, draws, 1.0, 1.0, true);
  CHECK(v.floored == 1);
  for (double g : net.grads()) CHECK(g == 0.0);
}

TEST_CASE("dropout forwards") {
  RngStream rng(7, 7);
  auto drop = make_dropout_mlp(3, 4, 2, 0.0);
  drop.init(rng);
  const std::vector<double> x{0.3, -1.0, 2.0};
  RngStream s(1, 2);
  const auto a = dropout_forward(drop, x, 0.0, s);
  const auto b = mean_mask_forward(drop, x, 0.0);
  CHECK(a == b);
  // p = 0 is the plain forward of the same weights.
  CfnnNet plain(3, {LayerSpec::dense(4), LayerSpec::relu(), LayerSpec::dense(4), LayerSpec::relu(), LayerSpec::dense(2)});
  REQUIRE(plain.params().size() == drop.params().size());
  std::copy(drop.params().begin(), drop.params().end(), plain.params().begin());
  CHECK(plain.logits(x, plain.mean_draw()) == a);
  CHECK(mean_mask_forward(drop, x, 0.4) == mean_mask_forward(drop, x, 0.4));
  CHECK_THROWS_AS(dropout_forward(drop, x, 1.0, s), DomainError);
  CHECK_THROWS_AS(mean_mask_forward(drop, x, 1.0), DomainError);

  // For a linear net the dropout mean equals the mean-mask forward.
  CfnnNet lin(3, {LayerSpec::dropout(0.5), LayerSpec::dense(2)});
  lin.init(rng);
  const double p = 0.4;
  const int n = 10000;
  const auto mean_logits = mean_mask_forward(lin, x, p);
  std::vector<double> sum(2, 0.0), sq(2, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto out = dropout_forward(lin, x, p, s);
    for (int k = 0; k < 2; ++k) {
      sum[k] += out[k];
      sq[k] += out[k] * out[k];
    }
  }
  for (int k = 0; k < 2; ++k) {
    const double m = sum[k] / n;
    const double sd = std::sqrt(sq[k] / n - m * m);
    CHECK(std::fabs(m - mean_logits[k]) <= 4.0 * sd / std::sqrt(double(n)));
  }
}

TEST_CASE("hypernetwork forward") {
  HypernetSpec spec;
  Hypernet net(spec);
  RngStream rng(8, 8);
  net.init(rng, 3.0);
  const std::vector<double> x{0.5, -0.25};
  std::vector<double> z1(spec.m), z1b(spec.m);
  for (auto& v : z1) v = rng.uniform();
  for (auto& v : z1b) v = rng.uniform();
  CHECK(hypernet_forward(net, x, z1, {}, 1) == hypernet_forward(net, x, z1, {}, 1));
  CHECK(hypernet_forward(net, x, z1, {}, 1) != hypernet_forward(net, x, z1b, {}, 1));
  CHECK_THROWS_AS(hypernet_forward(net, std::vector<double>{1.0}, z1, {}, 0), DomainError);
  CHECK_THROWS_AS(hypernet_forward(net, x, z1, {}, 2), DomainError);

  // head = W x - b with W, b read from the generator output
  const auto theta = net.generate(net.make_draw(z1, {}, 0));
  const auto logits = hypernet_forward(net, x, z1, {}, 0);
  for (std::size_t c = 0; c < 2; ++c) {
    const double want = theta[c * 2] * x[0] + theta[c * 2 + 1] * x[1] - theta[4 + c];
    CHECK(logits[c] == doctest::Approx(want).epsilon(1e-12));
  }

  // A generator whose weights are all zero emits its output bias for every z.
  Hypernet flat(spec);
  auto p = flat.params();
  std::fill(p.begin(), p.end(), 0.0);
  const auto& g = flat.head_generator();
  const std::size_t last = g.layers().size() - 1;
  const std::size_t bias_at = g.param_offset(last) + g.widths()[last] * g.widths()[last - 2];
  for (std::size_t i = bias_at; i < g.num_params(); ++i) p[i] = 0.1 * static_cast<double>(i - bias_at + 1);
  CHECK(hypernet_forward(flat, x, z1, {}, 0) == hypernet_forward(flat, x, z1b, {}, 1));
}

TEST_CASE("two-stage hypernetwork draws and shapes") {
  HypernetSpec spec;
  spec.two_stage = true;
  spec.m = 4;
  Hypernet net(spec);
  RngStream rng(9, 9);
  net.init(rng);
  const auto d = net.draw(rng);
  CHECK(d.ports.size() == 3);
  CHECK_THROWS_AS(net.make_draw(std::vector<double>(4), std::vector<double>(3), 0), DomainError);
  HypernetSpec weighted;
  weighted.class_weights = {0.0, 1.0};
  Hypernet w(weighted);
  for (int i = 0; i < 50; ++i) {
    const auto dr = w.draw(rng);
    CHECK(dr.ports[1][1] == 1.0);
  }
}

TEST_CASE("data and random complexity") {
  NetGraph g;
  const auto x = g.add_node(NodeKind::data_input);
  const auto z = g.add_node(NodeKind::random_input);
  const auto n1 = g.add_node(NodeKind::neuron);
  const auto n2 = g.add_node(NodeKind::neuron);
  const auto out = g.add_node(NodeKind::output);
  for (auto n : {n1, n2}) {
    g.add_edge(x, n);
    g.add_edge(z, n);
    g.add_edge(n, out);
  }
  const auto c = dc_rc(g);
  CHECK(c.dc == 2);
  CHECK(c.rc == 2);

  NetGraph gen;
  const auto gx = gen.add_node(NodeKind::data_input);
  const auto gz = gen.add_node(NodeKind::random_input);
  const auto a = gen.add_node(NodeKind::neuron), b = gen.add_node(NodeKind::neuron), e = gen.add_node(NodeKind::neuron);
  const auto head = gen.add_node(NodeKind::neuron);
  const auto go = gen.add_node(NodeKind::output);
  gen.add_edge(gz, a);
  gen.add_edge(a, b);
  gen.add_edge(a, e);
  for (auto s : {b, e}) gen.add_edge(s, head, EdgeKind::generated_weight);
  gen.add_edge(gx, head);
  gen.add_edge(head, go);
  CHECK(dc_rc(gen).dc == 1);
  CHECK(dc_rc(gen).rc == 4);
  CHECK(dc_rc(gen, {false}).rc == 3);

  CfnnNet plain(2, {LayerSpec::dense(4), LayerSpec::relu(), LayerSpec::dense(2)});
  const auto pc = dc_rc(plain.graph());
  CHECK(pc.rc == 0);
  CHECK(pc.dc == 6);

  HypernetSpec spec;
  Hypernet h(spec);
  const auto hc = dc_rc(h.graph());
  CHECK(hc.dc == 2);
  CHECK(hc.rc - dc_rc(h.graph(), {false}).rc == 2);
  CHECK(hc.rc == 2 * spec.hidden + h.head_param_count() + 2);

  gen.add_edge(head, a);
  CHECK_THROWS_AS(dc_rc(gen), DomainError);
}

TEST_CASE("complexity covers every reachable neuron") {
  RngStream rng(10, 10);
  for (int trial = 0; trial < 10; ++trial) {
    auto net = testing::random_net(rng, 2, 2);
    const auto g = net.graph();
    const auto c = dc_rc(g);
    CHECK(c.dc + c.rc >= g.count(NodeKind::neuron));
  }
}

TEST_CASE("checkpoints round-trip") {
  RngStream rng(11, 11);
  auto net = testing::random_net(rng, 3, 2);
  const auto copy = checkpoint_from_string(checkpoint_to_string(net));
  const auto d = net.draw(rng);
  const std::vector<double> x{0.1, 0.2, -0.3};
  CHECK(copy->logits(x, d) == net.logits(x, d));

  HypernetSpec spec;
  spec.two_stage = true;
  Hypernet h(spec);
  h.init(rng, 3.0);
  const auto hc = checkpoint_from_string(checkpoint_to_string(h));
  const auto hd = h.draw(rng);
  CHECK(hc->logits(std::vector<double>{1.0, 2.0}, hd) == h.logits(std::vector<double>{1.0, 2.0}, hd));
  CHECK(hc->describe() == h.describe());

  CHECK_THROWS_AS(checkpoint_from_string("{}"), DomainError);
  CHECK_THROWS_AS(checkpoint_from_string("not json"), DomainError);
}

TEST_CASE("training") {
  const auto blobs = harness::gen_dataset("blobs", 400, 1);
  CfnnNet net(2, {LayerSpec::dense(8), LayerSpec::relu(), LayerSpec::dense(2)});
  RngStream rng(12, 12);
  net.init(rng);
  TrainConfig cfg;
  cfg.n_train = 1;
  cfg.epochs = 50;
  cfg.seed = 3;
  cfg.eval_every = 0;
  train::train(net, blobs, nullptr, cfg);
  CHECK(standard_accuracy(net, blobs) >= 0.99);

  // Same seed, same parameters.
  CfnnNet a(2, {LayerSpec::dense(4), LayerSpec::tanh(), LayerSpec::dropout(0.3), LayerSpec::dense(2)});
  RngStream ra(1, 1);
  a.init(ra);
  CfnnNet b = a;
  cfg.epochs = 3;
  cfg.n_train = 3;
  train::train(a, blobs, nullptr, cfg);
  train::train(b, blobs, nullptr, cfg);
  CHECK(std::equal(a.params().begin(), a.params().end(), b.params().begin()));

  std::size_t calls = 0;
  cfg.on_epoch = [&calls](const EpochMetrics&) { ++calls; };
  train::train(a, blobs, nullptr, cfg);
  CHECK(calls == 3);

  CfnnNet wild(2, {LayerSpec::dense(2)});
  wild.init(ra, 1.0);
  TrainConfig bad;
  bad.learning_rate = 1e200;
  bad.epochs = 5;
  bad.n_train = 1;
  CHECK_THROWS_AS(train::train(wild, blobs, nullptr, bad), RuntimeFailure);

  TrainConfig invalid;
  invalid.momentum = 1.0;
  CHECK_THROWS_AS(train::train(wild, blobs, nullptr, invalid), DomainError);
}

TEST_CASE("evaluation helpers") {
  const auto blobs = harness::gen_dataset("blobs", 300, 2);
  CHECK(best_linear_accuracy_2d(blobs) >= 0.99);
  const auto circles = harness::gen_dataset("circles", 1000, 2);
  CHECK(best_linear_accuracy_2d(circles) <= 0.70);

  CfnnNet det(2, {LayerSpec::dense(3), LayerSpec::tanh(), LayerSpec::dense(2)});
  RngStream rng(13, 13);
  det.init(rng);
  const ModelClassifier clf(det);
  const auto rows = sampling_generalization(clf, circles, {1, 9, 101}, 3, RngStream(1, 1));
  for (const auto& r : rows) {
    CHECK(r.ra_mean == rows[0].ra_mean);
    CHECK(r.ra_std == 0.0);
  }
  CHECK(rows[0].ra_mean == standard_accuracy(det, circles));
  CHECK(mean_accuracy(det, circles, 5, RngStream(2, 2)) == standard_accuracy(det, circles));
}
