#pragma once

// Hypernetwork classifier. A generator maps random inputs and a class
// condition y_bar to the parameters (W, b) of a linear head, which is then
// applied to the embedded input: logits = W e(x) - b. The embedding e is
// the identity.
//
// With two_stage set, a first generator G_e maps (z1, y_bar) to a candidate
// embedding e_hat and the head generator G_h receives (z2, y_bar, e_hat).
// Otherwise a single generator receives (z1, y_bar).

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "cfnn/train/net.hpp"

namespace cfnn::train {

struct HypernetSpec {
  std::size_t input_dim = 2;
  std::size_t classes = 2;
  /// Width of each uniform random input.
  std::size_t m = 8;
  std::size_t hidden = 32;
  bool two_stage = false;
  /// Sampling weights for y_bar; empty means uniform over classes.
  std::vector<double> class_weights;
};

class Hypernet final : public Model {
 public:
  explicit Hypernet(HypernetSpec spec);

  const HypernetSpec& spec() const { return spec_; }
  const MlpCore& head_generator() const { return g_h_; }
  const MlpCore* embedding_generator() const { return spec_.two_stage ? &g_e_ : nullptr; }
  std::size_t head_param_count() const { return spec_.classes * spec_.input_dim + spec_.classes; }

  /// Fan-in uniform init; gain multiplies every generator weight.
  void init(RngStream& rng, double gain = 1.0);

  std::size_t input_dim() const override { return spec_.input_dim; }
  std::size_t num_classes() const override { return spec_.classes; }
  std::span<double> params() override { return params_; }
  std::span<const double> params() const override { return params_; }
  std::span<double> grads() override { return grads_; }

  bool has_random_port() const override { return true; }
  /// Ports: z1, one-hot y_bar and, for two stages, z2.
  RandomDraw draw(RngStream& rng) const override;
  RandomDraw mean_draw() const override;
  RandomDraw make_draw(std::span<const double> z1, std::span<const double> z2, std::size_t y_bar) const;

  /// Generated head parameters: W row-major (classes x input_dim), then b.
  std::vector<double> generate(const RandomDraw& draw) const;

  Matrix forward(const Matrix& x, const RandomDraw& draw, Tape* tape = nullptr) const override;
  Matrix backward(const Tape& tape, const Matrix& dlogits) override;

  std::string describe() const override;
  NetGraph graph() const override;
  std::unique_ptr<Model> clone() const override { return std::make_unique<Hypernet>(*this); }

 private:
  std::span<const double> head_params() const { return {params_.data(), g_h_.num_params()}; }
  std::span<const double> embed_params() const {
    return {params_.data() + g_h_.num_params(), g_e_.num_params()};
  }
  Matrix generator_input(const RandomDraw& draw, const Matrix* e_hat) const;

  HypernetSpec spec_;
  MlpCore g_h_;
  MlpCore g_e_;
  std::vector<double> params_;
  std::vector<double> grads_;
};

/// Logits of x under the head generated from (z1, z2, y_bar).
std::vector<double> hypernet_forward(const Hypernet& net, std::span<const double> x, std::span<const double> z1,
                                     std::span<const double> z2, std::size_t y_bar);

}  // namespace cfnn::train
