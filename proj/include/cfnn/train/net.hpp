#pragma once

// Differentiable networks with random input ports.
//
// A network maps a batch X (rows are points) and one RandomDraw to logits.
// Every row of the batch sees the same draw; per-point randomness is
// obtained by calling forward with single-row batches.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfnn/numerics/rng.hpp"
#include "cfnn/train/matrix.hpp"

namespace cfnn::train {

using numerics::RngStream;

enum class LayerKind { dense, tanh, relu, dropout, concat_random };

std::string layer_kind_name(LayerKind kind);
LayerKind layer_kind_from_name(const std::string& name);

struct LayerSpec {
  LayerKind kind = LayerKind::dense;
  /// Output width for dense, random width for concat_random.
  std::size_t width = 0;
  /// Drop rate for dropout.
  double rate = 0.0;

  static LayerSpec dense(std::size_t out) { return {LayerKind::dense, out, 0.0}; }
  static LayerSpec tanh() { return {LayerKind::tanh, 0, 0.0}; }
  static LayerSpec relu() { return {LayerKind::relu, 0, 0.0}; }
  static LayerSpec dropout(double p) { return {LayerKind::dropout, 0, p}; }
  /// Appends m uniform [0, 1) inputs to the activations.
  static LayerSpec concat_random(std::size_t m) { return {LayerKind::concat_random, m, 0.0}; }
};

/// Values fed to the random ports, one vector per port in layer order.
struct RandomDraw {
  std::vector<std::vector<double>> ports;
};

/// Intermediate values recorded by forward for use in backward.
struct Tape {
  std::vector<Matrix> values;
  std::vector<Tape> children;
  RandomDraw draw;
};

/// Layer stack operating on externally owned parameter storage.
class MlpCore {
 public:
  MlpCore() = default;
  MlpCore(std::size_t input_dim, std::vector<LayerSpec> layers);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const { return output_dim_; }
  std::size_t num_params() const { return num_params_; }
  std::size_t num_ports() const { return port_layers_.size(); }
  const std::vector<LayerSpec>& layers() const { return layers_; }
  /// Width of each layer's output.
  const std::vector<std::size_t>& widths() const { return widths_; }
  /// Parameter offset of dense layer k (weights first, then biases).
  std::size_t param_offset(std::size_t k) const { return offsets_[k]; }

  /// Weights uniform in +-gain/sqrt(fan_in), biases uniform in +-1/sqrt(fan_in).
  void init_params(std::span<double> params, RngStream& rng, double gain = 1.0) const;

  /// Dropout masks (0 or 1/(1-p)) and uniform concat inputs. A rate
  /// override replaces the rate of every dropout layer.
  RandomDraw draw(RngStream& rng, std::optional<double> rate_override = std::nullopt) const;
  /// Expected value of every port: all-ones masks and z = 1/2.
  RandomDraw mean_draw() const;

  Matrix forward(std::span<const double> params, const Matrix& x, const RandomDraw& draw, Tape* tape) const;
  /// Accumulates parameter gradients and returns dL/dX.
  Matrix backward(std::span<const double> params, std::span<double> grads, const Tape& tape,
                  const Matrix& dout) const;

 private:
  std::size_t input_dim_ = 0;
  std::size_t output_dim_ = 0;
  std::size_t num_params_ = 0;
  std::vector<LayerSpec> layers_;
  std::vector<std::size_t> in_widths_;
  std::vector<std::size_t> widths_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> port_layers_;
  std::vector<std::size_t> port_of_layer_;
};

struct NetGraph;

/// A trainable classifier with optional random ports.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::size_t input_dim() const = 0;
  virtual std::size_t num_classes() const = 0;
  virtual std::span<double> params() = 0;
  virtual std::span<const double> params() const = 0;
  virtual std::span<double> grads() = 0;
  void zero_grad();

  virtual bool has_random_port() const = 0;
  virtual RandomDraw draw(RngStream& rng) const = 0;
  virtual RandomDraw mean_draw() const = 0;

  virtual Matrix forward(const Matrix& x, const RandomDraw& draw, Tape* tape = nullptr) const = 0;
  virtual Matrix backward(const Tape& tape, const Matrix& dlogits) = 0;

  /// Architecture descriptor used by checkpoints.
  virtual std::string describe() const = 0;
  virtual NetGraph graph() const = 0;
  virtual std::unique_ptr<Model> clone() const = 0;

  /// Logits for a single point.
  std::vector<double> logits(std::span<const double> x, const RandomDraw& draw) const;
};

/// Plain layered network: data enters at the bottom, random values enter
/// through dropout and concat_random layers.
class CfnnNet final : public Model {
 public:
  CfnnNet(std::size_t input_dim, std::vector<LayerSpec> layers);

  const MlpCore& core() const { return core_; }
  void init(RngStream& rng, double gain = 1.0);

  std::size_t input_dim() const override { return core_.input_dim(); }
  std::size_t num_classes() const override { return core_.output_dim(); }
  std::span<double> params() override { return params_; }
  std::span<const double> params() const override { return params_; }
  std::span<double> grads() override { return grads_; }

  bool has_random_port() const override { return core_.num_ports() > 0; }
  RandomDraw draw(RngStream& rng) const override { return core_.draw(rng); }
  RandomDraw mean_draw() const override { return core_.mean_draw(); }
  RandomDraw draw_with_rate(RngStream& rng, double rate) const { return core_.draw(rng, rate); }

  Matrix forward(const Matrix& x, const RandomDraw& draw, Tape* tape = nullptr) const override;
  Matrix backward(const Tape& tape, const Matrix& dlogits) override;

  std::string describe() const override;
  NetGraph graph() const override;
  std::unique_ptr<Model> clone() const override { return std::make_unique<CfnnNet>(*this); }

 private:
  MlpCore core_;
  std::vector<double> params_;
  std::vector<double> grads_;
};

/// Logits with dropout masks drawn at rate p (overriding the layer rates).
std::vector<double> dropout_forward(const CfnnNet& net, std::span<const double> x, double p, RngStream& rng);
/// Logits with every mask replaced by its expectation.
std::vector<double> mean_mask_forward(const CfnnNet& net, std::span<const double> x, double p);

/// Two hidden layers with a dropout layer after each activation.
CfnnNet make_dropout_mlp(std::size_t input_dim, std::size_t hidden, std::size_t classes, double p,
                         LayerKind activation = LayerKind::relu);
/// Deterministic affine classifier.
CfnnNet make_linear(std::size_t input_dim, std::size_t classes);

}  // namespace cfnn::train
