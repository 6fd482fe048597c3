#pragma once

// Majority-training loss. For a point x with label y the approximate
// histogram is p~(x) = (1/n) sum_j softmax(N(x, r_j) / tau) and the loss is
// -ln p~_y(x). Gradients flow through every draw.

#include <cstddef>
#include <span>
#include <vector>

#include "cfnn/train/net.hpp"

namespace cfnn::train {

inline constexpr double kProbabilityFloor = 1e-12;

/// softmax(logits / tau).
std::vector<double> gumbel_softmax(std::span<const double> logits, double tau);

struct CrossEntropy {
  double loss = 0.0;
  /// True when p_y fell below the floor and was clamped.
  bool floored = false;
};

CrossEntropy cross_entropy(std::span<const double> p, std::size_t y);

/// p~ at x from n draws, draw j taken from split(rng, j).
std::vector<double> estimate_ptilde(const Model& model, std::span<const double> x, std::size_t n, double tau,
                                    const RngStream& rng);

struct LossValue {
  /// Weighted sum of per-row losses.
  double loss = 0.0;
  std::size_t floored = 0;
};

/// Loss of the rows of x, all rows sharing the given draws. Each row's loss
/// is multiplied by row_weight; with backprop set the weighted gradient is
/// added to the model's gradient buffer.
LossValue ptilde_loss(Model& model, const Matrix& x, std::span<const std::size_t> y,
                      std::span<const RandomDraw> draws, double tau, double row_weight, bool backprop);

}  // namespace cfnn::train
