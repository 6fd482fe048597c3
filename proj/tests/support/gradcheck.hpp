#pragma once
// Central-difference gradient checks shared by the unit and acceptance tests.
#include <algorithm>
#include <cmath>
#include <vector>

#include "cfnn/numerics/rng.hpp"
#include "cfnn/train/loss.hpp"
#include "cfnn/train/net.hpp"

namespace cfnn::testing {

struct GradCheck {
  double max_rel_error = 0.0;
  std::size_t params = 0;
};

// Loss of `model` at its current parameters for fixed x, y and draws.
inline double fixed_loss(train::Model& model, const train::Matrix& x, const std::vector<std::size_t>& y,
                         const std::vector<train::RandomDraw>& draws, double tau) {
  return train::ptilde_loss(model, x, y, draws, tau, 1.0 / static_cast<double>(x.rows), false).loss;
}

/// Compares backprop through the p~ loss with central differences.
/// Relative error per parameter is |a - n| / max(|a|, |n|, floor).
inline GradCheck check_gradients(train::Model& model, const train::Matrix& x, const std::vector<std::size_t>& y,
                                 const std::vector<train::RandomDraw>& draws, double tau, double h = 1e-6,
                                 double floor = 1e-6) {
  model.zero_grad();
  train::ptilde_loss(model, x, y, draws, tau, 1.0 / static_cast<double>(x.rows), true);
  const std::vector<double> analytic(model.grads().begin(), model.grads().end());
  GradCheck out;
  out.params = analytic.size();
  auto params = model.params();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double keep = params[i];
    params[i] = keep + h;
    const double up = fixed_loss(model, x, y, draws, tau);
    params[i] = keep - h;
    const double down = fixed_loss(model, x, y, draws, tau);
    params[i] = keep;
    const double numeric = (up - down) / (2.0 * h);
    const double scale = std::max({std::fabs(analytic[i]), std::fabs(numeric), floor});
    out.max_rel_error = std::max(out.max_rel_error, std::fabs(analytic[i] - numeric) / scale);
  }
  return out;
}

/// A random stack that uses every layer kind and ends in a dense head.
inline train::CfnnNet random_net(numerics::RngStream& rng, std::size_t input_dim, std::size_t classes) {
  using train::LayerSpec;
  std::vector<LayerSpec> layers;
  const auto width = [&] { return 2 + static_cast<std::size_t>(rng.uniform() * 5); };
  layers.push_back(LayerSpec::concat_random(1 + static_cast<std::size_t>(rng.uniform() * 3)));
  layers.push_back(LayerSpec::dense(width()));
  layers.push_back(rng.uniform() < 0.5 ? LayerSpec::tanh() : LayerSpec::relu());
  layers.push_back(LayerSpec::dropout(0.1 + 0.5 * rng.uniform()));
  layers.push_back(LayerSpec::dense(width()));
  layers.push_back(LayerSpec::tanh());
  layers.push_back(LayerSpec::relu());
  layers.push_back(LayerSpec::concat_random(2));
  layers.push_back(LayerSpec::dense(classes));
  train::CfnnNet net(input_dim, layers);
  net.init(rng, 1.0 + rng.uniform());
  return net;
}

inline train::Matrix random_batch(numerics::RngStream& rng, std::size_t rows, std::size_t cols) {
  train::Matrix x(rows, cols);
  for (double& v : x.data) v = rng.normal();
  return x;
}

}  // namespace cfnn::testing
