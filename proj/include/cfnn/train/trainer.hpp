#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "cfnn/amplify/amplify.hpp"
#include "cfnn/train/net.hpp"

namespace cfnn::train {

using amplify::Dataset;

struct EpochMetrics;

struct TrainConfig {
  /// Draws per point in the approximate histogram.
  std::size_t n_train = 25;
  double tau = 1.0;
  double learning_rate = 0.05;
  double momentum = 0.9;
  double weight_decay = 5e-3;
  /// Cosine decay of the learning rate to zero over the run.
  bool cosine_schedule = false;
  std::size_t epochs = 200;
  std::size_t batch_size = 64;
  std::uint64_t seed = 0;
  /// All points of a batch share the same n_train draws. Only the joint
  /// distribution across points changes; each point still sees n_train
  /// independent draws.
  bool share_draws = true;
  /// Held-out RA is measured every eval_every epochs (0 disables it) with
  /// eval_n samples per point.
  std::size_t eval_every = 1;
  std::size_t eval_n = 101;
  // Called after every epoch; may throw to abort (used for wall-clock caps).
  std::function<void(const EpochMetrics&)> on_epoch;

  void validate() const;
};

struct EpochMetrics {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  /// NaN when not measured this epoch.
  double heldout_ra = 0.0;
  std::size_t floored = 0;
};

struct TrainResult {
  std::vector<EpochMetrics> history;
};

/// SGD with momentum and coupled weight decay (g += wd * theta) on the
/// approximate-histogram cross-entropy. Throws RuntimeFailure when the loss
/// stops being finite.
TrainResult train(Model& model, const Dataset& train_set, const Dataset* heldout, const TrainConfig& cfg);

}  // namespace cfnn::train
