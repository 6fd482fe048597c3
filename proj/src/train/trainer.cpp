#include "cfnn/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "cfnn/error.hpp"
#include "cfnn/train/evaluation.hpp"
#include "cfnn/train/loss.hpp"

namespace cfnn::train {

void TrainConfig::validate() const {
  require(n_train >= 1, "n_train must be at least 1");
  require(tau > 0.0 && std::isfinite(tau), "tau must be positive");
  require(learning_rate > 0.0 && std::isfinite(learning_rate), "learning rate must be positive");
  require(momentum >= 0.0 && momentum < 1.0, "momentum must lie in [0, 1)");
  require(weight_decay >= 0.0, "weight decay must be nonnegative");
  require(batch_size >= 1, "batch size must be at least 1");
  require(eval_n >= 1, "eval_n must be at least 1");
}

namespace {

std::vector<std::size_t> shuffled(std::size_t n, RngStream& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(order[i - 1], order[std::min(j, i - 1)]);
  }
  return order;
}

}  // namespace

TrainResult train(Model& model, const Dataset& train_set, const Dataset* heldout, const TrainConfig& cfg) {
  cfg.validate();
  TrainResult result;
  if (cfg.epochs == 0) return result;
  require(!train_set.empty(), "training set is empty");
  for (const auto& pt : train_set) {
    require(pt.x.size() == model.input_dim(), "training point has the wrong dimension");
    require(pt.label < model.num_classes(), "training label out of range");
  }

  const RngStream run(cfg.seed, 0x747261696eULL);
  const std::size_t n_params = model.params().size();
  std::vector<double> velocity(n_params, 0.0);
  const std::size_t steps_per_epoch = (train_set.size() + cfg.batch_size - 1) / cfg.batch_size;
  const double total_steps = static_cast<double>(steps_per_epoch * cfg.epochs);
  std::size_t step = 0;
  const std::size_t d = model.input_dim();

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const RngStream epoch_stream = run.split(epoch);
    RngStream order_stream = epoch_stream.split(0);
    const auto order = shuffled(train_set.size(), order_stream);
    const RngStream draw_stream = epoch_stream.split(1);

    double epoch_loss = 0.0;
    std::size_t floored = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size, ++step) {
      const std::size_t B = std::min(cfg.batch_size, order.size() - start);
      model.zero_grad();
      double batch_loss = 0.0;
      const double weight = 1.0 / static_cast<double>(B);
      if (cfg.share_draws) {
        Matrix x(B, d);
        std::vector<std::size_t> y(B);
        for (std::size_t r = 0; r < B; ++r) {
          const auto& pt = train_set[order[start + r]];
          std::copy(pt.x.begin(), pt.x.end(), x.row(r).begin());
          y[r] = pt.label;
        }
        const RngStream batch_stream = draw_stream.split(start / cfg.batch_size);
        std::vector<RandomDraw> draws;
        draws.reserve(cfg.n_train);
        for (std::size_t j = 0; j < cfg.n_train; ++j) {
          RngStream s = batch_stream.split(j);
          draws.push_back(model.draw(s));
        }
        const LossValue v = ptilde_loss(model, x, y, draws, cfg.tau, weight, true);
        batch_loss = v.loss;
        floored += v.floored;
      } else {
        for (std::size_t r = 0; r < B; ++r) {
          const std::size_t idx = order[start + r];
          const auto& pt = train_set[idx];
          const RngStream point_stream = draw_stream.split(idx);
          std::vector<RandomDraw> draws;
          draws.reserve(cfg.n_train);
          for (std::size_t j = 0; j < cfg.n_train; ++j) {
            RngStream s = point_stream.split(j);
            draws.push_back(model.draw(s));
          }
          const std::size_t label = pt.label;
          const LossValue v =
              ptilde_loss(model, Matrix::from_row(pt.x), std::span<const std::size_t>(&label, 1), draws, cfg.tau,
                          weight, true);
          batch_loss += v.loss;
          floored += v.floored;
        }
      }
      if (!std::isfinite(batch_loss)) {
        std::ostringstream msg;
        msg << "training diverged: non-finite loss at epoch " << epoch << ", batch " << start / cfg.batch_size;
        throw RuntimeFailure(msg.str());
      }
      epoch_loss += batch_loss * static_cast<double>(B);

      double lr = cfg.learning_rate;
      if (cfg.cosine_schedule) {
        lr *= 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(step) / total_steps));
      }
      auto params = model.params();
      auto grads = model.grads();
      for (std::size_t i = 0; i < n_params; ++i) {
        const double g = grads[i] + cfg.weight_decay * params[i];
        velocity[i] = cfg.momentum * velocity[i] + g;
        params[i] -= lr * velocity[i];
      }
    }
    for (double p : model.params()) {
      if (!std::isfinite(p)) {
        throw RuntimeFailure("training diverged: non-finite parameter after epoch " + std::to_string(epoch));
      }
    }

    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = epoch_loss / static_cast<double>(train_set.size());
    m.floored = floored;
    m.heldout_ra = std::numeric_limits<double>::quiet_NaN();
    const bool last = epoch + 1 == cfg.epochs;
    if (heldout != nullptr && cfg.eval_every > 0 && ((epoch + 1) % cfg.eval_every == 0 || last)) {
      m.heldout_ra = majority_accuracy(model, *heldout, cfg.eval_n, run.split(1'000'000 + epoch));
    }
    result.history.push_back(m);
    if (cfg.on_epoch) cfg.on_epoch(m);
  }
  return result;
}

}  // namespace cfnn::train
