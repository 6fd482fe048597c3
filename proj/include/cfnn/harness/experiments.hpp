#pragma once

#include <chrono>
#include <string>

#include "cfnn/harness/config.hpp"
#include "cfnn/harness/report.hpp"

namespace cfnn::harness {

/// Wall-clock cap. check() throws RuntimeFailure once the budget is spent.
class Deadline {
 public:
  explicit Deadline(double max_seconds);
  double elapsed() const;
  void check(const std::string& stage) const;

 private:
  std::chrono::steady_clock::time_point start_;
  double max_seconds_;
};

/// Side outputs that do not belong in the report itself.
struct RunOptions {
  std::string checkpoint_path;
  std::string dataset_path;
};

// Each runner resolves and validates the config first.
ExperimentReport run_ball_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});  // ball, tangent
ExperimentReport run_mse_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});
ExperimentReport run_cone_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});
ExperimentReport run_train_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});
ExperimentReport run_sweep(const ExperimentConfig& cfg, const RunOptions& opts = {});
ExperimentReport run_gtilde_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Dispatch on cfg.kind.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

}  // namespace cfnn::harness
