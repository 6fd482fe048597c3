#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfnn/harness/datasets.hpp"

namespace cfnn::harness {

/// Every knob of every experiment. Unset optionals take per-kind defaults
/// in resolve(); a resolved config is what reports echo back.
struct ExperimentConfig {
  std::string kind;

  std::optional<std::size_t> dim;
  double radius = 1.0;
  double alpha = 0.75;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> points;
  double phi = 0.2;
  double eps = 0.1;

  std::string target_fn = "sin";
  std::optional<double> lipschitz;
  double zeta_scale = 2.0;
  // Distance from a decision boundary below which grid points count as on it.
  double margin = 0.25;

  std::optional<std::string> dataset;
  std::vector<Interval> intervals{{0.2, 0.8}, {1.2, 3.0}};
  Interval inner{0.0, 0.8};
  Interval outer{1.2, 1.8};
  std::size_t train_size = 2000;
  std::size_t test_size = 1000;

  std::optional<std::string> arch;
  std::optional<std::size_t> n_train;
  std::vector<std::size_t> n_test;
  std::optional<std::size_t> epochs;
  double learning_rate = 0.05;
  double momentum = 0.9;
  std::optional<double> weight_decay;
  std::size_t batch_size = 64;
  double tau = 1.0;
  std::optional<double> init_gain;
  std::optional<bool> cosine_schedule;
  std::size_t hidden = 32;
  std::size_t m = 8;
  double dropout = 0.5;
  std::size_t eval_every = 0;

  std::uint64_t seed = 0;
  std::optional<std::size_t> repeats;
  std::size_t grid_points = 20;
  std::size_t grid_samples = 100000;
  double max_seconds = 600.0;

  std::string out;
  std::string format = "json";

  /// Copy with all per-kind defaults filled in.
  ExperimentConfig resolve() const;
  /// Throws DomainError on the first invalid field. Call on a resolved config.
  void validate() const;
};

std::vector<std::string> experiment_kinds();

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Accepts either a config object or a full report (uses its "config").
ExperimentConfig config_from_json(const nlohmann::json& doc);

}  // namespace cfnn::harness
