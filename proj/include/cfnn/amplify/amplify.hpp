#pragma once

// Aggregation of repeated samples from a stochastic classifier.
//
// Randomness layout: point i of a dataset draws from split(run, i), and
// sample j at a point draws from split(point, j). Results therefore do not
// depend on dataset order or on how evaluation is scheduled.
//
// Ties in any argmax go to the smallest class index.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cfnn/numerics/rng.hpp"

namespace cfnn::amplify {

using numerics::RngStream;

class StochasticClassifier {
 public:
  virtual ~StochasticClassifier() = default;

  virtual std::size_t num_classes() const = 0;

  /// One draw of the classifier at x.
  virtual std::size_t sample(std::span<const double> x, RngStream& rng) const = 0;

  /// Exact class probabilities when known in closed form.
  virtual std::optional<std::vector<double>> probabilities(std::span<const double> /*x*/) const {
    return std::nullopt;
  }

  /// Label counts over n draws, draw j taken from split(point_stream, j).
  /// Overrides may batch the work but must return the same counts.
  virtual std::vector<std::size_t> sample_counts(std::span<const double> x, std::size_t n,
                                                 const RngStream& point_stream) const;
};

struct ProbabilityEstimate {
  std::vector<std::size_t> counts;
  std::size_t n = 0;
  std::vector<double> p_hat;

  static ProbabilityEstimate from_counts(std::vector<std::size_t> counts);
};

/// Index of the largest entry; smallest index on ties.
std::size_t argmax(std::span<const double> values);
std::size_t argmax(std::span<const std::size_t> values);

std::size_t majority(std::span<const std::size_t> labels, std::size_t num_classes);

ProbabilityEstimate estimate_probs(const StochasticClassifier& clf, std::span<const double> x, std::size_t n,
                                   const RngStream& rng);

std::size_t amplified_predict(const StochasticClassifier& clf, std::span<const double> x, std::size_t n,
                              const RngStream& rng);

struct LabeledPoint {
  std::vector<double> x;
  std::size_t label = 0;
};
using Dataset = std::vector<LabeledPoint>;

double empirical_random_accuracy(const StochasticClassifier& clf, const Dataset& data, std::size_t n,
                                 const RngStream& rng);

struct DeltaCurve {
  /// Per-point delta, sorted descending.
  std::vector<double> delta;
  /// Fraction of points whose amplified prediction is correct. A point with
  /// delta exactly 0 counts when the tie rule resolves to its label, so this
  /// equals empirical_random_accuracy on the same draws.
  double positive_fraction = 0.0;
};

/// delta(x) = p_y(x) - max_{j != y} p_j(x) from an estimate.
double point_delta(const ProbabilityEstimate& est, std::size_t label);

DeltaCurve delta_curve(const StochasticClassifier& clf, const Dataset& data, std::size_t n, const RngStream& rng);

/// Argmax of the elementwise mean of the outputs.
std::size_t mean_aggregate(const std::vector<std::vector<double>>& outputs);

struct MseOptions {
  /// Report the literal squared error of +-1 labels (4x the mismatch rate).
  bool squared_pm1 = false;
};

using TruthFn = std::function<int(std::span<const double>)>;
using PointSampler = std::function<std::vector<double>(RngStream&)>;

/// Mean over n_points draws x ~ mu of [truth(x) != amplified label]. The
/// classifier must be binary; class 1 is read as +1. Point i draws x from
/// split(split(rng, i), 0) and the classifier samples from split(split(rng, i), 1).
double empirical_mse(const StochasticClassifier& clf, const TruthFn& truth, const PointSampler& mu_sampler,
                     std::size_t n_maj, std::size_t n_points, const RngStream& rng, MseOptions options = {});

}  // namespace cfnn::amplify
