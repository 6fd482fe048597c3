#pragma once

// Test-time aggregation of a trained model: majority over sampled draws,
// mean of sampled softmax outputs, or one pass with expected random inputs.

#include <cstddef>
#include <vector>

#include "cfnn/amplify/amplify.hpp"
#include "cfnn/train/net.hpp"

namespace cfnn::train {

using amplify::Dataset;

/// A model viewed as a stochastic classifier: one draw of its random ports,
/// then argmax of the logits.
class ModelClassifier final : public amplify::StochasticClassifier {
 public:
  explicit ModelClassifier(const Model& model) : model_(model) {}
  std::size_t num_classes() const override { return model_.num_classes(); }
  std::size_t sample(std::span<const double> x, RngStream& rng) const override;

 private:
  const Model& model_;
};

/// Empirical random accuracy with n draws per point.
double majority_accuracy(const Model& model, const Dataset& data, std::size_t n, const RngStream& rng);
/// Argmax of the mean softmax over n draws per point. Uses the same draws
/// as majority_accuracy for equal rng.
double mean_accuracy(const Model& model, const Dataset& data, std::size_t n, const RngStream& rng);
/// One deterministic pass with every random port at its expectation.
double standard_accuracy(const Model& model, const Dataset& data);

struct SweepRow {
  std::size_t n_test = 0;
  double ra_mean = 0.0;
  double ra_std = 0.0;
  std::size_t repeats = 0;
};

/// Random accuracy at each n, repeated with fresh streams split(rng, rep).
/// ra_std is the sample standard deviation (0 for a single repeat).
std::vector<SweepRow> sampling_generalization(const amplify::StochasticClassifier& clf, const Dataset& data,
                                              const std::vector<std::size_t>& n_values, std::size_t repeats,
                                              const RngStream& rng);

/// Highest accuracy of any affine classifier on a 2-D binary dataset,
/// searched over `angles` directions and every threshold between projections.
double best_linear_accuracy_2d(const Dataset& data, std::size_t angles = 3600);

}  // namespace cfnn::train
