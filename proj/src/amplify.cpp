#include "cfnn/amplify/amplify.hpp"

#include <algorithm>
#include <string>

#include "cfnn/error.hpp"
#include "cfnn/linear.hpp"

namespace cfnn::amplify {

std::vector<std::size_t> StochasticClassifier::sample_counts(std::span<const double> x, std::size_t n,
                                                             const RngStream& point_stream) const {
  std::vector<std::size_t> counts(num_classes(), 0);
  for (std::size_t j = 0; j < n; ++j) {
    RngStream draw = point_stream.split(j);
    const std::size_t label = sample(x, draw);
    require(label < counts.size(), "classifier returned label " + std::to_string(label) + " out of range");
    ++counts[label];
  }
  return counts;
}

ProbabilityEstimate ProbabilityEstimate::from_counts(std::vector<std::size_t> counts) {
  ProbabilityEstimate est;
  est.counts = std::move(counts);
  for (std::size_t c : est.counts) est.n += c;
  require(est.n > 0, "probability estimate needs at least one sample");
  est.p_hat.resize(est.counts.size());
  for (std::size_t k = 0; k < est.counts.size(); ++k) {
    est.p_hat[k] = static_cast<double>(est.counts[k]) / static_cast<double>(est.n);
  }
  return est;
}

std::size_t argmax(std::span<const double> values) {
  require(!values.empty(), "argmax of an empty vector");
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[best]) best = k;
  }
  return best;
}

std::size_t argmax(std::span<const std::size_t> values) {
  require(!values.empty(), "argmax of an empty vector");
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[best]) best = k;
  }
  return best;
}

std::size_t majority(std::span<const std::size_t> labels, std::size_t num_classes) {
  require(!labels.empty(), "majority of an empty label sequence");
  require(num_classes >= 1, "majority needs at least one class");
  std::vector<std::size_t> counts(num_classes, 0);
  for (std::size_t label : labels) {
    require(label < num_classes, "label " + std::to_string(label) + " out of range for " +
                                     std::to_string(num_classes) + " classes");
    ++counts[label];
  }
  return argmax(std::span<const std::size_t>(counts));
}

ProbabilityEstimate estimate_probs(const StochasticClassifier& clf, std::span<const double> x, std::size_t n,
                                   const RngStream& rng) {
  require(n >= 1, "estimate_probs needs n >= 1");
  auto counts = clf.sample_counts(x, n, rng);
  require(counts.size() == clf.num_classes(), "sample_counts returned the wrong number of classes");
  return ProbabilityEstimate::from_counts(std::move(counts));
}

std::size_t amplified_predict(const StochasticClassifier& clf, std::span<const double> x, std::size_t n,
                              const RngStream& rng) {
  const auto est = estimate_probs(clf, x, n, rng);
  return argmax(std::span<const std::size_t>(est.counts));
}

namespace {

void check_dataset(const Dataset& data, std::size_t num_classes) {
  require(!data.empty(), "dataset is empty");
  for (const auto& pt : data) {
    require(pt.label < num_classes, "dataset label " + std::to_string(pt.label) + " out of range");
  }
}

}  // namespace

double empirical_random_accuracy(const StochasticClassifier& clf, const Dataset& data, std::size_t n,
                                 const RngStream& rng) {
  check_dataset(data, clf.num_classes());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (amplified_predict(clf, data[i].x, n, rng.split(i)) == data[i].label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double point_delta(const ProbabilityEstimate& est, std::size_t label) {
  require(label < est.p_hat.size(), "label out of range");
  double rival = -1.0;
  for (std::size_t k = 0; k < est.p_hat.size(); ++k) {
    if (k != label) rival = std::max(rival, est.p_hat[k]);
  }
  // A single-class problem has no competitor.
  if (rival < 0.0) return est.p_hat[label];
  return est.p_hat[label] - rival;
}

DeltaCurve delta_curve(const StochasticClassifier& clf, const Dataset& data, std::size_t n, const RngStream& rng) {
  check_dataset(data, clf.num_classes());
  DeltaCurve curve;
  curve.delta.reserve(data.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto est = estimate_probs(clf, data[i].x, n, rng.split(i));
    curve.delta.push_back(point_delta(est, data[i].label));
    if (argmax(std::span<const std::size_t>(est.counts)) == data[i].label) ++correct;
  }
  std::sort(curve.delta.begin(), curve.delta.end(), std::greater<>());
  curve.positive_fraction = static_cast<double>(correct) / static_cast<double>(data.size());
  return curve;
}

std::size_t mean_aggregate(const std::vector<std::vector<double>>& outputs) {
  require(!outputs.empty(), "mean_aggregate of no outputs");
  const std::size_t width = outputs.front().size();
  require(width > 0, "mean_aggregate of empty vectors");
  std::vector<double> mean(width, 0.0);
  for (const auto& out : outputs) {
    require(out.size() == width, "mean_aggregate: outputs differ in length");
    for (std::size_t k = 0; k < width; ++k) mean[k] += out[k];
  }
  const double scale = 1.0 / static_cast<double>(outputs.size());
  for (double& v : mean) v *= scale;
  return argmax(std::span<const double>(mean));
}

double empirical_mse(const StochasticClassifier& clf, const TruthFn& truth, const PointSampler& mu_sampler,
                     std::size_t n_maj, std::size_t n_points, const RngStream& rng, MseOptions options) {
  require(clf.num_classes() == 2, "empirical_mse needs a binary classifier");
  require(n_maj % 2 == 1, "empirical_mse needs an odd majority size, got " + std::to_string(n_maj));
  require(n_points >= 1, "empirical_mse needs at least one point");
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < n_points; ++i) {
    const RngStream point = rng.split(i);
    RngStream x_stream = point.split(0);
    const std::vector<double> x = mu_sampler(x_stream);
    const int predicted = sign_of_class(amplified_predict(clf, x, n_maj, point.split(1)));
    if (predicted != truth(x)) ++mismatches;
  }
  const double rate = static_cast<double>(mismatches) / static_cast<double>(n_points);
  return options.squared_pm1 ? 4.0 * rate : rate;
}

}  // namespace cfnn::amplify
