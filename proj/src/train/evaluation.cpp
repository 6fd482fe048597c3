#include "cfnn/train/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cfnn/error.hpp"
#include "cfnn/train/matrix.hpp"

namespace cfnn::train {

std::size_t ModelClassifier::sample(std::span<const double> x, RngStream& rng) const {
  const auto logits = model_.logits(x, model_.draw(rng));
  return amplify::argmax(std::span<const double>(logits));
}

double majority_accuracy(const Model& model, const Dataset& data, std::size_t n, const RngStream& rng) {
  return amplify::empirical_random_accuracy(ModelClassifier(model), data, n, rng);
}

double mean_accuracy(const Model& model, const Dataset& data, std::size_t n, const RngStream& rng) {
  require(!data.empty(), "dataset is empty");
  require(n >= 1, "mean aggregation needs n >= 1");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const RngStream point = rng.split(i);
    std::vector<std::vector<double>> outputs;
    outputs.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      RngStream s = point.split(j);
      outputs.push_back(softmax(model.logits(data[i].x, model.draw(s))));
    }
    if (amplify::mean_aggregate(outputs) == data[i].label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double standard_accuracy(const Model& model, const Dataset& data) {
  require(!data.empty(), "dataset is empty");
  const RandomDraw expected = model.mean_draw();
  std::size_t correct = 0;
  for (const auto& pt : data) {
    const auto logits = model.logits(pt.x, expected);
    if (amplify::argmax(std::span<const double>(logits)) == pt.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

std::vector<SweepRow> sampling_generalization(const amplify::StochasticClassifier& clf, const Dataset& data,
                                              const std::vector<std::size_t>& n_values, std::size_t repeats,
                                              const RngStream& rng) {
  require(!n_values.empty(), "sampling sweep needs at least one n");
  require(repeats >= 1, "sampling sweep needs at least one repeat");
  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    require(n_values[k] >= 1, "sample counts must be positive");
    std::vector<double> ra(repeats);
    for (std::size_t rep = 0; rep < repeats; ++rep) {
      ra[rep] = amplify::empirical_random_accuracy(clf, data, n_values[k], rng.split(k).split(rep));
    }
    // Shifted by the first value so that identical repeats give an exact mean and zero spread.
    double shift = 0.0;
    for (double v : ra) shift += v - ra[0];
    const double mean = ra[0] + shift / static_cast<double>(repeats);
    double var = 0.0;
    for (double v : ra) var += (v - mean) * (v - mean);
    const double sd = repeats > 1 ? std::sqrt(var / static_cast<double>(repeats - 1)) : 0.0;
    rows.push_back({n_values[k], mean, sd, repeats});
  }
  return rows;
}

double best_linear_accuracy_2d(const Dataset& data, std::size_t angles) {
  require(!data.empty(), "dataset is empty");
  require(angles >= 1, "angle grid must be nonempty");
  for (const auto& pt : data) {
    require(pt.x.size() == 2 && pt.label < 2, "best_linear_accuracy_2d needs a binary 2-D dataset");
  }
  const std::size_t n = data.size();
  std::size_t positives = 0;
  for (const auto& pt : data) positives += pt.label;
  std::size_t best = std::max(positives, n - positives);
  std::vector<std::pair<double, std::size_t>> proj(n);
  for (std::size_t a = 0; a < angles; ++a) {
    // Directions over a full turn cover both orientations of each line.
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(angles);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    for (std::size_t i = 0; i < n; ++i) proj[i] = {c * data[i].x[0] + s * data[i].x[1], data[i].label};
    std::sort(proj.begin(), proj.end());
    // Predict 1 above the threshold: start with every point predicted 1.
    std::size_t correct = positives;
    for (std::size_t i = 0; i < n; ++i) {
      correct += proj[i].second == 0 ? 1 : 0;
      correct -= proj[i].second == 1 ? 1 : 0;
      const bool boundary = i + 1 == n || proj[i + 1].first != proj[i].first;
      if (boundary) best = std::max(best, correct);
    }
  }
  return static_cast<double>(best) / static_cast<double>(n);
}

}  // namespace cfnn::train
