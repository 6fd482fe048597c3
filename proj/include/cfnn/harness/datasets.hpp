#pragma once

// Synthetic labelled datasets. Point i is generated from split(root, i), so
// a dataset is a pure function of (name, size, seed, params).

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cfnn/amplify/amplify.hpp"

namespace cfnn::harness {

using amplify::Dataset;
using Interval = std::pair<double, double>;

struct DatasetParams {
  /// Ambient dimension (shell only; the others are 2-D).
  std::size_t d = 2;
  /// shell: radius intervals sampled uniformly in radius, labels by |x| vs R.
  std::vector<Interval> intervals{{0.2, 0.8}, {1.2, 3.0}};
  double R = 1.0;
  /// circles: inner disk and outer annulus, both sampled uniformly by area.
  Interval inner{0.0, 0.8};
  Interval outer{1.2, 1.8};
  /// moons: Gaussian noise added to both coordinates.
  double noise = 0.1;
  /// blobs: centres at (+-separation/2, 0) with isotropic spread.
  double separation = 4.0;
  double spread = 0.5;
};

std::vector<std::string> dataset_names();

Dataset gen_dataset(const std::string& name, std::size_t size, std::uint64_t seed, const DatasetParams& params = {});

/// Radius drawn uniformly from the union of intervals (weighted by length),
/// direction uniform on the sphere.
std::vector<double> sample_shell_point(numerics::RngStream& rng, std::size_t d, const std::vector<Interval>& intervals);

void check_intervals(const std::vector<Interval>& intervals);

/// CSV with header x0,...,x{d-1},label; label is the class index.
void write_dataset_csv(const Dataset& data, const std::string& path);
Dataset read_dataset_csv(const std::string& path);

}  // namespace cfnn::harness
