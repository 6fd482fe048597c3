#include "cfnn/harness/datasets.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cfnn/error.hpp"
#include "cfnn/linear.hpp"
#include "cfnn/numerics/sampling.hpp"

namespace cfnn::harness {

using numerics::RngStream;

namespace {

constexpr std::uint64_t kDatasetStream = 0x64617461ULL;

std::vector<double> annulus_point(RngStream& rng, const Interval& radii) {
  const double r2 = numerics::sample_uniform(rng, radii.first * radii.first, radii.second * radii.second);
  const double t = numerics::sample_uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double r = std::sqrt(r2);
  return {r * std::cos(t), r * std::sin(t)};
}

void check_annulus(const Interval& radii, const char* what) {
  require(radii.first >= 0.0 && radii.second > radii.first,
          std::string(what) + " radii must satisfy 0 <= lo < hi");
}

}  // namespace

std::vector<std::string> dataset_names() { return {"shell", "circles", "moons", "blobs"}; }

void check_intervals(const std::vector<Interval>& intervals) {
  require(!intervals.empty(), "radius interval list is empty");
  for (const auto& [lo, hi] : intervals) {
    require(lo >= 0.0 && hi > lo, "radius intervals must satisfy 0 <= lo < hi");
  }
}

std::vector<double> sample_shell_point(RngStream& rng, std::size_t d, const std::vector<Interval>& intervals) {
  check_intervals(intervals);
  std::vector<double> lengths;
  for (const auto& [lo, hi] : intervals) lengths.push_back(hi - lo);
  const auto& chosen = intervals[numerics::sample_categorical(rng, lengths)];
  const double r = numerics::sample_uniform(rng, chosen.first, chosen.second);
  auto x = numerics::sample_unit_vector(rng, d);
  for (double& v : x) v *= r;
  return x;
}

Dataset gen_dataset(const std::string& name, std::size_t size, std::uint64_t seed, const DatasetParams& params) {
  require(size >= 1, "dataset size must be at least 1");
  const RngStream root(seed, kDatasetStream);
  Dataset data;
  data.reserve(size);
  if (name == "shell") {
    require(params.d >= 1, "shell dimension must be at least 1");
    require(params.R > 0.0, "shell radius must be positive");
    check_intervals(params.intervals);
    for (std::size_t i = 0; i < size; ++i) {
      RngStream rng = root.split(i);
      auto x = sample_shell_point(rng, params.d, params.intervals);
      double norm2 = 0.0;
      for (double v : x) norm2 += v * v;
      const std::size_t label = class_of_sign(sign_of(std::sqrt(norm2) - params.R));
      data.push_back({std::move(x), label});
    }
  } else if (name == "circles") {
    check_annulus(params.inner, "circles inner");
    check_annulus(params.outer, "circles outer");
    // First half inside (class 0), second half on the annulus (class 1).
    const std::size_t inside = (size + 1) / 2;
    for (std::size_t i = 0; i < size; ++i) {
      RngStream rng = root.split(i);
      const bool in = i < inside;
      data.push_back({annulus_point(rng, in ? params.inner : params.outer), in ? 0u : 1u});
    }
  } else if (name == "moons") {
    require(params.noise >= 0.0, "moons noise must be nonnegative");
    const std::size_t upper = (size + 1) / 2;
    for (std::size_t i = 0; i < size; ++i) {
      RngStream rng = root.split(i);
      const double t = numerics::sample_uniform(rng, 0.0, std::numbers::pi);
      const bool top = i < upper;
      std::vector<double> x = top ? std::vector<double>{std::cos(t), std::sin(t)}
                                  : std::vector<double>{1.0 - std::cos(t), 0.5 - std::sin(t)};
      x[0] += params.noise * rng.normal();
      x[1] += params.noise * rng.normal();
      data.push_back({std::move(x), top ? 0u : 1u});
    }
  } else if (name == "blobs") {
    require(params.spread > 0.0, "blob spread must be positive");
    const std::size_t left = (size + 1) / 2;
    for (std::size_t i = 0; i < size; ++i) {
      RngStream rng = root.split(i);
      const bool first = i < left;
      const double cx = (first ? -0.5 : 0.5) * params.separation;
      data.push_back({{cx + params.spread * rng.normal(), params.spread * rng.normal()}, first ? 0u : 1u});
    }
  } else {
    throw DomainError("unknown dataset '" + name + "' (expected shell, circles, moons or blobs)");
  }
  return data;
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
  require(!data.empty(), "cannot write an empty dataset");
  std::ofstream out(path);
  if (!out) throw RuntimeFailure("cannot write dataset '" + path + "'");
  const std::size_t d = data.front().x.size();
  for (std::size_t k = 0; k < d; ++k) out << 'x' << k << ',';
  out << "label\n";
  out.precision(17);
  for (const auto& pt : data) {
    require(pt.x.size() == d, "dataset points differ in dimension");
    for (double v : pt.x) out << v << ',';
    out << pt.label << '\n';
  }
  if (!out) throw RuntimeFailure("failed writing dataset '" + path + "'");
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RuntimeFailure("cannot read dataset '" + path + "'");
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "dataset file is empty");
  std::size_t columns = 1;
  for (char c : line) columns += c == ',' ? 1 : 0;
  require(columns >= 2, "dataset header needs at least one coordinate and a label");
  std::ostringstream expected;
  for (std::size_t k = 0; k + 1 < columns; ++k) expected << 'x' << k << ',';
  expected << "label";
  require(line == expected.str(), "dataset header must be '" + expected.str() + "'");
  Dataset data;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    amplify::LabeledPoint pt;
    std::size_t k = 0;
    while (std::getline(row, cell, ',')) {
      try {
        if (k + 1 < columns) {
          pt.x.push_back(std::stod(cell));
        } else {
          pt.label = static_cast<std::size_t>(std::stoul(cell));
        }
      } catch (const std::exception&) {
        throw DomainError("dataset line " + std::to_string(line_no) + ": cannot parse '" + cell + "'");
      }
      ++k;
    }
    require(k == columns, "dataset line " + std::to_string(line_no) + " has the wrong number of fields");
    data.push_back(std::move(pt));
  }
  return data;
}

}  // namespace cfnn::harness
