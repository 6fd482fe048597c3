#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfnn/harness/config.hpp"

namespace cfnn::harness {

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
  std::string to_csv() const;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::map<std::string, double> metrics;
  std::map<std::string, bool> checks;
  std::vector<Table> tables;
  std::string version;
  // Wall-clock time is kept out of metrics so that reruns compare equal.
  double runtime_seconds = 0.0;

  const Table& table(const std::string& name) const;
  double metric(const std::string& name) const;
};

std::string artifact_version();

/// Shortest round-trip text for a double; integral values print without a fraction.
std::string format_number(double v);

nlohmann::json to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& doc);

/// JSON goes to `path` (stdout if empty) and every table to `<stem>.<table>.csv` beside it.
/// With format "csv" the first table replaces the JSON document.
void write_report(const ExperimentReport& report, const std::string& path, const std::string& format);

}  // namespace cfnn::harness
