#include "cfnn/harness/report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cfnn/error.hpp"

#ifndef CFNN_VERSION
#define CFNN_VERSION "0.0.0"
#endif

namespace cfnn::harness {

using nlohmann::json;

std::string artifact_version() { return "cfnn " CFNN_VERSION; }

std::string format_number(double v) {
  if (!std::isfinite(v)) throw RuntimeFailure("non-finite value in an emitted table");
  if (v == std::trunc(v) && std::fabs(v) < 9.0e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void Table::add(std::vector<double> row) {
  require(row.size() == columns.size(), "table row width does not match its columns");
  rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
  std::ostringstream out;
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
    out << '\n';
  }
  return out.str();
}

const Table& ExperimentReport::table(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return t;
  }
  throw DomainError("report has no table '" + name + "'");
}

double ExperimentReport::metric(const std::string& name) const {
  const auto it = metrics.find(name);
  require(it != metrics.end(), "report has no metric '" + name + "'");
  return it->second;
}

json to_json(const ExperimentReport& r) {
  json j;
  j["version"] = r.version;
  j["kind"] = r.config.kind;
  j["seed"] = r.config.seed;
  j["config"] = to_json(r.config);
  j["metrics"] = r.metrics;
  j["checks"] = r.checks;
  j["runtime_seconds"] = r.runtime_seconds;
  json tables = json::array();
  for (const auto& t : r.tables) tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", t.rows}});
  j["tables"] = tables;
  return j;
}

ExperimentReport report_from_json(const json& j) {
  ExperimentReport r;
  try {
    r.config = config_from_json(j.at("config"));
    r.version = j.value("version", "");
    r.metrics = j.at("metrics").get<std::map<std::string, double>>();
    if (j.contains("checks")) r.checks = j.at("checks").get<std::map<std::string, bool>>();
    r.runtime_seconds = j.value("runtime_seconds", 0.0);
    for (const auto& t : j.at("tables")) {
      r.tables.push_back({t.at("name").get<std::string>(), t.at("columns").get<std::vector<std::string>>(),
                          t.at("rows").get<std::vector<std::vector<double>>>()});
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed report: ") + e.what());
  }
  return r;
}

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw RuntimeFailure("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw RuntimeFailure("write to '" + path + "' failed");
}

}  // namespace

void write_report(const ExperimentReport& report, const std::string& path, const std::string& format) {
  require(format == "json" || format == "csv", "format must be json or csv");
  if (path.empty()) {
    if (format == "json") {
      std::cout << to_json(report).dump(2) << '\n';
    } else {
      for (std::size_t i = 0; i < report.tables.size(); ++i) {
        if (i) std::cout << '\n';
        std::cout << report.tables[i].to_csv();
      }
    }
    return;
  }
  const std::filesystem::path p(path);
  const std::filesystem::path stem = p.parent_path() / p.stem();
  for (std::size_t i = 0; i < report.tables.size(); ++i) {
    const auto& t = report.tables[i];
    if (format == "csv" && i == 0) {
      write_text(path, t.to_csv());
    } else {
      write_text(stem.string() + "." + t.name + ".csv", t.to_csv());
    }
  }
  if (format == "json") write_text(path, to_json(report).dump(2) + "\n");
}

}  // namespace cfnn::harness
