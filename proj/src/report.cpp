#include "qthalf/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "qthalf/field_io.hpp"

namespace qthalf {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("report: cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("report: write failed for '" + path + "'");
}

}  // namespace

bool Report::pass() const {
  for (const MetricEntry& m : metrics)
    if (!m.pass) return false;
  return true;
}

MetricEntry make_metric(const std::string& name, double value, const std::string& relation,
                        double tolerance, const std::string& anchor) {
  MetricEntry m{name, value, relation, tolerance, false, anchor};
  if (std::isnan(value)) {
    m.pass = false;
  } else if (relation == "<=") {
    m.pass = value <= tolerance;
  } else if (relation == ">=") {
    m.pass = value >= tolerance;
  } else if (relation == "abs<=") {
    m.pass = std::abs(value) <= tolerance;
  } else {
    throw std::invalid_argument("make_metric: unknown relation '" + relation + "'");
  }
  return m;
}

std::vector<std::string> emit_report(const Report& rep, const RunConfig& cfg,
                                     const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("report: cannot create directory '" + dir + "': " + ec.message());

  std::vector<std::string> written;

  nlohmann::ordered_json j;
  j["kind"] = rep.kind;
  j["config_hash"] = rep.config_hash;
  j["code_version"] = rep.code_version;
  j["pass"] = rep.pass();
  j["metrics"] = nlohmann::ordered_json::array();
  for (const MetricEntry& m : rep.metrics) {
    nlohmann::ordered_json e;
    e["name"] = m.name;
    e["value"] = m.value;
    e["relation"] = m.relation;
    e["tolerance"] = m.tolerance;
    e["pass"] = m.pass;
    e["anchor"] = m.anchor;
    j["metrics"].push_back(e);
  }
  j["series"] = nlohmann::ordered_json::array();
  for (const Series& s : rep.series) j["series"].push_back(s.name + ".csv");
  j["snapshots"] = nlohmann::ordered_json::array();
  for (const auto& [name, field] : rep.snapshots) j["snapshots"].push_back(name + ".qfield");
  j["notes"] = rep.notes;

  const std::string report_path = (fs::path(dir) / "report.json").string();
  write_file(report_path, j.dump(2) + "\n");
  written.push_back(report_path);

  const std::string config_path = (fs::path(dir) / "config.txt").string();
  write_file(config_path, emit_config(cfg));
  written.push_back(config_path);

  for (const Series& s : rep.series) {
    std::string csv;
    for (std::size_t c = 0; c < s.columns.size(); ++c) {
      if (c) csv += ',';
      csv += s.columns[c];
    }
    csv += '\n';
    for (const auto& row : s.rows) {
      if (row.size() != s.columns.size())
        throw std::runtime_error("report: series '" + s.name + "' row width mismatch");
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) csv += ',';
        csv += fmt_double(row[c]);
      }
      csv += '\n';
    }
    const std::string path = (fs::path(dir) / (s.name + ".csv")).string();
    write_file(path, csv);
    written.push_back(path);
  }

  for (const auto& [name, field] : rep.snapshots) {
    const std::string path = (fs::path(dir) / (name + ".qfield")).string();
    save_field(path, field);
    written.push_back(path);
  }
  return written;
}

}  // namespace qthalf
