#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qthalf/config.hpp"
#include "qthalf/fields.hpp"

namespace qthalf {

// One checked number: value, the relation it must satisfy against its
// tolerance, the verdict, and the module operation it came from.
struct MetricEntry {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<=", ">=", "abs<="
  double tolerance = 0.0;
  bool pass = false;
  std::string anchor;
};

struct Series {
  std::string name;  // file stem of the emitted CSV
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string kind;
  std::string config_hash;
  std::string code_version;
  std::vector<MetricEntry> metrics;
  std::vector<Series> series;
  std::vector<std::pair<std::string, GridField>> snapshots;  // written as <name>.qfield
  std::vector<std::string> notes;

  bool pass() const;
};

// Evaluates the relation; NaN values never pass.
MetricEntry make_metric(const std::string& name, double value, const std::string& relation,
                        double tolerance, const std::string& anchor);

// Writes report.json (stable key order), config.txt (canonical echo), one
// <series>.csv per series, and one <snapshot>.qfield per snapshot into dir;
// creates the directory.  Returns the paths written.  Identical inputs
// produce byte-identical files.
std::vector<std::string> emit_report(const Report& rep, const RunConfig& cfg,
                                     const std::string& dir);

}  // namespace qthalf
