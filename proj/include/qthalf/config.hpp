#pragma once

#include <cstdint>
#include <string>

#include "qthalf/wellposed.hpp"

namespace qthalf {

// Flat sectioned key-value configuration ([model], [grid], [scheme],
// [experiment]); every key has a default, unknown keys are errors, and
// validation collects all violations before reporting.
struct RunConfig {
  // [model]
  int dim = 2;
  double xi = 1.0;
  double a = 1.0;
  double b = 0.5;
  double c = 0.7;
  // [grid]
  int n_tan = 32;
  int n_wall = 65;
  double tan_extent = 5.0;
  double wall_extent = 5.0;
  // [scheme]
  Rational theta{1, 4};
  int p_margin = 2;
  // [experiment]
  std::string kind = "invariants";
  std::uint64_t seed = 42;
  std::string out = "out";
  double T = 1.0;
  double dt = 0.02;
  double amplitude = 1e-4;
  int k_max = 6;         // picard iterations
  int band = 3;          // tangential modes in generated data
  double epsilon = 0.0;  // sector aperture; 0 = default headroom
  double lambda_min = 1.0;
  double lambda_max = 100.0;
  int n_lambda = 13;
  int instances = 1000;  // invariant sweep draws
  int gn_fields = 200;
  int gn_level = 0;
  double q_tilde = 0.0;  // smoothing pair override; 0 = scheme default (2, 2N)
  double q_norm = 0.0;
  int store_every = 1;
  // tolerances
  double tol_invariant = 1e-12;
  double tol_smoothing_slope = -0.6;  // fitted slope must sit at or below
  double tol_decay_dev = 0.15;
  double tol_gn_variation = 0.05;
  double tol_delta = 0.5;
  double tol_residual = 1e-8;
  double tol_e_total = 1e-2;

  bool operator==(const RunConfig&) const = default;
};

bool valid_kind(const std::string& kind);

// Both throw std::runtime_error whose message lists every violation found,
// not just the first.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Canonical text form; parse_config_text(emit_config(c)) == c.
std::string emit_config(const RunConfig& cfg);

// FNV-1a (64 bit) of the canonical text, as fixed-width hex.
std::string config_hash_hex(const RunConfig& cfg);

}  // namespace qthalf
