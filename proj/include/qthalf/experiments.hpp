#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qthalf/config.hpp"
#include "qthalf/report.hpp"

namespace qthalf {

// Max residual per named pointwise algebraic invariant over `instances`
// random draws at the given dimension.  Model coefficients vary per draw.
std::vector<std::pair<std::string, double>> invariant_sweep(int dim, int instances,
                                                            std::uint64_t seed);

// Least-squares slope of log y against log x over the given points; every
// x and y must be positive.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Executes the configured suite and returns its report (metrics evaluated
// against the configured tolerances, series ready for CSV emission).
Report run_experiment(const RunConfig& cfg);

}  // namespace qthalf
