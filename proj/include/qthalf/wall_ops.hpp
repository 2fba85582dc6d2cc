#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace qthalf {

// Sparse row representation of wall-normal difference operators on a uniform
// line of n points with spacing h.  Interior rows are second-order central;
// boundary rows are one-sided second-order.
struct SparseRows {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> rows;

  // (A B) as sparse rows; used to compose third derivatives d1 * d2.
  SparseRows composed_with(const SparseRows& b) const;

  void apply(const double* x, double* y) const;
  void apply(const std::complex<double>* x, std::complex<double>* y) const;
};

SparseRows wall_d1(int n, double h);  // first derivative
SparseRows wall_d2(int n, double h);  // second derivative

}  // namespace qthalf
