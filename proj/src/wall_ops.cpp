#include "qthalf/wall_ops.hpp"

#include <complex>
#include <map>
#include <stdexcept>

namespace qthalf {

SparseRows SparseRows::composed_with(const SparseRows& b) const {
  SparseRows r;
  r.n = n;
  r.rows.resize(n);
  for (int i = 0; i < n; ++i) {
    std::map<int, double> acc;
    for (auto [k, va] : rows[i])
      for (auto [j, vb] : b.rows[k]) acc[j] += va * vb;
    r.rows[i].assign(acc.begin(), acc.end());
  }
  return r;
}

void SparseRows::apply(const double* x, double* y) const {
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (auto [j, v] : rows[i]) s += v * x[j];
    y[i] = s;
  }
}

void SparseRows::apply(const std::complex<double>* x, std::complex<double>* y) const {
  for (int i = 0; i < n; ++i) {
    std::complex<double> s = 0.0;
    for (auto [j, v] : rows[i]) s += v * x[j];
    y[i] = s;
  }
}

SparseRows wall_d1(int n, double h) {
  if (n < 4) throw std::invalid_argument("wall line needs at least 4 points");
  SparseRows d;
  d.n = n;
  d.rows.resize(n);
  const double c = 1.0 / (2.0 * h);
  d.rows[0] = {{0, -3.0 * c}, {1, 4.0 * c}, {2, -c}};
  for (int j = 1; j < n - 1; ++j) d.rows[j] = {{j - 1, -c}, {j + 1, c}};
  d.rows[n - 1] = {{n - 3, c}, {n - 2, -4.0 * c}, {n - 1, 3.0 * c}};
  return d;
}

SparseRows wall_d2(int n, double h) {
  if (n < 4) throw std::invalid_argument("wall line needs at least 4 points");
  SparseRows d;
  d.n = n;
  d.rows.resize(n);
  const double c = 1.0 / (h * h);
  d.rows[0] = {{0, 2.0 * c}, {1, -5.0 * c}, {2, 4.0 * c}, {3, -c}};
  for (int j = 1; j < n - 1; ++j) d.rows[j] = {{j - 1, c}, {j, -2.0 * c}, {j + 1, c}};
  d.rows[n - 1] = {{n - 4, -c}, {n - 3, 4.0 * c}, {n - 2, -5.0 * c}, {n - 1, 2.0 * c}};
  return d;
}

}  // namespace qthalf
