#include "qthalf/field_ops.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qthalf/spectral.hpp"

namespace qthalf {

namespace {

GridField diff_tangential(const GridField& f, int axis, int order) {
  const Grid& g = f.grid();
  auto a = to_modes(f);
  const long tp = g.tan_points();
  const int nw = g.n_wall;
  int idx[2] = {0, 0};
  for (int c = 0; c < f.components(); ++c)
    for (long t = 0; t < tp; ++t) {
      unflatten_tan(g, t, idx);
      std::complex<double> mult;
      if (tan_is_nyquist(g, idx[axis])) {
        mult = 0.0;
      } else {
        const double k = tan_wavenumber(g, idx[axis]);
        mult = (order == 1) ? std::complex<double>(0.0, k) : std::complex<double>(-k * k, 0.0);
      }
      std::complex<double>* line = a.data() + (c * tp + t) * nw;
      for (int j = 0; j < nw; ++j) line[j] *= mult;
    }
  return from_modes(g, f.components(), std::move(a));
}

GridField diff_wall(const GridField& f, int order) {
  const Grid& g = f.grid();
  const SparseRows op =
      (order == 1) ? wall_d1(g.n_wall, g.wall_spacing()) : wall_d2(g.n_wall, g.wall_spacing());
  GridField out(g, f.components());
  const long tp = g.tan_points();
  const int nw = g.n_wall;
  for (int c = 0; c < f.components(); ++c)
    for (long t = 0; t < tp; ++t) {
      const double* x = f.data().data() + (c * tp + t) * nw;
      double* y = out.data().data() + (c * tp + t) * nw;
      op.apply(x, y);
    }
  return out;
}

}  // namespace

GridField diff(const GridField& f, int axis, int order) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dim) throw std::invalid_argument("derivative axis out of range");
  if (order != 1 && order != 2) throw std::invalid_argument("derivative order must be 1 or 2");
  if (axis < g.tan_dirs()) return diff_tangential(f, axis, order);
  return diff_wall(f, order);
}

GridField grad(const GridField& f) {
  const Grid& g = f.grid();
  const int c = f.components();
  GridField out(g, g.dim * c);
  const long block = g.points();
  for (int d = 0; d < g.dim; ++d) {
    GridField dd = diff(f, d, 1);
    std::copy(dd.data().begin(), dd.data().end(),
              out.data().begin() + static_cast<long>(d) * c * block);
  }
  return out;
}

GridField nth_gradient(const GridField& f, int s) {
  if (s < 0) throw std::invalid_argument("gradient order must be >= 0");
  GridField out = f;
  for (int i = 0; i < s; ++i) out = grad(out);
  return out;
}

GridField laplacian(const GridField& f) {
  GridField out = diff(f, 0, 2);
  for (int d = 1; d < f.grid().dim; ++d) out += diff(f, d, 2);
  return out;
}

ScalarField divergence(const VectorField& u) {
  const Grid& g = u.grid();
  ScalarField out(g, 1);
  const long tp = g.tan_points();
  const int nw = g.n_wall;
  for (int d = 0; d < g.dim; ++d) {
    GridField dd = diff(u, d, 1);
    for (long t = 0; t < tp; ++t)
      for (int j = 0; j < nw; ++j) out.at(0, t, j) += dd.at(d, t, j);
  }
  return out;
}

double divergence_residual(const VectorField& u) {
  const Grid& g = u.grid();
  ScalarField dv = divergence(u);
  const long tp = g.tan_points();
  for (long t = 0; t < tp; ++t) {
    dv.at(0, t, 0) = 0.0;
    dv.at(0, t, g.n_wall - 1) = 0.0;
  }
  return lebesgue_norm(dv, 2.0);
}

namespace {

double wall_weight(const Grid& g, int j) {
  const double h = g.wall_spacing();
  return (j == 0 || j == g.n_wall - 1) ? 0.5 * h : h;
}

double point_magnitude(const GridField& f, long t, int j) {
  double s = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    const double v = f.at(c, t, j);
    s += v * v;
  }
  return std::sqrt(s);
}

}  // namespace

double lebesgue_norm(const GridField& f, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("Lebesgue exponent must be >= 1");
  const Grid& g = f.grid();
  const long tp = g.tan_points();
  const int nw = g.n_wall;
  double wt = 1.0;
  for (int d = 0; d < g.tan_dirs(); ++d) wt *= g.tan_spacing();

  const double m = sup_norm(f);
  if (m == 0.0) return 0.0;
  double acc = 0.0;
  for (long t = 0; t < tp; ++t)
    for (int j = 0; j < nw; ++j) {
      const double mag = point_magnitude(f, t, j) / m;
      acc += wt * wall_weight(g, j) * std::pow(mag, q);
    }
  return m * std::pow(acc, 1.0 / q);
}

double sobolev_seminorm(const GridField& f, double q, int s) {
  return lebesgue_norm(nth_gradient(f, s), q);
}

double sup_norm(const GridField& f) {
  const Grid& g = f.grid();
  const long tp = g.tan_points();
  double m = 0.0;
  for (long t = 0; t < tp; ++t)
    for (int j = 0; j < g.n_wall; ++j) m = std::max(m, point_magnitude(f, t, j));
  return m;
}

void filter_nyquist(GridField& f) {
  const Grid& g = f.grid();
  auto a = to_modes(f);
  const long tp = g.tan_points();
  const int nw = g.n_wall;
  int idx[2] = {0, 0};
  for (int c = 0; c < f.components(); ++c)
    for (long t = 0; t < tp; ++t) {
      unflatten_tan(g, t, idx);
      bool ny = false;
      for (int d = 0; d < g.tan_dirs(); ++d) ny = ny || tan_is_nyquist(g, idx[d]);
      if (!ny) continue;
      std::complex<double>* line = a.data() + (c * tp + t) * nw;
      std::fill(line, line + nw, std::complex<double>(0.0, 0.0));
    }
  GridField out = from_modes(g, f.components(), std::move(a));
  f = out;
}

void project_sym_traceless(TensorField& q) {
  const Grid& g = q.grid();
  const long tp = g.tan_points();
  for (long t = 0; t < tp; ++t)
    for (int j = 0; j < g.n_wall; ++j)
      set_tensor(q, t, j, SymTraceless(tensor_at(q, t, j)).matrix());
}

void apply_boundary(State& st) {
  const Grid& g = st.u.grid();
  const long tp = g.tan_points();
  const int nw = g.n_wall;
  for (int c = 0; c < st.u.components(); ++c)
    for (long t = 0; t < tp; ++t) {
      st.u.at(c, t, 0) = 0.0;
      st.u.at(c, t, nw - 1) = 0.0;
    }
  // One-sided first derivative (-3 f0 + 4 f1 - f2) / 2h = 0 solved for f0.
  for (int c = 0; c < st.q.components(); ++c)
    for (long t = 0; t < tp; ++t) {
      st.q.at(c, t, 0) = (4.0 * st.q.at(c, t, 1) - st.q.at(c, t, 2)) / 3.0;
      st.q.at(c, t, nw - 1) = (4.0 * st.q.at(c, t, nw - 2) - st.q.at(c, t, nw - 3)) / 3.0;
    }
}

double wall_normal_derivative_residual(const TensorField& q) {
  const Grid& g = q.grid();
  const double h = g.wall_spacing();
  const long tp = g.tan_points();
  const int nw = g.n_wall;
  double m = 0.0;
  for (int c = 0; c < q.components(); ++c)
    for (long t = 0; t < tp; ++t) {
      const double bottom =
          (-3.0 * q.at(c, t, 0) + 4.0 * q.at(c, t, 1) - q.at(c, t, 2)) / (2.0 * h);
      const double top =
          (3.0 * q.at(c, t, nw - 1) - 4.0 * q.at(c, t, nw - 2) + q.at(c, t, nw - 3)) / (2.0 * h);
      m = std::max({m, std::fabs(bottom), std::fabs(top)});
    }
  return m;
}

double max_abs_diff(const GridField& a, const GridField& b) {
  double m = 0.0;
  for (long i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace qthalf
