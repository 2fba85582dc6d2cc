#include "qthalf/mode_system.hpp"

#include <lapacke.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "qthalf/field_ops.hpp"
#include "qthalf/spectral.hpp"
#include "qthalf/wall_ops.hpp"

namespace qthalf {

const QBasis& qbasis(int dim) {
  static const QBasis b2 = [] {
    QBasis b;
    b.dim = 2;
    b.nq = 2;
    b.rep[0] = {0, 0};
    b.rep[1] = {0, 1};
    b.expansion[0][0] = {{0, 1.0}};
    b.expansion[0][1] = {{1, 1.0}};
    b.expansion[1][0] = {{1, 1.0}};
    b.expansion[1][1] = {{0, -1.0}};
    return b;
  }();
  static const QBasis b3 = [] {
    QBasis b;
    b.dim = 3;
    b.nq = 5;
    b.rep[0] = {0, 0};
    b.rep[1] = {1, 1};
    b.rep[2] = {0, 1};
    b.rep[3] = {0, 2};
    b.rep[4] = {1, 2};
    b.expansion[0][0] = {{0, 1.0}};
    b.expansion[1][1] = {{1, 1.0}};
    b.expansion[2][2] = {{0, -1.0}, {1, -1.0}};
    b.expansion[0][1] = b.expansion[1][0] = {{2, 1.0}};
    b.expansion[0][2] = b.expansion[2][0] = {{3, 1.0}};
    b.expansion[1][2] = b.expansion[2][1] = {{4, 1.0}};
    return b;
  }();
  if (dim == 2) return b2;
  if (dim == 3) return b3;
  throw std::invalid_argument("dimension must be 2 or 3");
}

GridField rep_components(const TensorField& q) {
  const Grid& g = q.grid();
  const QBasis& b = qbasis(g.dim);
  GridField out(g, b.nq);
  const long tp = g.tan_points();
  for (int c = 0; c < b.nq; ++c) {
    const auto [i, j] = b.rep[c];
    const int src = i * g.dim + j;
    for (long t = 0; t < tp; ++t)
      for (int w = 0; w < g.n_wall; ++w) out.at(c, t, w) = q.at(src, t, w);
  }
  return out;
}

TensorField expand_rep_components(const GridField& reps) {
  const Grid& g = reps.grid();
  const QBasis& b = qbasis(g.dim);
  TensorField q = make_tensor(g);
  const long tp = g.tan_points();
  for (int i = 0; i < g.dim; ++i)
    for (int j = 0; j < g.dim; ++j) {
      const int dst = i * g.dim + j;
      for (const auto& [c, w] : b.expansion[i][j])
        for (long t = 0; t < tp; ++t)
          for (int jw = 0; jw < g.n_wall; ++jw) q.at(dst, t, jw) += w * reps.at(c, t, jw);
    }
  return q;
}

namespace {

using cplx = std::complex<double>;

// Assembles one tangential mode of the coupled system through `add(row, col, value)`.
// Unknowns per wall point j: u_0..u_{dim-1}, q_0..q_{nq-1}, p, at index j*block + e.
template <typename F>
void assemble_mode(const Grid& g, const ModelParams& prm, cplx lambda, const double* k,
                   const SparseRows& d1, const SparseRows& d2, const SparseRows& d1d2, F&& add) {
  const QBasis& qb = qbasis(g.dim);
  const int dim = g.dim;
  const int dirs = g.tan_dirs();
  const int nq = qb.nq;
  const int block = dim + nq + 1;
  const int n = g.n_wall;
  const int pcol = dim + nq;
  const double beta = prm.beta;
  double k2 = 0.0;
  for (int m = 0; m < dirs; ++m) k2 += k[m] * k[m];

  auto idx = [&](int j, int e) { return j * block + e; };
  auto dk = [&](int d) { return cplx(0.0, k[d]); };  // tangential derivative multiplier

  for (int j = 1; j < n - 1; ++j) {
    // Momentum rows.
    for (int i = 0; i < dim; ++i) {
      const int r = idx(j, i);
      add(r, idx(j, i), lambda + k2);
      for (auto [jj, v] : d2.rows[j]) add(r, idx(jj, i), cplx(-v, 0.0));
      if (i < dirs) {
        add(r, idx(j, pcol), dk(i));
      } else {
        for (auto [jj, v] : d1.rows[j]) add(r, idx(jj, pcol), cplx(v, 0.0));
      }
      for (int d = 0; d < dim; ++d)
        for (const auto& [c, w] : qb.expansion[i][d]) {
          const double bw = beta * w;
          if (d < dirs) {
            const cplx m = bw * dk(d);
            add(r, idx(j, dim + c), m * (-k2 - prm.a));
            for (auto [jj, v] : d2.rows[j]) add(r, idx(jj, dim + c), m * v);
          } else {
            for (auto [jj, v] : d1.rows[j]) add(r, idx(jj, dim + c), cplx(bw * (-k2 - prm.a) * v, 0.0));
            for (auto [jj, v] : d1d2.rows[j]) add(r, idx(jj, dim + c), cplx(bw * v, 0.0));
          }
        }
    }
    // Q-component rows: lambda q - beta D(u) - lap q + a q = G.
    for (int c = 0; c < nq; ++c) {
      const int r = idx(j, dim + c);
      add(r, idx(j, dim + c), lambda + prm.a + k2);
      for (auto [jj, v] : d2.rows[j]) add(r, idx(jj, dim + c), cplx(-v, 0.0));
      const auto [iq, jq] = qb.rep[c];
      const std::pair<int, int> halves[2] = {{jq, iq}, {iq, jq}};  // (deriv dir, u comp)
      for (const auto& [dd, uu] : halves) {
        if (dd < dirs) {
          add(r, idx(j, uu), -0.5 * beta * dk(dd));
        } else {
          for (auto [jj, v] : d1.rows[j]) add(r, idx(jj, uu), cplx(-0.5 * beta * v, 0.0));
        }
      }
    }
    // Continuity.  At the zero tangential mode the centered stencil plus the
    // two Dirichlet ends would leave a checkerboard kernel in u_N (balanced
    // through p), so the exact continuum consequence u_N = 0 is imposed
    // instead.
    {
      const int r = idx(j, pcol);
      if (k2 == 0.0) {
        add(r, idx(j, dim - 1), cplx(1.0, 0.0));
      } else {
        for (int m = 0; m < dirs; ++m) add(r, idx(j, m), dk(m));
        for (auto [jj, v] : d1.rows[j]) add(r, idx(jj, dim - 1), cplx(v, 0.0));
      }
    }
  }

  // Wall and top rows: no-slip, homogeneous Neumann for Q, pressure gauge.
  for (int j : {0, n - 1}) {
    for (int i = 0; i < dim; ++i) add(idx(j, i), idx(j, i), cplx(1.0, 0.0));
    for (int c = 0; c < nq; ++c)
      for (auto [jj, v] : d1.rows[j]) add(idx(j, dim + c), idx(jj, dim + c), cplx(v, 0.0));
  }
  add(idx(0, pcol), idx(0, pcol), cplx(1.0, 0.0));
  for (auto [jj, v] : d1.rows[n - 1]) add(idx(n - 1, pcol), idx(jj, pcol), cplx(v, 0.0));
}

}  // namespace

ShiftedSolver::ShiftedSolver(const Grid& g, const ModelParams& prm, cplx lambda)
    : grid_(g), prm_(prm), lambda_(lambda) {
  if (g.dim != prm.dim) throw std::invalid_argument("grid and model dimensions disagree");
  const QBasis& qb = qbasis(g.dim);
  block_ = g.dim + qb.nq + 1;
  kl_ = ku_ = 4 * block_ - 1;
  ldab_ = 2 * kl_ + ku_ + 1;
  nsys_ = block_ * g.n_wall;

  const SparseRows d1 = wall_d1(g.n_wall, g.wall_spacing());
  const SparseRows d2 = wall_d2(g.n_wall, g.wall_spacing());
  const SparseRows d1d2 = d1.composed_with(d2);

  const long tp = g.tan_points();
  factors_.resize(tp);
  int idx[2] = {0, 0};
  double k[2] = {0.0, 0.0};
  for (long t = 0; t < tp; ++t) {
    unflatten_tan(g, t, idx);
    bool ny = false;
    for (int d = 0; d < g.tan_dirs(); ++d) ny = ny || tan_is_nyquist(g, idx[d]);
    if (ny) {
      factors_[t].skip = true;
      continue;
    }
    for (int d = 0; d < g.tan_dirs(); ++d) k[d] = tan_wavenumber(g, idx[d]);

    ModeFactor& mf = factors_[t];
    mf.ab.assign(static_cast<size_t>(ldab_) * nsys_, cplx(0.0, 0.0));
    mf.ipiv.assign(nsys_, 0);
    auto add = [&](int r, int c, cplx v) { mf.ab[static_cast<size_t>(c) * ldab_ + kl_ + ku_ + r - c] += v; };
    assemble_mode(g, prm, lambda, k, d1, d2, d1d2, add);

    const lapack_int info = LAPACKE_zgbtrf(
        LAPACK_COL_MAJOR, nsys_, nsys_, kl_, ku_,
        reinterpret_cast<lapack_complex_double*>(mf.ab.data()), ldab_, mf.ipiv.data());
    if (info != 0)
      throw std::runtime_error("singular mode matrix at tangential mode " + std::to_string(t) +
                               " (lambda = " + std::to_string(lambda.real()) + " + " +
                               std::to_string(lambda.imag()) + "i, zgbtrf info " +
                               std::to_string(info) + ")");
  }
}

void ShiftedSolver::wavenumbers(long t, double* k) const {
  int idx[2] = {0, 0};
  unflatten_tan(grid_, t, idx);
  for (int d = 0; d < grid_.tan_dirs(); ++d) k[d] = tan_wavenumber(grid_, idx[d]);
}

void ShiftedSolver::solve_modes(const std::vector<cplx>& f, const std::vector<cplx>& gq,
                                std::vector<cplx>& u, std::vector<cplx>& q, std::vector<cplx>& p,
                                double* residual) const {
  const Grid& g = grid_;
  const QBasis& qb = qbasis(g.dim);
  const int dim = g.dim;
  const int nq = qb.nq;
  const int nw = g.n_wall;
  const long tp = g.tan_points();

  u.assign(static_cast<size_t>(dim) * tp * nw, cplx(0.0, 0.0));
  q.assign(static_cast<size_t>(nq) * tp * nw, cplx(0.0, 0.0));
  p.assign(static_cast<size_t>(tp) * nw, cplx(0.0, 0.0));

  const SparseRows d1 = wall_d1(nw, g.wall_spacing());
  const SparseRows d2 = wall_d2(nw, g.wall_spacing());
  const SparseRows d1d2 = d1.composed_with(d2);

  std::vector<cplx> b(nsys_), raw;
  double res_num = 0.0, res_den = 0.0;
  double k[2] = {0.0, 0.0};

  for (long t = 0; t < tp; ++t) {
    if (factors_[t].skip) continue;
    // Right side: momentum and Q rows at interior points, zero on constraint rows.
    std::fill(b.begin(), b.end(), cplx(0.0, 0.0));
    for (int j = 1; j < nw - 1; ++j) {
      for (int i = 0; i < dim; ++i) b[j * block_ + i] = f[(i * tp + t) * nw + j];
      for (int c = 0; c < nq; ++c) b[j * block_ + dim + c] = gq[(c * tp + t) * nw + j];
    }

    std::vector<cplx> x = b;
    const lapack_int info = LAPACKE_zgbtrs(
        LAPACK_COL_MAJOR, 'N', nsys_, kl_, ku_, 1,
        reinterpret_cast<const lapack_complex_double*>(factors_[t].ab.data()), ldab_,
        factors_[t].ipiv.data(), reinterpret_cast<lapack_complex_double*>(x.data()), nsys_);
    if (info != 0) throw std::runtime_error("banded back-substitution failed");

    if (residual != nullptr) {
      wavenumbers(t, k);
      raw.assign(static_cast<size_t>(ldab_) * nsys_, cplx(0.0, 0.0));
      auto add = [&](int r, int c, cplx v) { raw[static_cast<size_t>(c) * ldab_ + kl_ + ku_ + r - c] += v; };
      assemble_mode(g, prm_, lambda_, k, d1, d2, d1d2, add);
      std::vector<cplx> y(nsys_, cplx(0.0, 0.0));
      for (int c = 0; c < nsys_; ++c) {
        const int rlo = std::max(0, c - ku_);
        const int rhi = std::min(nsys_ - 1, c + kl_);
        for (int r = rlo; r <= rhi; ++r)
          y[r] += raw[static_cast<size_t>(c) * ldab_ + kl_ + ku_ + r - c] * x[c];
      }
      for (int r = 0; r < nsys_; ++r) {
        res_num += std::norm(y[r] - b[r]);
        res_den += std::norm(b[r]);
      }
    }

    for (int j = 0; j < nw; ++j) {
      for (int i = 0; i < dim; ++i) u[(i * tp + t) * nw + j] = x[j * block_ + i];
      for (int c = 0; c < nq; ++c) q[(c * tp + t) * nw + j] = x[j * block_ + dim + c];
      p[t * nw + j] = x[j * block_ + dim + nq];
    }
  }

  if (residual != nullptr)
    *residual = (res_den > 0.0) ? std::sqrt(res_num / res_den) : std::sqrt(res_num);
}

ResolventSolution solve_shifted(const ShiftedSolver& solver, const VectorField& f,
                                const TensorField& g, bool with_residual) {
  const Grid& gr = solver.grid();
  auto fm = to_modes(f);
  auto gm = to_modes(rep_components(g));
  std::vector<cplx> um, qm, pm;
  ResolventSolution sol(gr);
  double res = 0.0;
  solver.solve_modes(fm, gm, um, qm, pm, with_residual ? &res : nullptr);
  sol.residual = res;
  sol.u = from_modes(gr, gr.dim, std::move(um));
  sol.q = expand_rep_components(from_modes(gr, qbasis(gr.dim).nq, std::move(qm)));
  sol.p = from_modes(gr, 1, std::move(pm));
  return sol;
}

}  // namespace qthalf
