#include "qthalf/linear_core.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "qthalf/field_ops.hpp"
#include "qthalf/spectral.hpp"
#include "qthalf/wall_ops.hpp"

namespace qthalf {

namespace {

constexpr double kPi = 3.14159265358979323846;
using cplx = std::complex<double>;

}  // namespace

bool Sector::contains(cplx lambda) const {
  if (lambda == cplx(0.0, 0.0)) return false;
  return std::abs(std::arg(lambda)) < kPi - epsilon;
}

Sector Sector::for_params(const ModelParams& prm) {
  const double eps0 = std::atan(std::abs(prm.beta) / std::sqrt(2.0));
  const double eps = eps0 + 0.085;
  if (!(eps < 0.5 * kPi)) {
    throw std::invalid_argument(
        "Sector::for_params: default headroom pushes epsilon past pi/2, pick epsilon explicitly");
  }
  Sector s;
  s.epsilon0 = eps0;
  s.epsilon = eps;
  return s;
}

Sector Sector::for_params(const ModelParams& prm, double epsilon) {
  const double eps0 = std::atan(std::abs(prm.beta) / std::sqrt(2.0));
  if (!(epsilon > eps0) || !(epsilon < 0.5 * kPi)) {
    std::ostringstream os;
    os << "Sector::for_params: epsilon = " << epsilon << " must lie in (" << eps0 << ", pi/2)";
    throw std::invalid_argument(os.str());
  }
  Sector s;
  s.epsilon0 = eps0;
  s.epsilon = epsilon;
  return s;
}

VectorField div_tensor(const TensorField& a) {
  const Grid& g = a.grid();
  const int dim = g.dim;
  if (a.components() != dim * dim)
    throw std::invalid_argument("div_tensor: field must have dim*dim components");
  VectorField out = make_vector(g);
  const long tp = g.tan_points();
  for (int d = 0; d < dim; ++d) {
    const GridField dd = diff(a, d, 1);
    for (int i = 0; i < dim; ++i)
      for (long t = 0; t < tp; ++t)
        for (int j = 0; j < g.n_wall; ++j) out.at(i, t, j) += dd.at(i * dim + d, t, j);
  }
  return out;
}

ScalarField weak_pressure(const VectorField& rhs) {
  const Grid& g = rhs.grid();
  const int n = g.n_wall;
  const int dim = g.dim;
  const long tp = g.tan_points();
  const double h = g.wall_spacing();

  std::vector<double> w(n, h);
  w[0] = w[n - 1] = 0.5 * h;
  const SparseRows d1 = wall_d1(n, h);

  const std::vector<cplx> rhat = to_modes(rhs);
  std::vector<cplx> phat(tp * n, cplx(0.0, 0.0));

  const int m = n - 1;  // wall value pinned to zero, interior + top are trial
  const int kl = 2, ku = 2;
  const int ldab = 2 * kl + ku + 1;
  std::vector<cplx> ab;
  std::vector<lapack_int> ipiv(m);
  std::vector<cplx> b(m);
  int idx[2] = {0, 0};

  for (long t = 0; t < tp; ++t) {
    unflatten_tan(g, t, idx);
    bool nyq = false;
    double k[2] = {0.0, 0.0};
    double k2 = 0.0;
    for (int d = 0; d < dim - 1; ++d) {
      if (tan_is_nyquist(g, idx[d])) nyq = true;
      k[d] = tan_wavenumber(g, idx[d]);
      k2 += k[d] * k[d];
    }
    if (nyq) continue;  // annihilated mode

    ab.assign(static_cast<size_t>(ldab) * m, cplx(0.0, 0.0));
    auto add = [&](int r, int c, double v) {
      ab[static_cast<size_t>(c) * ldab + kl + ku + r - c] += v;
    };
    for (int j = 1; j < n; ++j) add(j - 1, j - 1, k2 * w[j]);
    for (int r = 0; r < n; ++r) {
      for (const auto& ea : d1.rows[r]) {
        if (ea.first < 1) continue;
        for (const auto& eb : d1.rows[r]) {
          if (eb.first < 1) continue;
          add(ea.first - 1, eb.first - 1, w[r] * ea.second * eb.second);
        }
      }
    }

    for (int j = 1; j < n; ++j) {
      cplx acc(0.0, 0.0);
      for (int d = 0; d < dim - 1; ++d)
        acc += cplx(0.0, -k[d]) * rhat[(static_cast<long>(d) * tp + t) * n + j];
      b[j - 1] = w[j] * acc;
    }
    for (int r = 0; r < n; ++r) {
      const cplx fn = rhat[(static_cast<long>(dim - 1) * tp + t) * n + r];
      for (const auto& e : d1.rows[r]) {
        if (e.first < 1) continue;
        b[e.first - 1] += w[r] * e.second * fn;
      }
    }

    const lapack_int info =
        LAPACKE_zgbsv(LAPACK_COL_MAJOR, m, kl, ku, 1,
                      reinterpret_cast<lapack_complex_double*>(ab.data()), ldab, ipiv.data(),
                      reinterpret_cast<lapack_complex_double*>(b.data()), m);
    if (info != 0) {
      std::ostringstream os;
      os << "weak_pressure: zgbsv failed at tangential mode " << t << " (info " << info << ")";
      throw std::runtime_error(os.str());
    }

    for (int j = 1; j < n; ++j) phat[t * n + j] = b[j - 1];
  }

  return from_modes(g, 1, std::move(phat));
}

ScalarField pressure_solve(const VectorField& u, const TensorField& q, const ModelParams& prm) {
  if (!(u.grid() == q.grid()))
    throw std::invalid_argument("pressure_solve: u and Q live on different grids");
  GridField mdl = laplacian(q);
  GridField aq = q;
  aq *= prm.a;
  mdl -= aq;
  VectorField rhs = laplacian(u);
  VectorField dv = div_tensor(mdl);
  dv *= prm.beta;
  rhs -= dv;
  return weak_pressure(rhs);
}

ScalarField pressure_from_forcing(const VectorField& f) { return weak_pressure(f); }

ResolventSolution resolvent_solve(cplx lambda, const VectorField& f, const TensorField& g,
                                  const ModelParams& prm, const Sector& sector) {
  if (!(f.grid() == g.grid()))
    throw std::invalid_argument("resolvent_solve: f and G live on different grids");
  if (!sector.contains(lambda)) {
    std::ostringstream os;
    os << "resolvent_solve: lambda = (" << lambda.real() << ", " << lambda.imag()
       << ") lies outside the sector |arg lambda| < pi - " << sector.epsilon;
    throw std::invalid_argument(os.str());
  }
  ShiftedSolver solver(f.grid(), prm, lambda);
  return solve_shifted(solver, f, g, true);
}

namespace {

struct ContourNode {
  cplx lambda;
  cplx coeff;  // e^{lambda t} dlambda weight / (2 pi i)
};

std::vector<ContourNode> contour_nodes(double t, const Sector& sector, const ContourSpec& spec) {
  const double omega = spec.omega > 0.0 ? spec.omega : 1.0 / t;
  const double rmax = spec.r_max > 0.0 ? spec.r_max : 40.0 / t;
  if (!(rmax > omega))
    throw std::invalid_argument("semigroup contour: r_max must exceed the arc radius omega");
  const int mr = std::max(spec.ray_nodes, 2);
  const int ma = std::max(spec.arc_nodes, 2);
  const double phi = kPi - sector.epsilon;

  std::vector<ContourNode> nodes;
  nodes.reserve(2 * mr + ma);

  // Rays r e^{+-i phi}, r in [omega, rmax], trapezoid in log r; the lower ray
  // is traversed inward, the upper ray outward.
  const double dl = std::log(rmax / omega) / (mr - 1);
  for (int s = -1; s <= 1; s += 2) {
    const cplx dir = std::polar(1.0, s * phi);
    for (int i = 0; i < mr; ++i) {
      const double r = omega * std::exp(dl * i);
      double wq = dl * r;
      if (i == 0 || i == mr - 1) wq *= 0.5;
      nodes.push_back({r * dir, (s > 0 ? dir : -dir) * wq});
    }
  }

  // Arc omega e^{i eta}, eta from -phi to phi, trapezoid.
  const double deta = 2.0 * phi / (ma - 1);
  for (int i = 0; i < ma; ++i) {
    const double eta = -phi + deta * i;
    double wq = deta;
    if (i == 0 || i == ma - 1) wq *= 0.5;
    const cplx lam = std::polar(omega, eta);
    nodes.push_back({lam, cplx(0.0, 1.0) * lam * wq});
  }

  const cplx two_pi_i(0.0, 2.0 * kPi);
  for (auto& nd : nodes) nd.coeff = std::exp(nd.lambda * t) * nd.coeff / two_pi_i;
  return nodes;
}

State contour_apply(double t, const State& u0, const ModelParams& prm, const Sector& sector,
                    const ContourSpec& spec) {
  const Grid& g = u0.u.grid();
  const std::vector<cplx> fh = to_modes(u0.u);
  const std::vector<cplx> gh = to_modes(rep_components(u0.q));
  std::vector<cplx> au(fh.size(), cplx(0.0, 0.0));
  std::vector<cplx> aq(gh.size(), cplx(0.0, 0.0));
  std::vector<cplx> su, sq, sp;

  for (const ContourNode& nd : contour_nodes(t, sector, spec)) {
    const ShiftedSolver solver(g, prm, nd.lambda);
    solver.solve_modes(fh, gh, su, sq, sp, nullptr);
    for (size_t i = 0; i < au.size(); ++i) au[i] += nd.coeff * su[i];
    for (size_t i = 0; i < aq.size(); ++i) aq[i] += nd.coeff * sq[i];
  }

  State out(g);
  out.u = from_modes(g, g.dim, std::move(au));
  out.q = expand_rep_components(from_modes(g, qbasis(g.dim).nq, std::move(aq)));
  return out;
}

}  // namespace

State semigroup_apply(double t, const State& u0, const ModelParams& prm, const Sector& sector,
                      const SemigroupOptions& opts, SemigroupDiag* diag) {
  if (!(t > 0.0)) throw std::invalid_argument("semigroup_apply: t must be positive");

  if (opts.mode == SemigroupMode::imex) {
    if (!(opts.imex_dt > 0.0)) throw std::invalid_argument("semigroup_apply: imex_dt must be positive");
    const int nsteps = std::max(1, static_cast<int>(std::ceil(t / opts.imex_dt - 1e-12)));
    EvolveOptions eo;
    eo.T = t;
    eo.dt = t / nsteps;
    eo.store_every = nsteps;
    Trajectory tr = evolve(u0, nullptr, prm, eo);
    return tr.states.back();
  }

  State coarse = contour_apply(t, u0, prm, sector, opts.contour);
  if (!opts.check_doubling) return coarse;

  ContourSpec fine = opts.contour;
  fine.ray_nodes = std::max(fine.ray_nodes, 2) * 2;
  fine.arc_nodes = std::max(fine.arc_nodes, 2) * 2;
  State refined = contour_apply(t, u0, prm, sector, fine);
  if (diag != nullptr) {
    const State d = coarse - refined;
    const double num = lebesgue_norm(d.u, 2.0) + lebesgue_norm(d.q, 2.0);
    const double den = lebesgue_norm(refined.u, 2.0) + lebesgue_norm(refined.q, 2.0);
    diag->doubling_delta = num / std::max(den, 1e-300);
  }
  return refined;
}

Trajectory evolve(const State& u0, const ForcingFn& forcing, const ModelParams& prm,
                  const EvolveOptions& opts) {
  const Grid& g = u0.u.grid();
  if (!(opts.dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
  if (!(opts.T > 0.0)) throw std::invalid_argument("evolve: T must be positive");
  if (opts.store_every < 1) throw std::invalid_argument("evolve: store_every must be >= 1");
  const int nsteps = std::max(1, static_cast<int>(std::ceil(opts.T / opts.dt - 1e-9)));

  Trajectory tr(g);
  tr.dt = opts.dt;
  tr.store_every = opts.store_every;

  const ShiftedSolver solver(g, prm, cplx(1.0 / opts.dt, 0.0));

  State st = u0;
  filter_nyquist(st.u);
  filter_nyquist(st.q);
  project_sym_traceless(st.q);
  apply_boundary(st);

  const double j0 = lebesgue_norm(st.u, 2.0) + lebesgue_norm(st.q, 2.0);
  // Guard reference floored at 1 so forced-from-rest runs are not tripped.
  const double guard = opts.blowup_factor * std::max(j0, 1.0);

  VectorField f = make_vector(g);
  TensorField gq = make_tensor(g);

  auto store = [&](int n) {
    tr.times.push_back(n * opts.dt);
    tr.states.push_back(st);
    if (opts.store_pressure) {
      ScalarField p = pressure_solve(st.u, st.q, prm);
      if (forcing) {
        ScalarField pf = pressure_from_forcing(f);
        p += pf;
      }
      tr.pressures.push_back(std::move(p));
    }
  };

  for (int n = 0; n <= nsteps; ++n) {
    if (forcing) {
      std::fill(f.data().begin(), f.data().end(), 0.0);
      std::fill(gq.data().begin(), gq.data().end(), 0.0);
      forcing(n, n * opts.dt, st, f, gq);
    }
    if (n % opts.store_every == 0 || n == nsteps) store(n);
    if (n == nsteps) break;

    VectorField rf = st.u;
    rf *= 1.0 / opts.dt;
    TensorField rg = st.q;
    rg *= 1.0 / opts.dt;
    if (forcing) {
      rf += f;
      rg += gq;
    }
    ResolventSolution sol = solve_shifted(solver, rf, rg, false);
    st.u = std::move(sol.u);
    st.q = std::move(sol.q);
    project_sym_traceless(st.q);
    apply_boundary(st);

    const double jn = lebesgue_norm(st.u, 2.0) + lebesgue_norm(st.q, 2.0);
    if (!std::isfinite(jn) || jn > guard) {
      tr.halted = true;
      std::ostringstream os;
      os << "blow-up guard tripped at step " << (n + 1) << " (t = " << (n + 1) * opts.dt
         << "): surrogate norm " << jn << " exceeded " << guard;
      tr.halt_reason = os.str();
      break;
    }
  }
  return tr;
}

Trajectory linear_evolve(const State& u0, const ForcingFn& forcing, const ModelParams& prm,
                         const EvolveOptions& opts) {
  return evolve(u0, forcing, prm, opts);
}

}  // namespace qthalf
