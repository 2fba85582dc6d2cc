// Acceptance gate: one criterion per invocation (argv[1] in 1..11, or "all").
// Each criterion prints one [PASS]/[FAIL] line with its measured numbers and
// the tolerance it was judged against; the process exits 0 only on PASS.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "qthalf/config.hpp"
#include "qthalf/data_gen.hpp"
#include "qthalf/experiments.hpp"
#include "qthalf/field_ops.hpp"
#include "qthalf/fields.hpp"
#include "qthalf/linear_core.hpp"
#include "qthalf/nonlinear_rhs.hpp"
#include "qthalf/report.hpp"
#include "qthalf/tensor_ops.hpp"
#include "qthalf/wellposed.hpp"

namespace {

using namespace qthalf;
namespace fs = std::filesystem;

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void gate(bool ok) { pass = pass && ok; }
};

// ------------------------------------------------------------------ helpers

// L2 of (a - b) over interior wall rows [margin, n-1-margin].
double interior_l2_gap(const GridField& a, const GridField& b, int margin) {
  const Grid& g = a.grid();
  const double w = g.tan_spacing() * g.wall_spacing() *
                   (g.dim == 3 ? g.tan_spacing() : 1.0);
  double acc = 0.0;
  for (int c = 0; c < a.components(); ++c)
    for (long t = 0; t < g.tan_points(); ++t)
      for (int j = margin; j < g.n_wall - margin; ++j) {
        const double d = a.at(c, t, j) - b.at(c, t, j);
        acc += w * d * d;
      }
  return std::sqrt(acc);
}

double rel_sup_gap(const GridField& a, const GridField& b) {
  return max_abs_diff(a, b) / std::max(sup_norm(a), 1e-300);
}

// Least-squares convergence order from errors on grids with spacing halving
// at each level: slope of log2(err) against level, negated.
double fitted_order(const std::vector<double>& errs) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < errs.size(); ++i) {
    x.push_back(std::pow(0.5, double(i)));
    y.push_back(errs[i]);
  }
  return loglog_slope(x, y);
}

// Single-harmonic analytic state used by the route and scaling criteria: the
// same continuum functions sampled on any grid (exact no-slip velocity,
// Neumann-compatible Q), so grid sequences compare one continuum object.
State analytic_state(const Grid& g) {
  State st(g);
  const double L = g.tan_extent, H = g.wall_extent;
  const double k = 2.0 * kPi / L, kp = kPi / H;
  const int dim = g.dim;
  for (long t = 0; t < g.tan_points(); ++t) {
    double x0, x1 = 0.0;
    if (dim == 2) {
      x0 = g.tan_coord(static_cast<int>(t));
    } else {
      x0 = g.tan_coord(static_cast<int>(t / g.n_tan));
      x1 = g.tan_coord(static_cast<int>(t % g.n_tan));
    }
    for (int j = 0; j < g.n_wall; ++j) {
      const double y = g.wall_coord(j);
      const double w = y * y * (H - y) * (H - y);
      const double wp = 2.0 * H * H * y - 6.0 * H * y * y + 4.0 * y * y * y;
      // stream function sin(kx) w(y) (+ a second harmonic in 3d)
      st.u.at(0, t, j) = std::sin(k * x0) * wp;
      st.u.at(dim - 1, t, j) = -k * std::cos(k * x0) * w;
      if (dim == 3) st.u.at(0, t, j) += std::cos(k * x1) * wp;
      MatN m(dim);
      const double c1 = std::cos(k * x0) * std::cos(kp * y);
      const double c2 = std::sin(k * x0 + 0.7 * x1) * std::cos(2.0 * kp * y);
      m(0, 0) = 0.4 * c1 + 0.1 * c2;
      m(0, 1) = 0.3 * c1 - 0.2 * c2;
      m(1, 0) = m(0, 1);
      m(1, 1) = dim == 2 ? -m(0, 0) : 0.2 * c1;
      if (dim == 3) {
        m(0, 2) = 0.15 * c2;
        m(2, 0) = m(0, 2);
        m(1, 2) = -0.1 * c1;
        m(2, 1) = m(1, 2);
        m(2, 2) = -m(0, 0) - m(1, 1);
      }
      set_tensor(st.q, t, j, m);
    }
  }
  return st;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in.good()) return "<unreadable:" + p.string() + ">";
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cmd(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

// --------------------------------------------------- 1: algebraic invariants

Outcome criterion_1() {
  constexpr int kInstances = 1000;
  constexpr double kTol = 1e-12;
  Outcome out;
  double worst = 0.0;
  std::string worst_name;
  for (int dim : {2, 3}) {
    const auto sweep = invariant_sweep(dim, kInstances, 1000 + dim);
    for (const auto& [name, resid] : sweep) {
      if (resid > worst) {
        worst = resid;
        worst_name = "N" + std::to_string(dim) + "." + name;
      }
      out.gate(resid <= kTol);
    }
  }
  out.detail << kInstances << " draws per dimension, worst residual " << worst << " ("
             << worst_name << "), tol " << kTol;
  return out;
}

// ------------------------------------------------------ 2: dual-route checks

Outcome criterion_2() {
  constexpr double kTolG = 1e-12;        // pointwise relative, algebraic routes
  constexpr double kTolFPair = 1e-11;    // conservative vs named-stress route
  constexpr double kMinOrder = 1.9;      // expanded vs conservative, interior L2
  Outcome out;

  double g_gap = 0.0, f_gap = 0.0;
  for (int dim : {2, 3}) {
    const Grid g(dim, dim == 2 ? 16 : 8, 33, 5.0, 2.0);
    const ModelParams prm(dim, 0.8, 0.3, 0.5, 0.7);
    const State st = analytic_state(g);
    g_gap = std::max(g_gap, rel_sup_gap(assemble_G(st.u, st.q, prm),
                                        assemble_G_via_coupling(st.u, st.q, prm)));
    f_gap = std::max(f_gap, rel_sup_gap(assemble_f(st.u, st.q, prm),
                                        assemble_f_stress_route(st.u, st.q, prm)));
  }
  out.gate(g_gap <= kTolG);
  out.gate(f_gap <= kTolFPair);

  const ModelParams prm(2, 0.8, 0.3, 0.5, 0.7);
  std::vector<double> errs;
  for (int n_wall : {33, 65, 129}) {
    const Grid g(2, 16, n_wall, 5.0, 2.0);
    const State st = analytic_state(g);
    errs.push_back(interior_l2_gap(assemble_f(st.u, st.q, prm),
                                   assemble_f_expanded(st.u, st.q, prm), 3));
  }
  const double order = fitted_order(errs);
  out.gate(errs.front() > 1e-12);  // the routes genuinely differ at finite h
  out.gate(order >= kMinOrder);
  out.detail << "G routes rel gap " << g_gap << " (tol " << kTolG << "), f conservative pair "
             << f_gap << " (tol " << kTolFPair << "), expanded-route interior order " << order
             << " (min " << kMinOrder << ")";
  return out;
}

// ------------------------------------- 3: manufactured resolvent and pressure

struct MmsFields {
  State sol;        // (u*, Q*)
  ScalarField p;    // p*
  VectorField f;    // momentum right side
  TensorField gq;   // Q right side
  explicit MmsFields(const Grid& g) : sol(g), p(make_scalar(g)), f(make_vector(g)), gq(make_tensor(g)) {}
};

MmsFields manufactured(const Grid& g, double lambda, const ModelParams& prm) {
  MmsFields m(g);
  const double L = g.tan_extent, H = g.wall_extent;
  const double k = 2.0 * kPi / L, kp = kPi / H, kh = 0.5 * kPi / H;
  const double a = prm.a, beta = prm.beta;
  const double cm = k * k + a + kp * kp;
  const double M00 = 0.4, M01 = 0.3;  // sym traceless 2x2
  for (long t = 0; t < g.tan_points(); ++t) {
    const double x = g.tan_coord(static_cast<int>(t));
    const double sx = std::sin(k * x), cx = std::cos(k * x);
    for (int j = 0; j < g.n_wall; ++j) {
      const double y = g.wall_coord(j);
      const double w = H * H * y * y - 2.0 * H * y * y * y + y * y * y * y;
      const double wp = 2.0 * H * H * y - 6.0 * H * y * y + 4.0 * y * y * y;
      const double wpp = 2.0 * H * H - 12.0 * H * y + 12.0 * y * y;
      const double wppp = -12.0 * H + 24.0 * y;
      const double chi = std::cos(kp * y), chip = -kp * std::sin(kp * y);
      const double rho = std::sin(kh * y), rhop = kh * std::cos(kh * y);

      const double u1 = sx * wp, u2 = -k * cx * w;
      const double lap1 = -k * k * sx * wp + sx * wppp;
      const double lap2 = k * k * k * cx * w - k * cx * wpp;
      m.sol.u.at(0, t, j) = u1;
      m.sol.u.at(1, t, j) = u2;
      m.p.at(0, t, j) = cx * rho;

      const double q = cx * chi;
      m.sol.q.at(0, t, j) = M00 * q;
      m.sol.q.at(1, t, j) = M01 * q;
      m.sol.q.at(2, t, j) = M01 * q;
      m.sol.q.at(3, t, j) = -M00 * q;

      // Div(lap Q - a Q) with lap Q - a Q = -cm * cos(kx) chi(y) M
      const double dxm = -(-k * sx) * chi * cm;  // d_x of (-cm cx chi)
      const double dym = -cx * chip * cm;
      const double div0 = dxm * M00 + dym * M01;
      const double div1 = dxm * M01 + dym * (-M00);

      m.f.at(0, t, j) = lambda * u1 - lap1 + (-k * sx * rho) + beta * div0;
      m.f.at(1, t, j) = lambda * u2 - lap2 + cx * rhop + beta * div1;

      const double d00 = k * cx * wp;
      const double d01 = 0.5 * sx * (wpp + k * k * w);
      m.gq.at(0, t, j) = (lambda + cm) * q * M00 - beta * d00;
      m.gq.at(1, t, j) = (lambda + cm) * q * M01 - beta * d01;
      m.gq.at(2, t, j) = m.gq.at(1, t, j);
      m.gq.at(3, t, j) = (lambda + cm) * q * (-M00) - beta * (-d00);
    }
  }
  return m;
}

Outcome criterion_3() {
  constexpr double kMinOrder = 1.9;
  constexpr double kLambda = 3.0;
  Outcome out;
  const ModelParams prm(2, 1.0, 0.3, 0.5, 0.7);
  const Sector sec = Sector::for_params(prm);

  std::vector<double> e_uq, e_p, e_wp;
  for (int n_wall : {33, 65, 129, 257}) {
    const Grid g(2, 16, n_wall, 5.0, 2.0);
    const MmsFields m = manufactured(g, kLambda, prm);
    const ResolventSolution sol = resolvent_solve({kLambda, 0.0}, m.f, m.gq, prm, sec);
    e_uq.push_back(interior_l2_gap(sol.u, m.sol.u, 2) + interior_l2_gap(sol.q, m.sol.q, 2));
    e_p.push_back(interior_l2_gap(sol.p, m.p, 2));

    // weak pressure leg: gradient of p* plus a curl field it must ignore
    const double L = g.tan_extent, H = g.wall_extent;
    const double k = 2.0 * kPi / L, kh = 0.5 * kPi / H;
    VectorField rhs = make_vector(g);
    for (long t = 0; t < g.tan_points(); ++t) {
      const double x = g.tan_coord(static_cast<int>(t));
      for (int j = 0; j < g.n_wall; ++j) {
        const double y = g.wall_coord(j);
        const double gcurl = (y * y * (H - y) * (H - y)) / (H * H * H * H);
        const double gcurlp =
            (2.0 * H * H * y - 6.0 * H * y * y + 4.0 * y * y * y) / (H * H * H * H);
        rhs.at(0, t, j) = -k * std::sin(k * x) * std::sin(kh * y) + std::sin(k * x) * gcurlp;
        rhs.at(1, t, j) =
            kh * std::cos(k * x) * std::cos(kh * y) - k * std::cos(k * x) * gcurl;
      }
    }
    const ScalarField wp = weak_pressure(rhs);
    e_wp.push_back(interior_l2_gap(wp, m.p, 2));
  }
  const double o_uq = fitted_order(e_uq), o_p = fitted_order(e_p), o_wp = fitted_order(e_wp);
  out.gate(o_uq >= kMinOrder);
  out.gate(o_p >= kMinOrder);
  out.gate(o_wp >= kMinOrder);
  out.detail << "manufactured-solution orders: (u,Q) " << o_uq << ", resolvent p " << o_p
             << ", weak pressure " << o_wp << " (min " << kMinOrder << ")";
  return out;
}

// ----------------------------------------- 4: uniform sector resolvent bound

// Flatness of the ratio needs broadband data: a narrowband datum starves the
// second-derivative terms above lambda ~ (its bandwidth)^2 and the ratio
// drifts down.  The probe f stacks equal-weight solenoidal stream modes, one
// per octave of omega^2 across the lambda window, so every sampled lambda has
// a matched band; G is a fixed moderate-frequency tensor mode (its route
// enters through grad G, which pins its contribution independently of lambda).
Outcome criterion_4() {
  constexpr double kSlopeTol = 0.10;
  constexpr int kPoints = 7;
  Outcome out;
  const ModelParams prm(2, 1.0, 0.02, 0.5, 0.7);
  const Sector sec = Sector::for_params(prm);
  const Grid g(2, 32, 129, 32.0, 16.0);

  VectorField f = make_vector(g);
  for (auto [j, m] : {std::pair{1, 1}, {2, 2}, {1, 5}, {9, 1}, {2, 16}, {5, 28}, {10, 50}}) {
    const double kt = 2.0 * kPi * j / g.tan_extent, kw = kPi * m / g.wall_extent;
    const double om = std::hypot(kt, kw);
    for (long t = 0; t < g.tan_points(); ++t) {
      const double x = g.tan_coord(static_cast<int>(t));
      for (int jj = 0; jj < g.n_wall; ++jj) {
        const double y = g.wall_coord(jj);
        f.at(0, t, jj) += std::sin(kt * x) * std::cos(kw * y) * kw / om;
        f.at(1, t, jj) -= std::cos(kt * x) * std::sin(kw * y) * kt / om;
      }
    }
  }
  TensorField gq = make_tensor(g);
  {
    const double kt = 4.0 * kPi / g.tan_extent, kw = 2.0 * kPi / g.wall_extent;
    for (long t = 0; t < g.tan_points(); ++t)
      for (int jj = 0; jj < g.n_wall; ++jj) {
        const double s = std::cos(kt * g.tan_coord(static_cast<int>(t)) + 0.1) *
                         std::cos(kw * g.wall_coord(jj) + 0.2);
        gq.at(0, t, jj) = 0.5 * s;
        gq.at(1, t, jj) = 0.4 * s;
        gq.at(2, t, jj) = 0.4 * s;
        gq.at(3, t, jj) = -0.5 * s;
      }
  }
  const double den = lebesgue_norm(f, 2.0) + sobolev_seminorm(gq, 2.0, 1);

  const double edge = kPi - sec.epsilon - 0.05;
  double worst = 0.0;
  for (double arg : {0.0, edge, -edge}) {
    std::vector<double> xs, ys;
    for (int i = 0; i < kPoints; ++i) {
      const double r = 0.1 * std::pow(1000.0, double(i) / (kPoints - 1));
      const ResolventSolution sol = resolvent_solve(std::polar(r, arg), f, gq, prm, sec);
      const double num = r * (lebesgue_norm(sol.u, 2.0) + lebesgue_norm(sol.q, 2.0)) +
                         std::sqrt(r) * (sobolev_seminorm(sol.u, 2.0, 1) +
                                         sobolev_seminorm(sol.q, 2.0, 1)) +
                         sobolev_seminorm(sol.u, 2.0, 2) + sobolev_seminorm(sol.q, 2.0, 2);
      xs.push_back(r);
      ys.push_back(num / den);
    }
    const double slope = loglog_slope(xs, ys);
    worst = std::max(worst, std::abs(slope));
    out.detail << "arg " << arg << ": slope " << slope << "; ";
  }
  out.gate(worst <= kSlopeTol);
  out.detail << "worst |slope| " << worst << " (tol " << kSlopeTol
             << "), |lambda| in [0.1, 100], 7-band solenoidal probe";
  return out;
}

// ------------------------------------------------------- 5: smoothing decay

Outcome criterion_5() {
  constexpr double kSlopeMax = -0.6;  // model value -(1 - kappa/2) = -0.75
  constexpr int kPoints = 9;
  Outcome out;
  // small a and a roomy box keep the spectral floor below the lambda window,
  // so the fit sees the smoothing decay rather than the saturation plateau
  const ModelParams prm(2, 1.0, 0.02, 0.5, 0.7);
  const Sector sec = Sector::for_params(prm);
  const Grid g(2, 32, 65, 8.0, 8.0);

  const State data = bump_data(g, 1.0);
  const TensorField zero_q = make_tensor(g);
  std::vector<double> xs, ys;
  for (int i = 0; i < kPoints; ++i) {
    const double lam = std::pow(100.0, double(i) / (kPoints - 1));
    const ResolventSolution sol = resolvent_solve({lam, 0.0}, data.u, zero_q, prm, sec);
    xs.push_back(lam);
    ys.push_back(lebesgue_norm(sol.u, 4.0) + sobolev_seminorm(sol.q, 4.0, 1));
  }
  const double slope = loglog_slope(xs, ys);
  out.gate(slope <= kSlopeMax);
  out.detail << "pair (2, 4), kappa 1/2: fitted slope " << slope << " (required <= " << kSlopeMax
             << ", model -0.75), lambda in [1, 100]";
  return out;
}

// ------------------------------------------------- 6: semigroup time decay

Outcome criterion_6() {
  Outcome out;
  RunConfig cfg;
  cfg.kind = "decay-fit";
  cfg.dim = 2;
  cfg.a = 0.002;  // keep the mass-term tilt e^{-at} below the fit tolerance
  cfg.n_tan = 64;
  cfg.tan_extent = 64.0;
  cfg.n_wall = 257;  // deep box so the widest packet stays clear of the walls
  cfg.wall_extent = 64.0;
  cfg.T = 10.4;  // covers the window [1, 0.1 (L / 2 pi)^2] = [1, 10.37]
  cfg.dt = 0.02;
  cfg.store_every = 5;
  cfg.amplitude = 1e-2;
  cfg.seed = 7;
  cfg.tol_decay_dev = 0.15;

  const Report rep = run_experiment(cfg);
  for (const MetricEntry& m : rep.metrics) {
    out.gate(m.pass);
    out.detail << m.name << " " << m.value << " (" << m.relation << " " << m.tolerance << "); ";
  }
  for (const std::string& n : rep.notes) out.detail << n;
  return out;
}

// -------------------------------------------- 7: discrete maximal regularity

Outcome criterion_7() {
  constexpr double kMaxSpread = 2.0;
  Outcome out;
  const ModelParams prm(2, 1.0, 1.0, 0.5, 0.7);
  const ExponentScheme es = exponent_setup(2, Rational{1, 4}, 2);

  std::vector<double> ratios;
  for (int refine = 0; refine < 2; ++refine) {
    const Grid g(2, 32 << refine, 64 * (1 << refine) + 1, 5.0, 5.0);
    const State st = bump_data(g, 1.0);
    double data_norm = 0.0;
    for (double q : {es.q1, es.q2})
      data_norm += lebesgue_norm(st.u, q) + sobolev_seminorm(st.q, q, 1);
    for (double dt : {0.02, 0.01}) {
      EvolveOptions eo;
      eo.T = 2.0;
      eo.dt = dt;
      const Trajectory tr = linear_evolve(st, nullptr, prm, eo);
      if (tr.halted) out.gate(false);
      const WeightedNormReport wn = weighted_norm_E(tr, es);
      ratios.push_back(wn.E_total / data_norm);
      out.detail << "(h" << (refine ? "/2" : "") << ", dt " << dt << "): " << wn.E_total / data_norm
                 << "; ";
    }
  }
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  const double hi = *std::max_element(ratios.begin(), ratios.end());
  out.gate(hi / lo <= kMaxSpread);
  out.detail << "spread " << hi / lo << " (max " << kMaxSpread << ")";
  return out;
}

// ---------------------------------------- 8: interpolation-inequality checks

Outcome criterion_8() {
  Outcome out;
  for (int level : {0, 1}) {
    RunConfig cfg;
    cfg.kind = "gn-check";
    cfg.gn_level = level;
    cfg.gn_fields = 200;
    cfg.tol_gn_variation = 0.05;
    cfg.seed = 31 + level;
    if (level == 1) {
      // third derivatives of the sharpest wall modes need the finer base grid
      cfg.n_tan = 64;
      cfg.n_wall = 129;
    }
    const Report rep = run_experiment(cfg);
    for (const MetricEntry& m : rep.metrics) {
      out.gate(m.pass);
      out.detail << "level " << level << " " << m.name << " " << m.value << " (<= "
                 << m.tolerance << "); ";
    }
  }
  return out;
}

// --------------------------------------------------- 9: contraction iteration

Outcome criterion_9() {
  // data size in the parabolic trace norm (L2 of the fields and their first
  // and second gradients): the natural pairing for the fixed point, for which
  // E(limit) / size is O(1); bare L2 carries a spurious box/frequency factor
  constexpr double kDataSize = 1e-3;
  constexpr double kTolDelta = 0.5;
  constexpr double kTolResidual = 1e-8;
  constexpr double kTolE = 1e-2;
  constexpr double kHalvingSlack = 1.05;
  Outcome out;
  const Grid g(2, 32, 65, 8.0, 5.0);
  const ModelParams prm(2, 1.0, 1.0, 0.5, 0.7);
  const ExponentScheme es = exponent_setup(2, Rational{1, 4}, 2);

  Rng rng(2026);
  State u0 = decay_data(rng, g, 0.7, 1.0, 1.0);  // single lowest tangential mode
  const double size = lebesgue_norm(u0.u, 2.0) + sobolev_seminorm(u0.u, 2.0, 1) +
                      sobolev_seminorm(u0.u, 2.0, 2) + lebesgue_norm(u0.q, 2.0) +
                      sobolev_seminorm(u0.q, 2.0, 1) + sobolev_seminorm(u0.q, 2.0, 2);
  u0 *= kDataSize / size;

  PicardOptions po;
  po.T = 6.0;
  po.dt = 0.02;
  po.k_max = 8;
  po.stop_tol = 1e-9;  // past this the iterate differences measure solver noise

  auto run = [&](const State& data, double& max_delta, double& final_residual, double& e_limit,
                 bool& diverged) {
    const PicardResult pr = picard_iterate(data, prm, es, po);
    diverged = pr.diverged;
    max_delta = 0.0;
    final_residual = std::numeric_limits<double>::quiet_NaN();
    for (const PicardRecord& r : pr.records) {
      if (r.delta >= 0.0) max_delta = std::max(max_delta, r.delta);
      if (r.residual >= 0.0) final_residual = r.residual;
    }
    e_limit = pr.records.back().E_k;
  };

  double d1, r1, e1;
  bool div1;
  run(u0, d1, r1, e1, div1);
  out.gate(!div1);
  out.gate(d1 <= kTolDelta);
  out.gate(r1 <= kTolResidual);
  out.gate(e1 <= kTolE);

  State half = u0;
  half *= 0.5;
  double d2, r2, e2;
  bool div2;
  run(half, d2, r2, e2, div2);
  out.gate(!div2);
  out.gate(d2 <= d1 * kHalvingSlack);

  out.detail << "data " << kDataSize << ": max delta " << d1 << " (<= " << kTolDelta
             << "), final residual " << r1 << " (<= " << kTolResidual << "), E " << e1 << " (<= "
             << kTolE << "); halved data max delta " << d2 << " (<= " << d1 * kHalvingSlack
             << ")";
  return out;
}

// -------------------------------------------- 10: superlinear right-hand side

Outcome criterion_10() {
  constexpr double kMinExponent = 1.9;
  Outcome out;
  const Grid g(2, 16, 33, 5.0, 2.0);
  const ModelParams prm(2, 1.0, 1.0, 0.5, 0.7);
  const State base = analytic_state(g);

  std::vector<double> xs, ys;
  for (double s : {1e-4, 1e-3, 1e-2, 1e-1}) {
    State st = base;
    st *= s;
    const VectorField f = assemble_f(st.u, st.q, prm);
    const TensorField gq = assemble_G(st.u, st.q, prm);
    xs.push_back(s);
    ys.push_back(lebesgue_norm(f, 2.0) + sobolev_seminorm(gq, 2.0, 1));
  }
  const double expo = loglog_slope(xs, ys);
  out.gate(expo >= kMinExponent);
  out.detail << "||(f(sU), grad G(sU))|| ~ s^" << expo << " over s in [1e-4, 1e-1] (min "
             << kMinExponent << ")";
  return out;
}

// ------------------------------------------------------- 11: CLI determinism

Outcome criterion_11() {
  Outcome out;
  const fs::path dir = "acceptance_scratch";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string bin = QTHALF_BIN;
  const std::string quiet = " > /dev/null 2>&1";

  auto write = [&](const char* name, const std::string& text) {
    std::ofstream o(dir / name, std::ios::binary);
    o << text;
    return (dir / name).string();
  };
  const std::string sweep_cfg = write("sweep.cfg",
                                      "[grid]\nn_tan = 16\nn_wall = 33\n[experiment]\n"
                                      "kind = resolvent-sweep\nn_lambda = 5\n");
  const std::string inv_cfg = write("inv.cfg", "[experiment]\ninstances = 40\n");
  const std::string strict_cfg =
      write("strict.cfg", "[experiment]\ninstances = 40\ntol_invariant = 1e-30\n");
  const std::string broken_cfg = write("broken.cfg", "[scheme]\ntheta = 3/5\n");

  // determinism: the same command twice produces identical bytes
  const std::string outdir = (dir / "out").string();
  const std::string cmd =
      bin + " resolvent-sweep --config " + sweep_cfg + " --out " + outdir + quiet;
  const int rc1 = run_cmd(cmd);
  const std::string rep_first = slurp(fs::path(outdir) / "report.json");
  const std::string csv_first = slurp(fs::path(outdir) / "smoothing_sweep.csv");
  const int rc2 = run_cmd(cmd);
  const bool rep_same = slurp(fs::path(outdir) / "report.json") == rep_first;
  const bool csv_same = slurp(fs::path(outdir) / "smoothing_sweep.csv") == csv_first;
  out.gate(rc1 == 0);
  out.gate(rc2 == 0);
  out.gate(rep_same);
  out.gate(csv_same);

  // exit-code contract: 0 pass, 1 failed checks, 2 config/usage errors
  const int rc_pass =
      run_cmd(bin + " invariants --config " + inv_cfg + " --out " + (dir / "i1").string() + quiet);
  const int rc_fail = run_cmd(bin + " invariants --config " + strict_cfg + " --out " +
                              (dir / "i2").string() + quiet);
  const int rc_bad = run_cmd(bin + " invariants --config " + broken_cfg + quiet);
  const int rc_missing = run_cmd(bin + " invariants --config " + (dir / "nope.cfg").string() + quiet);
  const int rc_kind = run_cmd(bin + " frobnicate --config " + inv_cfg + quiet);
  const int rc_usage = run_cmd(bin + " invariants" + quiet);
  out.gate(rc_pass == 0);
  out.gate(rc_fail == 1);
  out.gate(rc_bad == 2);
  out.gate(rc_missing == 2);
  out.gate(rc_kind == 2);
  out.gate(rc_usage == 2);

  out.detail << "rerun bytes identical (report " << (rep_same ? "yes" : "NO") << ", csv "
             << (csv_same ? "yes" : "NO") << "); exit codes pass/fail/bad/missing/kind/usage = "
             << rc_pass << "/" << rc_fail << "/" << rc_bad << "/" << rc_missing << "/" << rc_kind
             << "/" << rc_usage << " (want 0/1/2/2/2/2)";
  return out;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> fn;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> v = {
      {1, "pointwise algebraic invariants over random instances", criterion_1},
      {2, "independent assembly routes agree and converge", criterion_2},
      {3, "manufactured resolvent and pressure solutions, second order", criterion_3},
      {4, "uniform resolvent bound across the sector", criterion_4},
      {5, "resolvent smoothing decay between integrability classes", criterion_5},
      {6, "semigroup time-decay exponent for critical data", criterion_6},
      {7, "maximal-regularity ratio stable under refinement", criterion_7},
      {8, "interpolation-inequality dilation and refinement stability", criterion_8},
      {9, "contraction iteration: rates, residual, limit size", criterion_9},
      {10, "superlinear smallness of the nonlinear right side", criterion_10},
      {11, "command-line determinism and exit-code contract", criterion_11},
  };
  return v;
}

int run_one(const Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = c.fn();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << "exception: " << e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] criterion %d: %s | %s | %.1fs\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
              out.detail.str().c_str(), secs);
  std::fflush(stdout);
  return out.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <criterion 1..11 | all>\n", argv[0]);
    return 2;
  }
  const std::string which = argv[1];
  if (which == "all") {
    int bad = 0;
    for (const Criterion& c : criteria()) bad += run_one(c);
    return bad == 0 ? 0 : 1;
  }
  const int id = std::atoi(which.c_str());
  for (const Criterion& c : criteria())
    if (c.id == id) return run_one(c);
  std::fprintf(stderr, "unknown criterion '%s'\n", which.c_str());
  return 2;
}
