#include "qthalf/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qthalf/data_gen.hpp"
#include "qthalf/field_ops.hpp"
#include "qthalf/linear_core.hpp"
#include "qthalf/nonlinear_rhs.hpp"
#include "qthalf/tensor_ops.hpp"
#include "qthalf/wellposed.hpp"

namespace qthalf {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr const char* kCodeVersion = "qthalf 0.1.0";

double asym_max(const MatN& m) {
  double r = 0.0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i + 1; j < m.dim(); ++j) r = std::max(r, std::abs(m(i, j) - m(j, i)));
  return r;
}

double sym_max(const MatN& m) {
  double r = 0.0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i; j < m.dim(); ++j) r = std::max(r, std::abs(m(i, j) + m(j, i)));
  return r;
}

Grid config_grid(const RunConfig& c) {
  return Grid(c.dim, c.n_tan, c.n_wall, c.tan_extent, c.wall_extent);
}

ModelParams config_params(const RunConfig& c) { return ModelParams(c.dim, c.xi, c.a, c.b, c.c); }

Sector config_sector(const RunConfig& c, const ModelParams& prm) {
  return c.epsilon > 0.0 ? Sector::for_params(prm, c.epsilon) : Sector::for_params(prm);
}

Report base_report(const RunConfig& cfg) {
  Report rep;
  rep.kind = cfg.kind;
  rep.config_hash = config_hash_hex(cfg);
  rep.code_version = kCodeVersion;
  return rep;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return v;
}

// ---------------------------------------------------------------- invariants

Report run_invariants(const RunConfig& cfg) {
  Report rep = base_report(cfg);
  static const std::map<std::string, std::string> anchors = {
      {"sym_traceless_closure", "tensor_ops.SymTraceless"},
      {"bulk_derivative_traceless", "tensor_ops.bulk_derivative"},
      {"molecular_field_sym_traceless", "tensor_ops.molecular_field"},
      {"tau_symmetric", "tensor_ops.stress_tensors"},
      {"sigma_antisymmetric", "tensor_ops.stress_tensors"},
      {"coupling_trace_free_gradients", "tensor_ops.coupling_tensor_S"},
      {"q_equation_trace", "nonlinear_rhs.assemble_G"},
      {"coupling_at_zero_q", "tensor_ops.coupling_tensor_S"}};
  for (int dim : {2, 3}) {
    const auto sweep = invariant_sweep(dim, cfg.instances, cfg.seed + dim);
    for (const auto& [name, resid] : sweep)
      rep.metrics.push_back(make_metric("N" + std::to_string(dim) + "." + name, resid, "<=",
                                        cfg.tol_invariant, anchors.at(name)));
  }
  std::ostringstream os;
  os << "instances per dimension: " << cfg.instances;
  rep.notes.push_back(os.str());
  return rep;
}

// ----------------------------------------------------------- resolvent sweep

Report run_resolvent_sweep(const RunConfig& cfg) {
  Report rep = base_report(cfg);
  const Grid g = config_grid(cfg);
  const ModelParams prm = config_params(cfg);
  const Sector sec = config_sector(cfg, prm);

  const double qt = cfg.q_tilde > 0.0 ? cfg.q_tilde : 2.0;
  const double qn = cfg.q_norm > 0.0 ? cfg.q_norm : 2.0 * cfg.dim;
  const double kappa = cfg.dim * (1.0 / qt - 1.0 / qn);

  const State data = bump_data(g, 1.0);
  const TensorField zero_q = make_tensor(g);
  const double fnorm = lebesgue_norm(data.u, qt);

  Series s{"smoothing_sweep", {"lambda", "norm", "ratio"}, {}};
  std::vector<double> xs, ys;
  for (double lam : log_spaced(cfg.lambda_min, cfg.lambda_max, cfg.n_lambda)) {
    const ResolventSolution sol = resolvent_solve({lam, 0.0}, data.u, zero_q, prm, sec);
    const double y = lebesgue_norm(sol.u, qn) + sobolev_seminorm(sol.q, qn, 1);
    xs.push_back(lam);
    ys.push_back(y);
    s.rows.push_back({lam, y, y / fnorm});
  }
  const double slope = loglog_slope(xs, ys);
  rep.metrics.push_back(make_metric("smoothing_slope", slope, "<=", cfg.tol_smoothing_slope,
                                    "linear_core.resolvent_solve"));
  rep.series.push_back(std::move(s));
  std::ostringstream os;
  os << "pair (q_tilde, q) = (" << qt << ", " << qn << "), kappa = " << kappa
     << ", model slope -(1 - kappa/2) = " << -(1.0 - 0.5 * kappa);
  rep.notes.push_back(os.str());
  return rep;
}

// ------------------------------------------------------------------ decay fit

// The decay rate is an operator-norm envelope, realized by wave packets
// localized at scale 1/k in every direction: each band contributes a Bernstein
// factor times e^{-k^2 t}, and the max over bands traces t^{-kappa/2}.  A
// single fixed datum cannot realize that rate, so the experiment evolves one
// packet per band and fits the envelope.
Report run_decay_fit(const RunConfig& cfg) {
  Report rep = base_report(cfg);
  const Grid g = config_grid(cfg);
  const ModelParams prm = config_params(cfg);

  // carrier bands straddle the window's maximizers k^2 = 1/(4t), t in [1, 10];
  // packet width 2/k keeps the lowest band clear of the walls
  const std::vector<double> bands{0.14, 0.2, 0.28, 0.4, 0.57, 0.8};

  EvolveOptions eo;
  eo.T = cfg.T;
  eo.dt = cfg.dt;
  eo.store_every = cfg.store_every;

  const double qn = cfg.q_norm > 0.0 ? cfg.q_norm : 2.0 * cfg.dim;
  const double t_hi = std::min(cfg.T, 0.1 * std::pow(cfg.tan_extent / (2.0 * kPi), 2.0));

  std::vector<double> times, env;
  bool halted = false;
  for (double k : bands) {
    const State u0 = packet_data(g, k, 2.0 / k, cfg.amplitude);
    const double den = lebesgue_norm(u0.u, 2.0);
    const Trajectory tr = linear_evolve(u0, nullptr, prm, eo);
    halted = halted || tr.halted;
    if (env.empty()) {
      times = tr.times;
      env.assign(tr.times.size(), 0.0);
    }
    for (std::size_t i = 0; i < tr.times.size() && i < env.size(); ++i) {
      const double y =
          (lebesgue_norm(tr.states[i].u, qn) + sobolev_seminorm(tr.states[i].q, qn, 1)) / den;
      env[i] = std::max(env[i], y);
    }
  }
  rep.metrics.push_back(
      make_metric("not_halted", halted ? 1.0 : 0.0, "<=", 0.0, "linear_core.evolve"));

  Series s{"decay", {"t", "norm"}, {}};
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t <= 0.0) continue;
    s.rows.push_back({t, env[i]});
    if (t >= 1.0 && t <= t_hi && env[i] > 0.0) {
      xs.push_back(t);
      ys.push_back(env[i]);
    }
  }
  const double half_kappa = 0.25 * (cfg.dim - 1);  // pair (2, 2N)
  double slope = std::numeric_limits<double>::quiet_NaN();
  if (xs.size() >= 5) slope = loglog_slope(xs, ys);
  rep.metrics.push_back(make_metric("decay_slope_deviation", std::abs(slope + half_kappa), "<=",
                                    cfg.tol_decay_dev, "linear_core.evolve"));
  rep.metrics.push_back(
      make_metric("window_points", double(xs.size()), ">=", 5.0, "linear_core.evolve"));
  rep.series.push_back(std::move(s));
  std::ostringstream os;
  os << "fit window t in [1, " << t_hi << "], fitted slope " << slope << ", model -kappa/2 = "
     << -half_kappa << ", " << bands.size() << " packet bands";
  rep.notes.push_back(os.str());
  return rep;
}

// ------------------------------------------------------------------- gn check

GridField zoomed_bump(const Grid& g, double scale) {
  GridField v = make_scalar(g);
  const double L = g.tan_extent, H = g.wall_extent;
  const double w = 0.07 * std::min(L, H);
  for (long t = 0; t < g.tan_points(); ++t) {
    const double x = g.tan_coord(static_cast<int>(g.dim == 2 ? t : t / g.n_tan));
    const double y2 = (g.dim == 3) ? g.tan_coord(static_cast<int>(t % g.n_tan)) - 0.5 * L : 0.0;
    const double dx = (x - 0.5 * L) / scale;
    const double dy = y2 / scale;
    for (int j = 0; j < g.n_wall; ++j) {
      const double dz = (g.wall_coord(j) - 0.5 * H) / scale;
      v.at(0, t, j) = std::exp(-(dx * dx + dy * dy + dz * dz) / (2.0 * w * w)) *
                      std::cos(1.3 * (dx + 0.5 * dz) / w);
    }
  }
  return v;
}

struct GnMode {
  int kx, m;
  double a, ph;
};

GridField modes_on_grid(const Grid& g, const std::vector<GnMode>& modes, double l_ref) {
  GridField v = make_scalar(g);
  const double k0 = 2.0 * kPi / l_ref;
  for (const GnMode& md : modes)
    for (long t = 0; t < g.tan_points(); ++t) {
      const double x = g.tan_coord(static_cast<int>(g.dim == 2 ? t : t / g.n_tan));
      const double cx = std::cos(k0 * md.kx * x + md.ph);
      for (int j = 0; j < g.n_wall; ++j)
        v.at(0, t, j) +=
            md.a * cx * std::cos(md.m * kPi * g.wall_coord(j) / g.wall_extent);
    }
  return v;
}

Report run_gn_check(const RunConfig& cfg) {
  Report rep = base_report(cfg);
  const ExponentScheme es = exponent_setup(cfg.dim, cfg.theta, cfg.p_margin);

  // dilation sweep: same profile zoomed about the box center on a fixed grid
  const Grid g = config_grid(cfg);
  Series ds{"dilation", {"scale", "ratio"}, {}};
  double rmin = 1e300, rmax = 0.0;
  for (double scale : {0.70, 0.85, 1.0, 1.18, 1.40}) {
    const double r = gn_check(zoomed_bump(g, scale), es, cfg.gn_level);
    ds.rows.push_back({scale, r});
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  rep.metrics.push_back(make_metric("dilation_variation", (rmax - rmin) / rmin, "<=",
                                    cfg.tol_gn_variation, "wellposed.gn_check"));
  rep.series.push_back(std::move(ds));

  // random-field max ratio under refinement
  Rng rng(cfg.seed);
  const Grid fine(cfg.dim, 2 * cfg.n_tan, 2 * (cfg.n_wall - 1) + 1, cfg.tan_extent,
                  cfg.wall_extent);
  const int k_hi = std::min(6, cfg.n_tan / 2 - 1);
  double max_coarse = 0.0, max_fine = 0.0;
  Series rs{"refinement", {"field", "coarse", "fine"}, {}};
  for (int fi = 0; fi < cfg.gn_fields; ++fi) {
    std::vector<GnMode> modes;
    for (int k = 0; k <= k_hi; ++k)
      for (int m = 0; m <= 6; ++m)
        modes.push_back({k, m, rng.uniform(-1.0, 1.0) / (1.0 + k * k + m * m),
                         rng.uniform(0.0, 2.0 * kPi)});
    const double rc = gn_check(modes_on_grid(g, modes, cfg.tan_extent), es, cfg.gn_level);
    const double rf = gn_check(modes_on_grid(fine, modes, cfg.tan_extent), es, cfg.gn_level);
    rs.rows.push_back({double(fi), rc, rf});
    max_coarse = std::max(max_coarse, rc);
    max_fine = std::max(max_fine, rf);
  }
  rep.metrics.push_back(make_metric("refinement_drift",
                                    std::abs(max_fine - max_coarse) / max_coarse, "<=",
                                    cfg.tol_gn_variation, "wellposed.gn_check"));
  rep.series.push_back(std::move(rs));
  std::ostringstream os;
  os << "derivative level " << cfg.gn_level << ", max ratio coarse " << max_coarse << ", fine "
     << max_fine;
  rep.notes.push_back(os.str());
  return rep;
}

// --------------------------------------------------------------------- picard

Report run_picard(const RunConfig& cfg) {
  Report rep = base_report(cfg);
  const Grid g = config_grid(cfg);
  const ModelParams prm = config_params(cfg);
  const ExponentScheme es = exponent_setup(cfg.dim, cfg.theta, cfg.p_margin);

  Rng rng(cfg.seed);
  State u0 = random_state(rng, g, cfg.band, 1.0);
  scale_to_norm(u0, cfg.amplitude);

  PicardOptions po;
  po.T = cfg.T;
  po.dt = cfg.dt;
  po.k_max = cfg.k_max;
  const PicardResult pr = picard_iterate(u0, prm, es, po);

  double max_delta = 0.0, final_residual = std::numeric_limits<double>::quiet_NaN();
  Series s{"picard_records", {"k", "E", "diff_prev", "delta", "residual"}, {}};
  for (const PicardRecord& r : pr.records) {
    s.rows.push_back({double(r.k), r.E_k, r.diff_prev, r.delta, r.residual});
    if (r.delta >= 0.0) max_delta = std::max(max_delta, r.delta);
    if (r.residual >= 0.0) final_residual = r.residual;
  }
  rep.metrics.push_back(
      make_metric("diverged", pr.diverged ? 1.0 : 0.0, "<=", 0.0, "wellposed.picard_iterate"));
  rep.metrics.push_back(
      make_metric("max_delta", max_delta, "<=", cfg.tol_delta, "wellposed.picard_iterate"));
  rep.metrics.push_back(make_metric("final_residual", final_residual, "<=", cfg.tol_residual,
                                    "wellposed.picard_iterate"));
  rep.metrics.push_back(make_metric("E_limit", pr.records.back().E_k, "<=", cfg.tol_e_total,
                                    "wellposed.weighted_norm_E"));
  rep.series.push_back(std::move(s));
  if (!pr.note.empty()) rep.notes.push_back(pr.note);
  return rep;
}

// ------------------------------------------------------------------- simulate

Report run_simulate(const RunConfig& cfg) {
  Report rep = base_report(cfg);
  const Grid g = config_grid(cfg);
  const ModelParams prm = config_params(cfg);

  Rng rng(cfg.seed);
  State u0 = random_state(rng, g, cfg.band, 1.0);
  scale_to_norm(u0, cfg.amplitude);

  SimulateOptions so;
  so.T = cfg.T;
  so.dt = cfg.dt;
  so.store_every = cfg.store_every;
  so.store_pressure = true;
  const Trajectory tr = simulate(u0, prm, so);

  rep.metrics.push_back(
      make_metric("not_halted", tr.halted ? 1.0 : 0.0, "<=", 0.0, "wellposed.simulate"));
  if (tr.halted) rep.notes.push_back(tr.halt_reason);

  double qdev = 0.0, wall = 0.0, divrel = 0.0;
  Series s{"trajectory", {"t", "u_l2", "q_l2", "div_residual", "energy"}, {}};
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    const State& st = tr.states[i];
    for (long t = 0; t < g.tan_points(); ++t) {
      for (int j = 0; j < g.n_wall; ++j) {
        const MatN qm = tensor_at(st.q, t, j);
        qdev = std::max(qdev, std::abs(qm.trace()));
        qdev = std::max(qdev, asym_max(qm));
      }
      for (int c = 0; c < g.dim; ++c)
        wall = std::max({wall, std::abs(st.u.at(c, t, 0)), std::abs(st.u.at(c, t, g.n_wall - 1))});
    }
    const double dres = divergence_residual(st.u);
    const double gsc = sobolev_seminorm(st.u, 2.0, 1);
    if (gsc > 0.0) divrel = std::max(divrel, dres / gsc);

    double bulk = 0.0;
    for (long t = 0; t < g.tan_points(); ++t)
      for (int j = 0; j < g.n_wall; ++j)
        bulk += bulk_energy(SymTraceless(tensor_at(st.q, t, j)), prm);
    double cell = g.wall_spacing();
    for (int d = 0; d < g.dim - 1; ++d) cell *= g.tan_spacing();
    bulk *= cell;
    const double ku = lebesgue_norm(st.u, 2.0);
    const double gq = sobolev_seminorm(st.q, 2.0, 1);
    s.rows.push_back({tr.times[i], ku, lebesgue_norm(st.q, 2.0), dres,
                      0.5 * ku * ku + 0.5 * gq * gq + bulk});
  }
  rep.metrics.push_back(make_metric("q_sym_traceless_max", qdev, "<=", 1e-10,
                                    "wellposed.simulate"));
  rep.metrics.push_back(make_metric("wall_velocity_max", wall, "<=", 1e-14, "wellposed.simulate"));
  rep.metrics.push_back(make_metric("div_relative_max", divrel, "<=", 1e-8, "wellposed.simulate"));

  const double e0 = s.rows.front().back(), eT = s.rows.back().back();
  rep.metrics.push_back(make_metric("energy_growth",
                                    (eT - e0) / std::max(e0, 1e-300), "<=", 10.0 * cfg.dt,
                                    "wellposed.simulate"));

  rep.snapshots.emplace_back("state_u_final", tr.states.back().u);
  rep.snapshots.emplace_back("state_q_final", tr.states.back().q);
  if (!tr.pressures.empty()) rep.snapshots.emplace_back("pressure_final", tr.pressures.back());

  try {
    const ExponentScheme es = exponent_setup(cfg.dim, cfg.theta, cfg.p_margin);
    const WeightedNormReport wn = weighted_norm_E(tr, es);
    std::ostringstream os;
    os << "E_total = " << wn.E_total << " over horizon " << wn.horizon << ", tail fraction "
       << wn.tail_fraction;
    rep.notes.push_back(os.str());
  } catch (const std::exception& e) {
    rep.notes.push_back(std::string("weighted norm skipped: ") + e.what());
  }
  rep.series.push_back(std::move(s));
  return rep;
}

}  // namespace

std::vector<std::pair<std::string, double>> invariant_sweep(int dim, int instances,
                                                            std::uint64_t seed) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("invariant_sweep: dim must be 2 or 3");
  Rng rng(seed);
  std::array<double, 8> worst{};
  const std::array<const char*, 8> names = {
      "sym_traceless_closure", "bulk_derivative_traceless", "molecular_field_sym_traceless",
      "tau_symmetric",         "sigma_antisymmetric",       "coupling_trace_free_gradients",
      "q_equation_trace",      "coupling_at_zero_q"};

  for (int it = 0; it < instances; ++it) {
    const ModelParams prm(dim, rng.uniform(-1.5, 1.5), rng.uniform(0.1, 2.0),
                          rng.uniform(-1.0, 1.0), rng.uniform(0.1, 2.0));
    const SymTraceless q = random_sym_traceless(rng, dim, 1.0);
    const SymTraceless lap = random_sym_traceless(rng, dim, 1.0);
    const MatN gu = random_matrix(rng, dim, 1.0);
    const MatN gu0 = random_traceless(rng, dim, 1.0);
    std::array<MatN, 3> dq = {MatN(dim), MatN(dim), MatN(dim)};
    for (int d = 0; d < dim; ++d) dq[d] = random_sym_traceless(rng, dim, 1.0).matrix();

    // closure of the projection
    const SymTraceless closure(random_matrix(rng, dim, 1.0));
    worst[0] = std::max(worst[0],
                        std::abs(closure.matrix().trace()) + asym_max(closure.matrix()));

    const MatN fp = bulk_derivative(q, prm).matrix();
    worst[1] = std::max(worst[1], std::abs(fp.trace()) + asym_max(fp));

    const SymTraceless h = molecular_field(q, lap, prm);
    worst[2] = std::max(worst[2], std::abs(h.matrix().trace()) + asym_max(h.matrix()));

    const StressPair sp = stress_tensors(q, h, dq, prm);
    worst[3] = std::max(worst[3], asym_max(sp.tau));
    worst[4] = std::max(worst[4], sym_max(sp.sigma));

    worst[5] = std::max(worst[5], std::abs(coupling_tensor_S(gu0, q, prm).trace()));

    // pointwise Q-equation right side; convection slices are symmetric
    // traceless, so only the algebraic pieces decide the trace
    {
      const auto [d, w] = strain_and_vorticity(gu);
      const MatN qm = q.matrix();
      MatN qn = qm;
      qn += (1.0 / dim) * MatN::identity(dim);
      MatN val = d * qm + qm * d;
      val *= prm.xi;
      val += w * qm - qm * w;
      val -= (2.0 * prm.xi * dot_trace(qm, gu)) * qn;
      val += fp;
      for (int dd = 0; dd < dim; ++dd) {
        MatN conv = dq[dd];
        conv *= -rng.uniform(-1.0, 1.0);
        val += conv;
      }
      worst[6] = std::max(worst[6], std::abs(val.trace()));
    }

    {
      const auto [d, w] = strain_and_vorticity(gu);
      (void)w;
      const SymTraceless zero(dim);
      MatN diff = coupling_tensor_S(gu, zero, prm);
      MatN bd = d;
      bd *= prm.beta;
      diff -= bd;
      worst[7] = std::max(worst[7], diff.max_abs());
    }
  }

  std::vector<std::pair<std::string, double>> out;
  for (int i = 0; i < 8; ++i) out.emplace_back(names[i], worst[i]);
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("loglog_slope: need matching samples, at least two");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("loglog_slope: samples must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Report run_experiment(const RunConfig& cfg) {
  if (cfg.kind == "invariants") return run_invariants(cfg);
  if (cfg.kind == "resolvent-sweep") return run_resolvent_sweep(cfg);
  if (cfg.kind == "decay-fit") return run_decay_fit(cfg);
  if (cfg.kind == "gn-check") return run_gn_check(cfg);
  if (cfg.kind == "picard") return run_picard(cfg);
  if (cfg.kind == "simulate") return run_simulate(cfg);
  throw std::invalid_argument("run_experiment: unknown kind '" + cfg.kind + "'");
}

}  // namespace qthalf
