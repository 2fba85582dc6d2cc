#include <cmath>
#include <vector>

#include "doctest.h"
#include "qthalf/field_ops.hpp"
#include "qthalf/fields.hpp"
#include "qthalf/linear_core.hpp"
#include "qthalf/nonlinear_rhs.hpp"
#include "qthalf/tensor_ops.hpp"
#include "qthalf/wellposed.hpp"

namespace {

using namespace qthalf;

constexpr double kPi = 3.14159265358979323846;

// Divergence-free small data: u = (D_y psi, -d_x psi) for a stream function
// whose wall profile is corrected so the one-sided derivative rows vanish
// exactly; Q is one symmetric traceless harmonic with stencil-exact Neumann
// rows.  Compliant with the simulate/picard preconditions by construction.
State stream_data(const Grid& g, double amp) {
  const int dim = g.dim;
  const int nw = g.n_wall;
  const double H = g.wall_extent;
  const double scale = std::pow(H / 2.0, 4.0);

  std::vector<double> pj(nw);
  for (int j = 0; j < nw; ++j) {
    const double y = g.wall_coord(j);
    pj[j] = y * y * (H - y) * (H - y) / scale;
  }
  pj[1] = pj[2] / 4.0;
  pj[nw - 2] = pj[nw - 3] / 4.0;

  ScalarField psi = make_scalar(g);
  for (long t = 0; t < g.tan_points(); ++t) {
    const double x = g.tan_coord(static_cast<int>(g.dim == 2 ? t : t / g.n_tan));
    for (int j = 0; j < nw; ++j)
      psi.at(0, t, j) = amp * std::sin(2.0 * kPi * x / g.tan_extent) * pj[j];
  }

  State st(g);
  const GridField dpsi_wall = diff(psi, dim - 1, 1);
  const GridField dpsi_x = diff(psi, 0, 1);
  for (long t = 0; t < g.tan_points(); ++t)
    for (int j = 0; j < nw; ++j) {
      st.u.at(0, t, j) = dpsi_wall.at(0, t, j);
      st.u.at(dim - 1, t, j) = -dpsi_x.at(0, t, j);
    }

  for (long t = 0; t < g.tan_points(); ++t) {
    const double x = g.tan_coord(static_cast<int>(g.dim == 2 ? t : t / g.n_tan));
    const double cx = std::cos(2.0 * kPi * x / g.tan_extent);
    for (int j = 0; j < nw; ++j) {
      const double w = std::cos(kPi * g.wall_coord(j) / H);
      st.q.at(0, t, j) = amp * cx * w;
      st.q.at(dim * dim - 1, t, j) = -amp * cx * w;
      st.q.at(1, t, j) = 0.5 * amp * cx * w;
      st.q.at(dim, t, j) = 0.5 * amp * cx * w;
    }
  }
  project_sym_traceless(st.q);
  apply_boundary(st);  // fixes the Q boundary rows, leaves u untouched
  return st;
}

// Smooth spatial profile used for synthetic trajectories.
State profile_state(const Grid& g) {
  State st = stream_data(g, 1.0);
  return st;
}

Trajectory scaled_trajectory(const Grid& g, const State& base, double t0, double dt, int n,
                             double (*gfun)(double)) {
  Trajectory tr(g);
  tr.dt = dt;
  for (int i = 0; i < n; ++i) {
    const double t = t0 + i * dt;
    State s = base;
    s *= gfun(t);
    tr.times.push_back(t);
    tr.states.push_back(std::move(s));
  }
  return tr;
}

double lin_profile(double t) { return 1.0 + t; }
double decay_profile(double t) { return std::exp(-0.7 * t) * (1.0 + 0.3 * std::sin(3.0 * t)); }

double state_sup_diff(const State& a, const State& b) {
  return std::max(max_abs_diff(a.u, b.u), max_abs_diff(a.q, b.q));
}

}  // namespace

TEST_SUITE("wellposed") {
  TEST_CASE("rational arithmetic and parsing") {
    CHECK(Rational(2, 8) == Rational(1, 4));
    CHECK(Rational(1, -2) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0, 1));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(3, 4) * Rational(2, 9) == Rational(1, 6));
    CHECK(rational_less(Rational(1, 4), Rational(1, 3)));
    CHECK_FALSE(rational_less(Rational(1, 3), Rational(1, 3)));

    CHECK(parse_rational("1/4") == Rational(1, 4));
    CHECK(parse_rational(" 3 / 12 ") == Rational(1, 4));
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("2") == Rational(2, 1));
    CHECK(parse_rational("-0.5") == Rational(-1, 2));
    CHECK_THROWS_AS((void)parse_rational("x/y"), std::invalid_argument);
    CHECK_THROWS_AS((void)Rational(1, 0), std::invalid_argument);
  }

  TEST_CASE("exponent scheme reproduces the exact textbook tuples") {
    const ExponentScheme e2 = exponent_setup(2, Rational(1, 4));
    CHECK(e2.inv_q0 == Rational(3, 4));
    CHECK(e2.inv_q1 == Rational(5, 8));
    CHECK(e2.inv_q2 == Rational(1, 8));
    CHECK(e2.q0 == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(e2.q1 == doctest::Approx(8.0 / 5.0).epsilon(1e-15));
    CHECK(e2.q2 == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(e2.p == 10);
    REQUIRE(e2.smoothing.size() == 2);
    CHECK(e2.smoothing[0].q_tilde == 2.0);
    CHECK(e2.smoothing[0].q == 4.0);
    CHECK(e2.smoothing[0].kappa == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(e2.smoothing[1].kappa == doctest::Approx(1.0).epsilon(1e-14));

    const ExponentScheme e3 = exponent_setup(3, Rational(1, 4));
    CHECK(e3.inv_q0 == Rational(1, 2));
    CHECK(e3.q0 == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(e3.q1 == doctest::Approx(12.0 / 5.0).epsilon(1e-15));
    CHECK(e3.q2 == doctest::Approx(12.0).epsilon(1e-15));
    CHECK(e3.smoothing[0].kappa == doctest::Approx(1.0).epsilon(1e-15));

    // 2/theta not an integer: ceil lands above it, margin stacks on top.
    const ExponentScheme e33 = exponent_setup(3, Rational(3, 10), 2);
    CHECK(e33.p == 9);
    // margin 0 with integer 2/theta must still satisfy 1/p < theta/2 strictly
    const ExponentScheme e20 = exponent_setup(2, Rational(1, 4), 0);
    CHECK(e20.p == 9);

    CHECK_THROWS_AS((void)exponent_setup(4, Rational(1, 4)), std::invalid_argument);
    CHECK_THROWS_AS((void)exponent_setup(2, Rational(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS((void)exponent_setup(2, Rational(0, 1)), std::invalid_argument);
    CHECK_THROWS_AS((void)exponent_setup(2, Rational(-1, 4)), std::invalid_argument);
  }

  TEST_CASE("weighted norm matches an independent evaluation on separable data") {
    const Grid g(2, 16, 33, 5.0, 5.0);
    const ExponentScheme es = exponent_setup(2, Rational(1, 4));
    const State base = profile_state(g);
    const int n = 11;
    const double dt = 0.05;
    const Trajectory tr = scaled_trajectory(g, base, 0.0, dt, n, lin_profile);

    const WeightedNormReport rep = weighted_norm_E(tr, es);
    CHECK(rep.horizon == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rep.stamp_dt == doctest::Approx(dt).epsilon(1e-14));

    // With states (1 + t) * base the time derivative is exactly base at every
    // stamp, so each block reduces to quadratures of the base-field norms.
    const GridField d2u = nth_gradient(base.u, 2);
    const GridField g3q = nth_gradient(base.q, 3);
    const GridField gq1 = grad(base.q);
    for (int b = 0; b < 2; ++b) {
      const double q = (b == 0) ? es.q1 : es.q2;
      const double nu0 = lebesgue_norm(base.u, q);
      const double nu2 = lebesgue_norm(d2u, q);
      const double nq1 = lebesgue_norm(gq1, q);
      const double nq3 = lebesgue_norm(g3q, q);

      auto lp = [&](auto&& v) {
        double mx = 0.0;
        for (int i = 0; i < n; ++i) mx = std::max(mx, v(i));
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          s += ((i == 0 || i == n - 1) ? 0.5 * dt : dt) * std::pow(v(i) / mx, double(es.p));
        return mx * std::pow(s, 1.0 / es.p);
      };
      auto tof = [&](int i) { return i * dt; };

      const double c1 =
          lp([&](int i) { return (1.0 + tof(i)) * ((nu0 + nq1) + (1.0 + tof(i)) * (nu2 + nq3)); });
      const double c2 = lp([&](int i) { return (1.0 + tof(i)) * (1.0 + tof(i)) * nq1; });
      const double c3 = lp([&](int i) { return (1.0 + tof(i)) * (nu0 + nq1); });
      const double c4 = (1.0 + tof(n - 1)) * (nu0 + nq1);

      CHECK(rep.block[b].q == doctest::Approx(q).epsilon(1e-15));
      CHECK(rep.block[b].weighted_parabolic == doctest::Approx(c1).epsilon(1e-12));
      CHECK(rep.block[b].weighted_gradq == doctest::Approx(c2).epsilon(1e-12));
      CHECK(rep.block[b].lp_trajectory == doctest::Approx(c3).epsilon(1e-12));
      CHECK(rep.block[b].sup_trajectory == doctest::Approx(c4).epsilon(1e-12));
    }
    CHECK(rep.E_total == doctest::Approx(rep.block[0].total() + rep.block[1].total()));
    CHECK(rep.tail_fraction > 0.0);
    CHECK(rep.tail_fraction < 1.0);
  }

  TEST_CASE("weighted norm is a norm: homogeneity, triangle, zero, guards") {
    const Grid g(2, 16, 33, 5.0, 5.0);
    const ExponentScheme es = exponent_setup(2, Rational(1, 4));
    const State base = profile_state(g);
    const Trajectory tr = scaled_trajectory(g, base, 0.0, 0.05, 13, decay_profile);

    const double e1 = weighted_norm_E(tr, es).E_total;
    CHECK(e1 > 0.0);

    Trajectory scaled = tr;
    for (State& s : scaled.states) s *= -3.75;
    const double es375 = weighted_norm_E(scaled, es).E_total;
    CHECK(es375 == doctest::Approx(3.75 * e1).epsilon(1e-12));

    // second trajectory with a different time profile
    Trajectory other = scaled_trajectory(g, base, 0.0, 0.05, 13, lin_profile);
    for (State& s : other.states) s *= 0.2;
    Trajectory sum = tr;
    for (std::size_t i = 0; i < sum.states.size(); ++i) sum.states[i] += other.states[i];
    const double ea = weighted_norm_E(sum, es).E_total;
    CHECK(ea <= e1 + weighted_norm_E(other, es).E_total + 1e-12 * e1);

    Trajectory zero = tr;
    for (State& s : zero.states) s *= 0.0;
    CHECK(weighted_norm_E(zero, es).E_total == 0.0);

    Trajectory two(g);
    two.times = {0.0, 0.1};
    two.states.push_back(base);
    two.states.push_back(base);
    CHECK_THROWS_AS((void)weighted_norm_E(two, es), std::invalid_argument);

    Trajectory skew = tr;
    skew.times.back() += 0.01;
    CHECK_THROWS_AS((void)weighted_norm_E(skew, es), std::invalid_argument);
  }

  TEST_CASE("halving the stamp spacing moves the weighted norm by under 2 percent") {
    const Grid g(2, 16, 33, 5.0, 5.0);
    const ExponentScheme es = exponent_setup(2, Rational(1, 4));
    const State base = profile_state(g);
    const Trajectory coarse = scaled_trajectory(g, base, 0.0, 0.1, 11, decay_profile);
    const Trajectory fine = scaled_trajectory(g, base, 0.0, 0.05, 21, decay_profile);
    const double ec = weighted_norm_E(coarse, es).E_total;
    const double ef = weighted_norm_E(fine, es).E_total;
    CHECK(std::abs(ec - ef) <= 0.02 * ef);
  }

  TEST_CASE("interpolation ratio: scale invariance and undefined cases") {
    const Grid g(2, 16, 33, 5.0, 5.0);
    const ExponentScheme es = exponent_setup(2, Rational(1, 4));
    const State base = profile_state(g);

    for (int level : {0, 1}) {
      const double r1 = gn_check(base.u, es, level);
      GridField scaled = base.u;
      scaled *= 17.0;
      const double r2 = gn_check(scaled, es, level);
      CHECK(std::isfinite(r1));
      CHECK(r1 > 0.0);
      CHECK(r2 == doctest::Approx(r1).epsilon(1e-12));
    }

    GridField zero = make_vector(g);
    CHECK(std::isnan(gn_check(zero, es, 0)));
    CHECK_THROWS_AS((void)gn_check(base.u, es, 2), std::invalid_argument);
  }

  TEST_CASE("simulate with nonlinear assembly off reproduces linear_evolve bitwise") {
    const Grid g(2, 16, 33, 5.0, 5.0);
    const ModelParams prm(2, 1.0, 1.0, 0.5, 0.7);
    const State u0 = stream_data(g, 1e-2);

    SimulateOptions so;
    so.T = 0.3;
    so.dt = 0.02;
    so.nonlinear = false;
    const Trajectory a = simulate(u0, prm, so);

    EvolveOptions eo;
    eo.T = so.T;
    eo.dt = so.dt;
    const Trajectory b = linear_evolve(u0, nullptr, prm, eo);

    REQUIRE(a.states.size() == b.states.size());
    for (std::size_t i = 0; i < a.states.size(); ++i)
      CHECK(state_sup_diff(a.states[i], b.states[i]) == 0.0);
  }

  TEST_CASE("simulate keeps the trajectory invariants and stores pressure stamps") {
    const Grid g(2, 16, 33, 5.0, 5.0);
    const ModelParams prm(2, 1.0, 1.0, 0.5, 0.7);
    const State u0 = stream_data(g, 1e-2);

    SimulateOptions so;
    so.T = 0.3;
    so.dt = 0.02;
    so.store_pressure = true;
    const Trajectory tr = simulate(u0, prm, so);
    CHECK_FALSE(tr.halted);
    REQUIRE(tr.states.size() == 16);
    REQUIRE(tr.pressures.size() == tr.states.size());

    for (const State& st : tr.states) {
      double qdev = 0.0, wall = 0.0;
      for (long t = 0; t < g.tan_points(); ++t) {
        for (int j = 0; j < g.n_wall; ++j) {
          const MatN qm = tensor_at(st.q, t, j);
          qdev = std::max(qdev, std::abs(qm(0, 0) + qm(1, 1)));
          qdev = std::max(qdev, std::abs(qm(0, 1) - qm(1, 0)));
        }
        for (int c = 0; c < g.dim; ++c)
          wall = std::max({wall, std::abs(st.u.at(c, t, 0)), std::abs(st.u.at(c, t, g.n_wall - 1))});
      }
      CHECK(qdev <= 1e-10);
      CHECK(wall == 0.0);
      CHECK(divergence_residual(st.u) <= 1e-8 * std::max(1e-12, sobolev_seminorm(st.u, 2.0, 1)));
    }

    // energy diagnostic: viscous decay should not grow the small-data energy
    auto energy = [&](const State& st) {
      const double ku = lebesgue_norm(st.u, 2.0);
      const double gq = sobolev_seminorm(st.q, 2.0, 1);
      double bulk = 0.0;
      for (long t = 0; t < g.tan_points(); ++t)
        for (int j = 0; j < g.n_wall; ++j)
          bulk += bulk_energy(SymTraceless(tensor_at(st.q, t, j)), prm);
      bulk *= g.tan_spacing() * g.wall_spacing();
      return 0.5 * ku * ku + 0.5 * gq * gq + bulk;
    };
    const double e0 = energy(tr.states.front());
    const double eT = energy(tr.states.back());
    CHECK(eT <= e0 + 10.0 * so.dt * std::max(e0, 1e-12));
  }

  TEST_CASE("simulate rejects non-compliant initial data") {
    const Grid g(2, 16, 33, 5.0, 5.0);
    const ModelParams prm(2, 1.0, 1.0, 0.5, 0.7);

    State bad = stream_data(g, 1e-2);
    bad.u.at(0, 3, 0) = 0.5;  // no-slip violation
    CHECK_THROWS_AS((void)simulate(bad, prm, {}), std::invalid_argument);

    State skewq = stream_data(g, 1e-2);
    skewq.q.at(1, 2, 5) += 0.3;  // symmetry violation
    CHECK_THROWS_AS((void)simulate(skewq, prm, {}), std::invalid_argument);
  }

  TEST_CASE("picard iteration contracts on small data and matches simulate") {
    const Grid g(2, 16, 33, 5.0, 5.0);
    const ModelParams prm(2, 1.0, 1.0, 0.5, 0.7);
    const ExponentScheme es = exponent_setup(2, Rational(1, 4));
    const State u0 = stream_data(g, 1e-3);

    PicardOptions po;
    po.T = 0.4;
    po.dt = 0.02;
    po.k_max = 5;
    const PicardResult pr = picard_iterate(u0, prm, es, po);

    CHECK_FALSE(pr.diverged);
    REQUIRE(pr.records.size() == 5);
    CHECK(pr.records.front().k == 1);
    CHECK(pr.records.front().E_k > 0.0);
    CHECK(pr.records.front().diff_prev == doctest::Approx(pr.records.front().E_k));
    for (std::size_t i = 0; i + 1 < pr.records.size(); ++i) {
      const PicardRecord& r = pr.records[i];
      CHECK(r.k == static_cast<int>(i) + 1);
      CHECK(r.delta >= 0.0);
      CHECK(r.delta <= 0.5);
      CHECK(r.residual >= 0.0);
    }
    // the last record's forward quantities are not computed
    CHECK(pr.records.back().delta == -1.0);
    // successive residuals shrink geometrically
    CHECK(pr.records[3].residual < pr.records[1].residual);

    SimulateOptions so;
    so.T = po.T;
    so.dt = po.dt;
    const Trajectory sim = simulate(u0, prm, so);
    REQUIRE(sim.states.size() == pr.limit.states.size());
    double dmax = 0.0, smax = 0.0;
    for (std::size_t i = 0; i < sim.states.size(); ++i) {
      dmax = std::max(dmax, state_sup_diff(sim.states[i], pr.limit.states[i]));
      smax = std::max(smax, sup_norm(sim.states[i].u));
    }
    CHECK(dmax <= 1e-9 * std::max(smax, 1e-6));

    CHECK_THROWS_AS((void)picard_iterate(u0, prm, es, PicardOptions{0.4, 0.02, 2, 5, 0.0}),
                    std::invalid_argument);
  }
}
