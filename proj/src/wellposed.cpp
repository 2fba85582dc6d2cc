#include "qthalf/wellposed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "qthalf/field_ops.hpp"
#include "qthalf/nonlinear_rhs.hpp"

namespace qthalf {

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw std::invalid_argument("rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
}
Rational operator-(const Rational& a, const Rational& b) {
  return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
}
Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num * b.num, a.den * b.den);
}
bool rational_less(const Rational& a, const Rational& b) { return a.num * b.den < b.num * a.den; }

Rational parse_rational(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw std::invalid_argument("rational: empty string");

  auto to_ll = [&](const std::string& part) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(part, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("rational: cannot parse '" + s + "'");
    }
    if (pos != part.size()) throw std::invalid_argument("rational: cannot parse '" + s + "'");
    return v;
  };

  if (auto slash = t.find('/'); slash != std::string::npos)
    return Rational(to_ll(t.substr(0, slash)), to_ll(t.substr(slash + 1)));

  if (auto dot = t.find('.'); dot != std::string::npos) {
    std::string head = t.substr(0, dot), frac = t.substr(dot + 1);
    if (frac.empty() || frac.size() > 12)
      throw std::invalid_argument("rational: cannot parse '" + s + "'");
    bool neg = !head.empty() && head[0] == '-';
    if (!head.empty() && (head[0] == '-' || head[0] == '+')) head = head.substr(1);
    long long ip = head.empty() ? 0 : to_ll(head);
    long long fp = to_ll(frac);
    if (fp < 0) throw std::invalid_argument("rational: cannot parse '" + s + "'");
    long long scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    long long num = ip * scale + fp;
    return Rational(neg ? -num : num, scale);
  }

  return Rational(to_ll(t), 1);
}

ExponentScheme exponent_setup(int N, const Rational& theta, int p_margin) {
  if (N < 2 || N > 3) throw std::invalid_argument("exponent scheme: N must be 2 or 3");
  if (!rational_less(Rational(0, 1), theta) || !rational_less(theta, Rational(1, 2)))
    throw std::invalid_argument("exponent scheme: theta must lie in (0, 1/2)");
  if (p_margin < 0) throw std::invalid_argument("exponent scheme: p_margin must be >= 0");

  ExponentScheme es;
  es.N = N;
  es.theta = theta;
  es.inv_q0 = Rational(theta.den + 2 * theta.num, N * theta.den);
  es.inv_q1 = Rational(theta.den + theta.num, N * theta.den);
  es.inv_q2 = Rational(theta.num, N * theta.den);

  // Exact identities the scheme is built on.
  if (!(es.inv_q0 == es.inv_q1 + es.inv_q2))
    throw std::logic_error("exponent scheme: 1/q0 = 1/q1 + 1/q2 failed");
  if (!(Rational(N, 1) * (es.inv_q1 - es.inv_q2) == Rational(1, 1)))
    throw std::logic_error("exponent scheme: N(1/q1 - 1/q2) = 1 failed");
  const Rational one_minus(theta.den - theta.num, theta.den);
  if (!(one_minus * es.inv_q1 + theta * es.inv_q2 == Rational(1, N)))
    throw std::logic_error("exponent scheme: interpolation identity failed");

  // Ordering 1 < q0 < q1 < N < q2, i.e. 1/q2 < 1/N < 1/q1 < 1/q0 < 1.
  const Rational invN(1, N);
  if (!rational_less(es.inv_q2, invN) || !rational_less(invN, es.inv_q1) ||
      !rational_less(es.inv_q1, es.inv_q0) || !rational_less(es.inv_q0, Rational(1, 1)))
    throw std::invalid_argument("exponent scheme: exponents out of order for this theta");

  es.q0 = static_cast<double>(es.inv_q0.den) / static_cast<double>(es.inv_q0.num);
  es.q1 = static_cast<double>(es.inv_q1.den) / static_cast<double>(es.inv_q1.num);
  es.q2 = static_cast<double>(es.inv_q2.den) / static_cast<double>(es.inv_q2.num);

  // Smallest integer at or above 2/theta, raised by the margin; 1/p < theta/2
  // must hold strictly.
  const long long ceil_2t = (2 * theta.den + theta.num - 1) / theta.num;
  es.p = static_cast<int>(ceil_2t) + p_margin;
  if (!rational_less(Rational(2 * theta.den, theta.num), Rational(es.p, 1))) es.p += 1;
  if (!rational_less(Rational(1, es.p), Rational(theta.num, 2 * theta.den)))
    throw std::logic_error("exponent scheme: 1/p < theta/2 failed");

  es.smoothing.push_back({2.0, 2.0 * N, 0.5 * (N - 1)});
  es.smoothing.push_back({es.q1, es.q2, 1.0});
  return es;
}

namespace {

State stamp_lincomb(const State& s0, double c0, const State& s1, double c1, const State& s2,
                    double c2) {
  State out = s0;
  out *= c0;
  State t = s1;
  t *= c1;
  out += t;
  t = s2;
  t *= c2;
  out += t;
  return out;
}

// Second-order time derivative at stamp i: central inside, one-sided at the ends.
State time_derivative_stamp(const Trajectory& tr, long i, double dt) {
  const long m = static_cast<long>(tr.states.size());
  const double r = 1.0 / (2.0 * dt);
  if (i == 0)
    return stamp_lincomb(tr.states[0], -3.0 * r, tr.states[1], 4.0 * r, tr.states[2], -r);
  if (i == m - 1)
    return stamp_lincomb(tr.states[m - 1], 3.0 * r, tr.states[m - 2], -4.0 * r, tr.states[m - 3],
                         r);
  return stamp_lincomb(tr.states[i - 1], -r, tr.states[i], 0.0, tr.states[i + 1], r);
}

}  // namespace

WeightedNormReport weighted_norm_E(const Trajectory& tr, const ExponentScheme& es) {
  const long m = static_cast<long>(tr.times.size());
  if (m < 3) throw std::invalid_argument("weighted_norm_E: trajectory must hold at least 3 stamps");
  if (static_cast<long>(tr.states.size()) != m)
    throw std::invalid_argument("weighted_norm_E: stamp/state count mismatch");
  const double dt = tr.times[1] - tr.times[0];
  if (!(dt > 0.0)) throw std::invalid_argument("weighted_norm_E: stamps must advance in time");
  for (long i = 2; i < m; ++i)
    if (std::abs(tr.times[i] - tr.times[i - 1] - dt) > 1e-9 * std::max(1.0, dt))
      throw std::invalid_argument("weighted_norm_E: stamps must be uniformly spaced");

  const double qs[2] = {es.q1, es.q2};
  std::vector<std::array<double, 2>> a_par(m), a_gq(m), a_traj(m);
  for (long i = 0; i < m; ++i) {
    const State& st = tr.states[i];
    const State dst = time_derivative_stamp(tr, i, dt);
    const GridField d2u = nth_gradient(st.u, 2);
    const GridField g3q = nth_gradient(st.q, 3);
    const GridField gq1 = grad(st.q);
    const GridField gdq = grad(dst.q);
    for (int b = 0; b < 2; ++b) {
      a_par[i][b] = lebesgue_norm(dst.u, qs[b]) + lebesgue_norm(d2u, qs[b]) +
                    lebesgue_norm(gdq, qs[b]) + lebesgue_norm(g3q, qs[b]);
      const double gn = lebesgue_norm(gq1, qs[b]);
      a_gq[i][b] = gn;
      a_traj[i][b] = lebesgue_norm(st.u, qs[b]) + gn;
    }
  }

  const double horizon = tr.times.back();
  const double p = static_cast<double>(es.p);
  auto weight = [&](long i) { return (i == 0 || i == m - 1) ? 0.5 * dt : dt; };

  WeightedNormReport rep;
  rep.horizon = horizon;
  rep.stamp_dt = dt;

  double tail_max = 0.0;
  // Lp time quadrature with max rescaling; also tracks the mass past T/2.
  auto lp_time = [&](auto&& value) {
    double mx = 0.0;
    for (long i = 0; i < m; ++i) mx = std::max(mx, value(i));
    if (mx == 0.0) return 0.0;
    double tot = 0.0, tail = 0.0;
    for (long i = 0; i < m; ++i) {
      const double mass = weight(i) * std::pow(value(i) / mx, p);
      tot += mass;
      if (tr.times[i] >= 0.5 * horizon) tail += mass;
    }
    tail_max = std::max(tail_max, tail / tot);
    return mx * std::pow(tot, 1.0 / p);
  };

  for (int b = 0; b < 2; ++b) {
    NormBlock& nb = rep.block[b];
    nb.q = qs[b];
    nb.weighted_parabolic = lp_time([&](long i) { return (1.0 + tr.times[i]) * a_par[i][b]; });
    nb.weighted_gradq = lp_time([&](long i) { return (1.0 + tr.times[i]) * a_gq[i][b]; });
    nb.lp_trajectory = lp_time([&](long i) { return a_traj[i][b]; });
    double sup = 0.0;
    for (long i = 0; i < m; ++i) sup = std::max(sup, a_traj[i][b]);
    nb.sup_trajectory = sup;
  }
  rep.tail_fraction = tail_max;
  rep.E_total = rep.block[0].total() + rep.block[1].total();
  return rep;
}

Trajectory trajectory_difference(const Trajectory& a, const Trajectory& b) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument("trajectory_difference: grids differ");
  if (a.times.size() != b.times.size() || a.states.size() != b.states.size())
    throw std::invalid_argument("trajectory_difference: stamp counts differ");
  for (std::size_t i = 0; i < a.times.size(); ++i)
    if (std::abs(a.times[i] - b.times[i]) > 1e-12 * std::max(1.0, std::abs(a.times[i])))
      throw std::invalid_argument("trajectory_difference: time stamps differ");

  Trajectory d(a.grid);
  d.dt = a.dt;
  d.store_every = a.store_every;
  d.times = a.times;
  d.states.reserve(a.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) d.states.push_back(a.states[i] - b.states[i]);
  return d;
}

double gn_check(const GridField& v, const ExponentScheme& es, int level) {
  if (level != 0 && level != 1)
    throw std::invalid_argument("gn_check: derivative level must be 0 or 1");
  const GridField top = (level == 0) ? v : grad(v);
  const GridField dtop = grad(top);
  const double num = sup_norm(top);
  const double th = es.theta.value();
  const double den =
      std::pow(lebesgue_norm(dtop, es.q1), 1.0 - th) * std::pow(lebesgue_norm(dtop, es.q2), th);
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return num / den;
}

namespace {

void validate_initial_state(const State& st, const char* who) {
  const Grid& g = st.u.grid();
  const int dim = g.dim;
  std::string why;

  double wall = 0.0;
  for (int c = 0; c < dim; ++c)
    for (long t = 0; t < g.tan_points(); ++t)
      wall = std::max({wall, std::abs(st.u.at(c, t, 0)), std::abs(st.u.at(c, t, g.n_wall - 1))});
  if (wall > 1e-8 * std::max(1.0, sup_norm(st.u))) why += "velocity nonzero on boundary rows; ";

  const double dres = divergence_residual(st.u);
  if (dres > 1e-6 * std::max(1.0, sobolev_seminorm(st.u, 2.0, 1)))
    why += "velocity not discretely divergence free; ";

  double qdev = 0.0;
  for (long t = 0; t < g.tan_points(); ++t)
    for (int j = 0; j < g.n_wall; ++j) {
      const MatN qm = tensor_at(st.q, t, j);
      double tr = 0.0;
      for (int i = 0; i < dim; ++i) {
        tr += qm(i, i);
        for (int k = i + 1; k < dim; ++k) qdev = std::max(qdev, std::abs(qm(i, k) - qm(k, i)));
      }
      qdev = std::max(qdev, std::abs(tr));
    }
  if (qdev > 1e-8 * std::max(1.0, sup_norm(st.q)))
    why += "Q not symmetric traceless; ";

  if (wall_normal_derivative_residual(st.q) > 1e-6 * std::max(1.0, sup_norm(st.q)))
    why += "Q normal derivative nonzero on boundary rows; ";

  if (!why.empty())
    throw std::invalid_argument(std::string(who) + ": initial data violates preconditions: " + why);
}

}  // namespace

Trajectory simulate(const State& u0, const ModelParams& prm, const SimulateOptions& opts) {
  validate_initial_state(u0, "simulate");

  EvolveOptions eo;
  eo.T = opts.T;
  eo.dt = opts.dt;
  eo.store_every = opts.store_every;
  eo.blowup_factor = opts.blowup_factor;
  eo.store_pressure = opts.store_pressure;

  ForcingFn forcing;  // empty: identical code path to linear_evolve
  if (opts.nonlinear)
    forcing = [&prm](int, double, const State& cur, VectorField& f, TensorField& g) {
      f = assemble_f(cur.u, cur.q, prm);
      g = assemble_G(cur.u, cur.q, prm);
    };
  return evolve(u0, forcing, prm, eo);
}

PicardResult picard_iterate(const State& u0, const ModelParams& prm, const ExponentScheme& es,
                            const PicardOptions& opts) {
  if (opts.store_every != 1)
    throw std::invalid_argument(
        "picard_iterate: store_every must be 1, the frozen right side needs every step");
  if (opts.k_max < 1) throw std::invalid_argument("picard_iterate: k_max must be >= 1");
  validate_initial_state(u0, "picard_iterate");

  EvolveOptions eo;
  eo.T = opts.T;
  eo.dt = opts.dt;
  eo.store_every = 1;

  PicardResult res(u0.u.grid());

  // U^1: homogeneous linear evolution from the data (U^0 is the zero
  // trajectory, so the first difference is E(U^1) itself).
  Trajectory prev = linear_evolve(u0, nullptr, prm, eo);
  if (prev.halted) {
    res.diverged = true;
    res.note = "iterate 1 halted: " + prev.halt_reason;
    res.limit = std::move(prev);
    return res;
  }
  double e_prev = weighted_norm_E(prev, es).E_total;
  double d_prev = e_prev;
  res.records.push_back({1, e_prev, d_prev, -1.0, -1.0});

  int growth_run = 0;
  for (int k = 1; k < opts.k_max; ++k) {
    const Trajectory& frozen = prev;
    ForcingFn forcing = [&frozen, &prm](int step, double, const State&, VectorField& f,
                                        TensorField& g) {
      const State& s = frozen.states.at(static_cast<std::size_t>(step));
      f = assemble_f(s.u, s.q, prm);
      g = assemble_G(s.u, s.q, prm);
    };
    Trajectory next = linear_evolve(u0, forcing, prm, eo);
    if (next.halted) {
      res.diverged = true;
      std::ostringstream os;
      os << "iterate " << (k + 1) << " halted: " << next.halt_reason;
      res.note = os.str();
      break;
    }

    const double d_k = weighted_norm_E(trajectory_difference(next, prev), es).E_total;
    const double e_next = weighted_norm_E(next, es).E_total;

    PicardRecord& cur = res.records.back();
    cur.delta = (d_prev > 0.0) ? d_k / d_prev : -1.0;
    cur.residual = (e_prev > 0.0) ? d_k / e_prev : -1.0;
    if (cur.delta > 1.0) {
      if (++growth_run >= 3 && !res.diverged) {
        res.diverged = true;
        res.note = "contraction factor exceeded 1 on three consecutive iterates";
      }
    } else {
      growth_run = 0;
    }

    res.records.push_back({k + 1, e_next, d_k, -1.0, -1.0});
    prev = std::move(next);
    e_prev = e_next;
    d_prev = d_k;

    if (opts.stop_tol > 0.0 && e_next > 0.0 && d_k / e_next < opts.stop_tol) break;
  }

  res.limit = std::move(prev);
  return res;
}

}  // namespace qthalf
