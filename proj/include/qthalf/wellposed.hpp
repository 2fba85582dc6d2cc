#pragma once

#include <string>
#include <vector>

#include "qthalf/fields.hpp"
#include "qthalf/linear_core.hpp"
#include "qthalf/tensor_ops.hpp"

namespace qthalf {

// Exact rational arithmetic for the exponent bookkeeping.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);  // normalizes, den > 0

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

Rational operator+(const Rational& a, const Rational& b);
Rational operator-(const Rational& a, const Rational& b);
Rational operator*(const Rational& a, const Rational& b);
bool rational_less(const Rational& a, const Rational& b);

// Accepts "3/4", "2", "0.25".
Rational parse_rational(const std::string& s);

struct SmoothingPair {
  double q_tilde = 0.0;
  double q = 0.0;
  double kappa = 0.0;  // N (1/q_tilde - 1/q)
};

// Spatial/time exponent scheme: 1/q0 = (1+2 theta)/N, 1/q1 = (1+theta)/N,
// 1/q2 = theta/N, 1/p < theta/2.  All identities are validated in exact
// rational arithmetic on construction.
struct ExponentScheme {
  int N = 0;
  Rational theta;
  Rational inv_q0, inv_q1, inv_q2;
  double q0 = 0.0, q1 = 0.0, q2 = 0.0;
  int p = 0;
  std::vector<SmoothingPair> smoothing;  // (2, 2N) and (q1, q2)
};

// p is the smallest integer at or above 2/theta, raised by p_margin (and
// always strictly above 2/theta).
ExponentScheme exponent_setup(int N, const Rational& theta, int p_margin = 2);

// One spatial-exponent block of the weighted trajectory norm.
struct NormBlock {
  double q = 0.0;
  double weighted_parabolic = 0.0;  // ||(1+t)(dt,grad^2)(u,Q)||_{Lp(Lq x H1q)}
  double weighted_gradq = 0.0;      // ||(1+t) grad Q||_{Lp(Lq)}
  double lp_trajectory = 0.0;       // ||(u,Q)||_{Lp(Lq x H1q)}
  double sup_trajectory = 0.0;      // ||(u,Q)||_{Linf(Lq x H1q)}
  double total() const {
    return weighted_parabolic + weighted_gradq + lp_trajectory + sup_trajectory;
  }
};

struct WeightedNormReport {
  NormBlock block[2];  // at q1 and q2
  double E_total = 0.0;
  double horizon = 0.0;
  double stamp_dt = 0.0;
  double tail_fraction = 0.0;  // share of the Lp quadrature mass in [T/2, T]
};

// Weighted trajectory norm E over the stored stamps.  Time derivatives are
// second-order central differences (one-sided at the ends); the Lp time
// integral is a trapezoid over [0, T], the tail beyond T is neglected and its
// indicator reported as tail_fraction.  Requires >= 3 uniformly spaced stamps.
WeightedNormReport weighted_norm_E(const Trajectory& tr, const ExponentScheme& es);

// Stampwise difference of two trajectories over identical time stamps.
Trajectory trajectory_difference(const Trajectory& a, const Trajectory& b);

// Interpolation-inequality ratio
//   ||grad^l v||_inf / (||grad^{l+1} v||_{q1}^{1-theta} ||grad^{l+1} v||_{q2}^{theta}),
// finite for nonzero v; returns quiet NaN when the denominator vanishes.
double gn_check(const GridField& v, const ExponentScheme& es, int level);

struct SimulateOptions {
  double T = 1.0;
  double dt = 1e-2;
  int store_every = 1;
  bool nonlinear = true;  // false reproduces linear_evolve bitwise
  bool store_pressure = false;
  double blowup_factor = 1e6;
};

// Full nonlinear run: implicit coupled linear operator, explicit (f, G) from
// the previous step's state, invariants re-projected each step, stored
// pressure stamps include the forcing correction.  Validates the initial
// data (boundary rows, divergence, symmetry) before stepping.
Trajectory simulate(const State& u0, const ModelParams& prm, const SimulateOptions& opts);

struct PicardRecord {
  int k = 0;
  double E_k = 0.0;          // E(U^k)
  double diff_prev = -1.0;   // E(U^k - U^{k-1}); U^0 is the zero trajectory
  double delta = -1.0;       // E(U^{k+1}-U^k) / E(U^k-U^{k-1}) when defined
  double residual = -1.0;    // E(Phi(U^k) - U^k) / E(U^k) when defined
};

struct PicardOptions {
  double T = 1.0;
  double dt = 1e-2;
  int store_every = 1;  // every step must be stored for the frozen forcing
  int k_max = 8;
  double stop_tol = 0.0;  // early stop when the relative step drops below
};

struct PicardResult {
  std::vector<PicardRecord> records;
  Trajectory limit;
  bool diverged = false;
  std::string note;

  explicit PicardResult(const Grid& g) : limit(g) {}
};

// Picard iteration on trajectories: U^1 solves the homogeneous linear
// problem from U0, and U^{k+1} = Phi(U^k) solves the linear problem with the
// right side frozen along U^k.  The fixed point coincides with simulate's
// trajectory step for step.
PicardResult picard_iterate(const State& u0, const ModelParams& prm, const ExponentScheme& es,
                            const PicardOptions& opts);

}  // namespace qthalf
