#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "qthalf/fields.hpp"
#include "qthalf/mode_system.hpp"
#include "qthalf/tensor_ops.hpp"

namespace qthalf {

// Resolvent sector |arg lambda| < pi - epsilon, lambda != 0, where admissible
// apertures satisfy tan(epsilon0) >= |beta| / sqrt(2) and epsilon in
// (epsilon0, pi/2).
struct Sector {
  double epsilon0 = 0.0;
  double epsilon = 0.0;

  bool contains(std::complex<double> lambda) const;

  static Sector for_params(const ModelParams& prm);                  // default headroom
  static Sector for_params(const ModelParams& prm, double epsilon);  // validated
};

// Weak wall-Dirichlet pressure solve: find p with p = 0 on the wall such that
// (grad p, grad phi) = (rhs, grad phi) for every grid test function phi
// vanishing on the wall (Galerkin in the discrete gradient; the top boundary
// condition is the natural one).
ScalarField weak_pressure(const VectorField& rhs);

// K1: rhs = lap u - beta Div(lap Q - a Q).
ScalarField pressure_solve(const VectorField& u, const TensorField& q, const ModelParams& prm);

// K2: the forcing part of the pressure.
ScalarField pressure_from_forcing(const VectorField& f);

// Row-wise divergence of a matrix field: (Div A)_i = sum_d d_d A_{i d}.
VectorField div_tensor(const TensorField& a);

// Solves the resolvent problem
//   lambda u - lap u + grad p + beta Div(lap Q - a Q) = f,  div u = 0,
//   lambda Q - beta D(u) - lap Q + a Q = G
// for lambda in the sector, with no-slip, dQ/dn = 0, and the documented
// pressure gauge.  Throws std::invalid_argument for lambda outside the sector.
ResolventSolution resolvent_solve(std::complex<double> lambda, const VectorField& f,
                                  const TensorField& g, const ModelParams& prm,
                                  const Sector& sector);

enum class SemigroupMode { contour, imex };

struct ContourSpec {
  double omega = 0.0;   // arc radius; <= 0 picks 1/t
  double r_max = 0.0;   // ray truncation; <= 0 picks 40/t
  int ray_nodes = 64;   // geometrically spaced nodes per ray
  int arc_nodes = 32;   // trapezoid nodes on the arc
};

struct SemigroupOptions {
  SemigroupMode mode = SemigroupMode::contour;
  ContourSpec contour;
  double imex_dt = 1e-2;
  bool check_doubling = false;  // re-evaluate the contour with doubled nodes
};

struct SemigroupDiag {
  double doubling_delta = -1.0;  // relative change under node doubling
};
// With check_doubling set the doubled-node evaluation is the one returned.

// Applies the analytic-semigroup solution operator to initial data u0 at time
// t > 0, either by quadrature of the resolvent along the sector contour
// (rays at arg = +-(pi - epsilon) from omega to r_max plus the arc |lambda| =
// omega) or by implicit-Euler stepping of the same shifted systems.
State semigroup_apply(double t, const State& u0, const ModelParams& prm, const Sector& sector,
                      const SemigroupOptions& opts = {}, SemigroupDiag* diag = nullptr);

struct Trajectory {
  Grid grid;
  double dt = 0.0;
  int store_every = 1;
  std::vector<double> times;
  std::vector<State> states;
  std::vector<ScalarField> pressures;  // present when store_pressure was set
  bool halted = false;
  std::string halt_reason;

  explicit Trajectory(const Grid& g) : grid(g) {}
};

struct EvolveOptions {
  double T = 1.0;
  double dt = 1e-2;
  int store_every = 1;
  double blowup_factor = 1e6;
  bool store_pressure = false;
};

// Explicit forcing hook, evaluated at the start of each step on the current
// state; fills (f, g) which are preset to zero.
using ForcingFn =
    std::function<void(int step, double t, const State& current, VectorField& f, TensorField& g)>;

// Implicit-Euler evolution of the coupled linear system with explicit forcing:
// one shifted solve at lambda = 1/dt per step, factored once.  Q is
// re-projected onto symmetric traceless matrices and the boundary rows are
// re-enforced every step.  forcing == nullptr means zero forcing.
Trajectory evolve(const State& u0, const ForcingFn& forcing, const ModelParams& prm,
                  const EvolveOptions& opts);

// Alias for evolve with a time-dependent (state-independent) right side.
Trajectory linear_evolve(const State& u0, const ForcingFn& forcing, const ModelParams& prm,
                         const EvolveOptions& opts);

}  // namespace qthalf
