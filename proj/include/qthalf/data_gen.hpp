#pragma once

#include <cstdint>
#include <random>

#include "qthalf/fields.hpp"
#include "qthalf/tensor_ops.hpp"

namespace qthalf {

// Deterministic generator: the engine is the fully specified mt19937_64 and
// doubles come from the top 53 bits, so identical seeds give identical
// streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int uniform_int(int a, int b) {  // inclusive bounds
    return a + static_cast<int>(uniform() * (b - a + 1));
  }

 private:
  std::mt19937_64 eng_;
};

MatN random_matrix(Rng& rng, int dim, double amp);
MatN random_traceless(Rng& rng, int dim, double amp);
SymTraceless random_sym_traceless(Rng& rng, int dim, double amp);

// Smooth band-limited field: tangential harmonics up to k_max with random
// phases, wall profiles cos(m pi y / H) up to m_max, coefficients damped as
// 1/(1 + k^2 + m^2).
GridField random_band_limited(Rng& rng, const Grid& g, int comps, int k_max, int m_max,
                              double amp);

// Divergence-free velocity through a spectral-tangential stream function
// whose wall profile has stencil-exact zero derivative rows, so no-slip and
// the discrete divergence both hold to roundoff.  Modes 1..k_max with random
// amplitudes and phases.
VectorField random_solenoidal(Rng& rng, const Grid& g, int k_max, double amp);

// Compliant state for the nonlinear runs: random_solenoidal velocity plus a
// symmetric traceless Q from cos wall profiles, boundary rows enforced.
State random_state(Rng& rng, const Grid& g, int k_max, double amp);

// Velocity-only data with a critical low-frequency spectrum: tangential
// amplitude proportional to 1/|k| over physical wavenumbers in
// [k_phys_min, k_phys_max], random phases, Q = 0.
State decay_data(Rng& rng, const Grid& g, double k_phys_min, double k_phys_max, double amp);

// Deterministic localized data: one Gaussian stream-function bump in the box
// center (velocity) and one Gaussian Q bump, boundary rows enforced.
State bump_data(const Grid& g, double amp);

// Velocity-only wave packet: stream function = Gaussian envelope of the given
// width, centered in the box and localized in every direction, carrying a
// tangential oscillation cos(k x).  Q = 0, wall rows killed so the discrete
// curl is exactly no-slip.
State packet_data(const Grid& g, double k_carrier, double width, double amp);

// Rescales a state so the L2 size of (u, Q) equals target; zero data throws.
void scale_to_norm(State& st, double target);

}  // namespace qthalf
