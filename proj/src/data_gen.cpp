#include "qthalf/data_gen.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qthalf/field_ops.hpp"

namespace qthalf {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Quartic wall profile scaled to unit peak, with the two near-wall nodes
// adjusted so the one-sided first-derivative stencils vanish exactly.
std::vector<double> corrected_wall_profile(const Grid& g, int m) {
  const int nw = g.n_wall;
  const double H = g.wall_extent;
  std::vector<double> p(nw);
  for (int j = 0; j < nw; ++j) {
    const double s = g.wall_coord(j) / H;
    const double base = 16.0 * s * s * (1.0 - s) * (1.0 - s);
    // extra interior wiggle keeps distinct modes distinct; it vanishes
    // quadratically at both walls as well
    p[j] = base * (m == 0 ? 1.0 : std::cos(m * kPi * (s - 0.5)));
  }
  p[1] = p[2] / 4.0;
  p[nw - 2] = p[nw - 3] / 4.0;
  return p;
}

// x coordinate of the flattened tangential index (first tangential axis).
double tan_x(const Grid& g, long t) {
  const int i = static_cast<int>(g.dim == 2 ? t : t / g.n_tan);
  return g.tan_coord(i);
}

// second tangential coordinate (dim 3), zero otherwise
double tan_y(const Grid& g, long t) {
  if (g.dim == 2) return 0.0;
  return g.tan_coord(static_cast<int>(t % g.n_tan));
}

// Adds one solenoidal stream-function mode: psi = amp sin(k0 x + phase) p(y),
// u_0 += D_wall psi, u_{dim-1} -= d_x psi, both discrete.
void add_stream_mode(VectorField& u, const Grid& g, int k, double amp, double phase, int m) {
  const std::vector<double> p = corrected_wall_profile(g, m);
  ScalarField psi = make_scalar(g);
  const double k0 = 2.0 * kPi * k / g.tan_extent;
  for (long t = 0; t < g.tan_points(); ++t) {
    const double s = std::sin(k0 * tan_x(g, t) + phase);
    for (int j = 0; j < g.n_wall; ++j) psi.at(0, t, j) = amp * s * p[j];
  }
  const GridField dw = diff(psi, g.dim - 1, 1);
  const GridField dx = diff(psi, 0, 1);
  for (long t = 0; t < g.tan_points(); ++t)
    for (int j = 0; j < g.n_wall; ++j) {
      u.at(0, t, j) += dw.at(0, t, j);
      u.at(g.dim - 1, t, j) -= dx.at(0, t, j);
    }
}

}  // namespace

MatN random_matrix(Rng& rng, int dim, double amp) {
  MatN m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = rng.uniform(-amp, amp);
  return m;
}

MatN random_traceless(Rng& rng, int dim, double amp) {
  MatN m = random_matrix(rng, dim, amp);
  const double t = m.trace() / dim;
  for (int i = 0; i < dim; ++i) m(i, i) -= t;
  return m;
}

SymTraceless random_sym_traceless(Rng& rng, int dim, double amp) {
  return SymTraceless(random_matrix(rng, dim, amp));
}

GridField random_band_limited(Rng& rng, const Grid& g, int comps, int k_max, int m_max,
                              double amp) {
  GridField f(g, comps);
  const int kx_max = std::min(k_max, g.n_tan / 2 - 1);
  for (int c = 0; c < comps; ++c)
    for (int kx = 0; kx <= kx_max; ++kx)
      for (int ky = 0; ky <= (g.dim == 3 ? kx_max : 0); ++ky)
        for (int m = 0; m <= m_max; ++m) {
          const double w = amp / (1.0 + kx * kx + ky * ky + m * m);
          const double a = rng.uniform(-w, w);
          const double phx = rng.uniform(0.0, 2.0 * kPi);
          const double phy = rng.uniform(0.0, 2.0 * kPi);
          const double k0 = 2.0 * kPi / g.tan_extent;
          for (long t = 0; t < g.tan_points(); ++t) {
            const double cx = std::cos(k0 * kx * tan_x(g, t) + phx);
            const double cy = (g.dim == 3) ? std::cos(k0 * ky * tan_y(g, t) + phy) : 1.0;
            for (int j = 0; j < g.n_wall; ++j) {
              const double wz = std::cos(m * kPi * g.wall_coord(j) / g.wall_extent);
              f.at(c, t, j) += a * cx * cy * wz;
            }
          }
        }
  return f;
}

VectorField random_solenoidal(Rng& rng, const Grid& g, int k_max, double amp) {
  VectorField u = make_vector(g);
  const int kx_max = std::min(k_max, g.n_tan / 2 - 1);
  for (int k = 1; k <= kx_max; ++k) {
    const double a = rng.uniform(0.3, 1.0) * amp / k;
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    const int m = rng.uniform_int(0, 2);
    add_stream_mode(u, g, k, a, phase, m);
  }
  return u;
}

State random_state(Rng& rng, const Grid& g, int k_max, double amp) {
  State st(g);
  st.u = random_solenoidal(rng, g, k_max, amp);

  const int dim = g.dim;
  const int kx_max = std::min(k_max, g.n_tan / 2 - 1);
  for (int k = 1; k <= kx_max; ++k)
    for (int m = 0; m <= 2; ++m) {
      const double a = rng.uniform(-1.0, 1.0) * amp / (k * (1 + m));
      const double b = rng.uniform(-1.0, 1.0) * amp / (k * (1 + m));
      const double ph = rng.uniform(0.0, 2.0 * kPi);
      const double k0 = 2.0 * kPi * k / g.tan_extent;
      for (long t = 0; t < g.tan_points(); ++t) {
        const double cx = std::cos(k0 * tan_x(g, t) + ph);
        for (int j = 0; j < g.n_wall; ++j) {
          const double wz = std::cos(m * kPi * g.wall_coord(j) / g.wall_extent);
          st.q.at(0, t, j) += a * cx * wz;
          st.q.at(dim * dim - 1, t, j) -= a * cx * wz;
          st.q.at(1, t, j) += b * cx * wz;
          st.q.at(dim, t, j) += b * cx * wz;
        }
      }
    }
  project_sym_traceless(st.q);
  apply_boundary(st);
  return st;
}

State decay_data(Rng& rng, const Grid& g, double k_phys_min, double k_phys_max, double amp) {
  State st(g);
  const double k0 = 2.0 * kPi / g.tan_extent;
  const int jmin = std::max(1, static_cast<int>(std::ceil(k_phys_min / k0)));
  const int jmax = std::min(g.n_tan / 2 - 1, static_cast<int>(std::floor(k_phys_max / k0)));
  if (jmin > jmax) throw std::invalid_argument("decay_data: empty wavenumber band for this grid");
  for (int k = jmin; k <= jmax; ++k) {
    // stream amplitude 1/k^2 makes the dominant velocity component ~ 1/|k|
    const double a = amp / ((k * k0) * (k * k0));
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    add_stream_mode(st.u, g, k, a, phase, k % 3);
  }
  return st;
}

State bump_data(const Grid& g, double amp) {
  State st(g);
  const double L = g.tan_extent, H = g.wall_extent;
  const double sx = L / 10.0, sy = H / 10.0;

  ScalarField psi = make_scalar(g);
  for (long t = 0; t < g.tan_points(); ++t) {
    const double dx = tan_x(g, t) - 0.5 * L;
    const double dy2 = (g.dim == 3) ? tan_y(g, t) - 0.5 * L : 0.0;
    for (int j = 0; j < g.n_wall; ++j) {
      const double dz = g.wall_coord(j) - 0.5 * H;
      psi.at(0, t, j) =
          amp * std::exp(-(dx * dx + dy2 * dy2) / (2.0 * sx * sx) - dz * dz / (2.0 * sy * sy));
    }
  }
  // kill the wall rows of the stream function so u is exactly no-slip after
  // the discrete curl
  for (long t = 0; t < g.tan_points(); ++t) {
    psi.at(0, t, 0) = 0.0;
    psi.at(0, t, g.n_wall - 1) = 0.0;
    psi.at(0, t, 1) = psi.at(0, t, 2) / 4.0;
    psi.at(0, t, g.n_wall - 2) = psi.at(0, t, g.n_wall - 3) / 4.0;
  }
  filter_nyquist(psi);
  const GridField dw = diff(psi, g.dim - 1, 1);
  const GridField dx1 = diff(psi, 0, 1);
  for (long t = 0; t < g.tan_points(); ++t)
    for (int j = 0; j < g.n_wall; ++j) {
      st.u.at(0, t, j) += dw.at(0, t, j);
      st.u.at(g.dim - 1, t, j) -= dx1.at(0, t, j);
    }

  for (long t = 0; t < g.tan_points(); ++t) {
    const double dx = tan_x(g, t) - 0.5 * L;
    const double dy2 = (g.dim == 3) ? tan_y(g, t) - 0.5 * L : 0.0;
    for (int j = 0; j < g.n_wall; ++j) {
      const double dz = g.wall_coord(j) - 0.5 * H;
      const double b =
          amp * std::exp(-(dx * dx + dy2 * dy2) / (2.0 * sx * sx) - dz * dz / (2.0 * sy * sy));
      st.q.at(0, t, j) += b;
      st.q.at(g.dim * g.dim - 1, t, j) -= b;
    }
  }
  filter_nyquist(st.q);
  project_sym_traceless(st.q);
  apply_boundary(st);
  return st;
}

State packet_data(const Grid& g, double k_carrier, double width, double amp) {
  State st(g);
  const double L = g.tan_extent, H = g.wall_extent;
  const double w2 = 2.0 * width * width;

  ScalarField psi = make_scalar(g);
  for (long t = 0; t < g.tan_points(); ++t) {
    const double dx = tan_x(g, t) - 0.5 * L;
    const double dy2 = (g.dim == 3) ? tan_y(g, t) - 0.5 * L : 0.0;
    const double env_t = std::exp(-(dx * dx + dy2 * dy2) / w2);
    const double carrier = std::cos(k_carrier * dx);
    for (int j = 0; j < g.n_wall; ++j) {
      const double dz = g.wall_coord(j) - 0.5 * H;
      psi.at(0, t, j) = amp * env_t * carrier * std::exp(-dz * dz / w2);
    }
  }
  for (long t = 0; t < g.tan_points(); ++t) {
    psi.at(0, t, 0) = 0.0;
    psi.at(0, t, g.n_wall - 1) = 0.0;
    psi.at(0, t, 1) = psi.at(0, t, 2) / 4.0;
    psi.at(0, t, g.n_wall - 2) = psi.at(0, t, g.n_wall - 3) / 4.0;
  }
  filter_nyquist(psi);
  const GridField dw = diff(psi, g.dim - 1, 1);
  const GridField dx1 = diff(psi, 0, 1);
  for (long t = 0; t < g.tan_points(); ++t)
    for (int j = 0; j < g.n_wall; ++j) {
      st.u.at(0, t, j) += dw.at(0, t, j);
      st.u.at(g.dim - 1, t, j) -= dx1.at(0, t, j);
    }
  return st;
}

void scale_to_norm(State& st, double target) {
  const double nu = lebesgue_norm(st.u, 2.0);
  const double nq = lebesgue_norm(st.q, 2.0);
  const double cur = std::sqrt(nu * nu + nq * nq);
  if (cur == 0.0) throw std::invalid_argument("scale_to_norm: zero state");
  st *= target / cur;
}

}  // namespace qthalf
