#include "qthalf/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <numbers>
#include <stdexcept>

namespace qthalf {

namespace {

// One cached in-place 1-D plan pair per transform length.
struct PlanPair {
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  int n = 0;

  explicit PlanPair(int n_) : n(n_) {
    buf = fftw_alloc_complex(static_cast<size_t>(n));
    fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  PlanPair(const PlanPair&) = delete;
  ~PlanPair() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(buf);
  }
};

PlanPair& plans_for(int n) {
  static std::map<int, PlanPair> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.try_emplace(n, n).first;
  return it->second;
}

}  // namespace

double tan_wavenumber(const Grid& g, int mode_index) {
  const int n = g.n_tan;
  const int f = (mode_index <= n / 2) ? mode_index : mode_index - n;
  return 2.0 * std::numbers::pi * f / g.tan_extent;
}

bool tan_is_nyquist(const Grid& g, int mode_index) { return mode_index == g.n_tan / 2; }

void unflatten_tan(const Grid& g, long t, int* idx) {
  if (g.dim == 2) {
    idx[0] = static_cast<int>(t);
  } else {
    idx[0] = static_cast<int>(t / g.n_tan);
    idx[1] = static_cast<int>(t % g.n_tan);
  }
}

void tangential_axis_transform(const Grid& g, std::complex<double>* a, int comps, int axis,
                               int sign) {
  const int nt = g.n_tan;
  const int nw = g.n_wall;
  const long tp = g.tan_points();
  PlanPair& pp = plans_for(nt);
  auto* buf = reinterpret_cast<std::complex<double>*>(pp.buf);
  const double scale = (sign > 0) ? 1.0 / nt : 1.0;

  // Lines along `axis` have memory stride nw * (line index stride in t).
  const long axis_stride = (g.dim == 2 || axis == 1) ? nw : static_cast<long>(nt) * nw;
  const long outer = comps * tp * static_cast<long>(nw) / nt;  // number of lines

  for (long line = 0; line < outer; ++line) {
    // Decompose the line number into a base offset skipping the axis direction.
    long rem = line;
    const int j = static_cast<int>(rem % nw);
    rem /= nw;
    long base;
    if (g.dim == 2) {
      base = (rem * nt) * nw + j;  // rem = component index
    } else if (axis == 0) {
      const int i2 = static_cast<int>(rem % nt);
      const long c = rem / nt;
      base = ((c * nt) * nt + i2) * static_cast<long>(nw) + j;
    } else {
      const long ci1 = rem;  // c * nt + i1
      base = (ci1 * nt) * static_cast<long>(nw) + j;
    }
    for (int m = 0; m < nt; ++m) buf[m] = a[base + m * axis_stride];
    fftw_execute(sign < 0 ? pp.fwd : pp.bwd);
    for (int m = 0; m < nt; ++m) a[base + m * axis_stride] = buf[m] * scale;
  }
}

void tangential_forward(const Grid& g, std::complex<double>* a, int comps) {
  for (int ax = 0; ax < g.tan_dirs(); ++ax) tangential_axis_transform(g, a, comps, ax, -1);
}

void tangential_backward(const Grid& g, std::complex<double>* a, int comps) {
  for (int ax = 0; ax < g.tan_dirs(); ++ax) tangential_axis_transform(g, a, comps, ax, +1);
}

std::vector<std::complex<double>> to_modes(const GridField& f) {
  std::vector<std::complex<double>> a(f.data().begin(), f.data().end());
  tangential_forward(f.grid(), a.data(), f.components());
  return a;
}

GridField from_modes(const Grid& g, int comps, std::vector<std::complex<double>> modes) {
  tangential_backward(g, modes.data(), comps);
  GridField f(g, comps);
  for (size_t i = 0; i < modes.size(); ++i) f.data()[i] = modes[i].real();
  return f;
}

}  // namespace qthalf
