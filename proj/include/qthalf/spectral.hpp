#pragma once

#include <complex>
#include <vector>

#include "qthalf/fields.hpp"

namespace qthalf {

// Discrete tangential spectrum helpers.  All tangential spectral operators
// annihilate the Nyquist mode so that first and second derivatives compose
// consistently; data are expected to be band-limited below it.

// Signed wavenumber 2*pi*f/L for a mode index in [0, n_tan).
double tan_wavenumber(const Grid& g, int mode_index);
bool tan_is_nyquist(const Grid& g, int mode_index);

// Unflattens a tangential flat index into per-axis mode/grid indices (size dim-1).
void unflatten_tan(const Grid& g, long t, int* idx);

// In-place c2c transform along one tangential axis for a component-major
// complex mirror of a GridField.  sign = -1 forward (unnormalized),
// sign = +1 backward (scaled by 1/n_tan).
void tangential_axis_transform(const Grid& g, std::complex<double>* a, int comps, int axis,
                               int sign);

// Forward/backward along all tangential axes.
void tangential_forward(const Grid& g, std::complex<double>* a, int comps);
void tangential_backward(const Grid& g, std::complex<double>* a, int comps);

std::vector<std::complex<double>> to_modes(const GridField& f);
GridField from_modes(const Grid& g, int comps, std::vector<std::complex<double>> modes);

}  // namespace qthalf
