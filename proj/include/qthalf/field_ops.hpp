#pragma once

#include "qthalf/fields.hpp"
#include "qthalf/wall_ops.hpp"

namespace qthalf {

// Partial derivative along one axis.  Tangential axes (axis < dim-1) are
// spectral with the Nyquist mode annihilated; the wall-normal axis
// (axis == dim-1) uses second-order central differences with one-sided
// second-order stencils at the wall and top.  order is 1 or 2.
GridField diff(const GridField& f, int axis, int order);

// Full gradient: output component d * C + c holds d_d f_c.
GridField grad(const GridField& f);

// s-fold gradient (s >= 0), built by repeated application of grad.
GridField nth_gradient(const GridField& f, int s);

GridField laplacian(const GridField& f);

// div u as a scalar field (u must have dim components).
ScalarField divergence(const VectorField& u);

// L2 size of div u over interior wall rows, the rows the coupled solver
// constrains; wall rows are governed by the no-slip condition instead.
double divergence_residual(const VectorField& u);

// ( integral |f|^q )^(1/q) with trapezoidal weights across the wall direction
// and uniform tangential weights; |f| is the pointwise Euclidean magnitude
// over components.  q >= 1, not necessarily an integer.
double lebesgue_norm(const GridField& f, double q);

// lebesgue_norm of the s-fold gradient.
double sobolev_seminorm(const GridField& f, double q, int s);

// max over points of the Euclidean magnitude.
double sup_norm(const GridField& f);

// Zeroes every tangential mode with any index at the Nyquist frequency.
void filter_nyquist(GridField& f);

// Pointwise projection of a dim*dim field onto symmetric traceless matrices.
void project_sym_traceless(TensorField& q);

// Enforces u = 0 on wall and top rows and dQ/dn = 0 there via the one-sided
// first-derivative stencil (solves the stencil for the boundary value).
void apply_boundary(State& st);

// Largest |d_n Q| over both boundary rows, one-sided stencil.
double wall_normal_derivative_residual(const TensorField& q);

double max_abs_diff(const GridField& a, const GridField& b);

}  // namespace qthalf
