#pragma once

#include "qthalf/fields.hpp"
#include "qthalf/tensor_ops.hpp"

namespace qthalf {

// Pointwise bulk potential derivative F'(Q) as a matrix field.
TensorField bulk_derivative_field(const TensorField& q, const ModelParams& prm);

// Molecular field H = lap Q - a Q + F'(Q) on the grid.
TensorField molecular_field_grid(const TensorField& q, const ModelParams& prm);

// Q-equation right side
//   G = -(u.grad)Q + xi(DQ + QD) + WQ - QW - 2 xi (Q + I/N) tr(Q grad u) + F'(Q),
// assembled directly from strain/vorticity products.
TensorField assemble_G(const VectorField& u, const TensorField& q, const ModelParams& prm);

// Same G through the coupling tensor route, G = -(u.grad)Q + S(grad u, Q)
// - beta D(u) + F'(Q); algebraically identical, differs only in rounding.
TensorField assemble_G_via_coupling(const VectorField& u, const TensorField& q,
                                    const ModelParams& prm);

// Momentum right side, conservative route: the stress bracket
//   T = 2 xi tr(HQ)(Q + I/N) - (xi + 1) HQ + (1 - xi) QH - gradQ (.) gradQ
// is assembled pointwise and then f = -(u.grad)u + Div T - beta Div F'(Q).
VectorField assemble_f(const VectorField& u, const TensorField& q, const ModelParams& prm);

// Conservative route through the named stresses:
//   f = -(u.grad)u + Div(tau + sigma) + beta Div(lap Q - a Q).
// Since the bracket equals tau + sigma + beta H pointwise and
// H = lap Q - a Q + F'(Q), this differs from assemble_f only in rounding.
VectorField assemble_f_stress_route(const VectorField& u, const TensorField& q,
                                    const ModelParams& prm);

// Product-rule route for the same stress grouping: Div tau and Div sigma are
// expanded analytically into pointwise products of first/second derivative
// fields (the linear dissipative divergence is shared).  Agrees with the
// conservative routes only up to the discrete Leibniz defect, which is O(h^2)
// away from the walls; the pair feeds the convergence-order check.
VectorField assemble_f_expanded(const VectorField& u, const TensorField& q,
                                const ModelParams& prm);

struct RhsNorms {
  double f_l2 = 0.0;
  double f_sup = 0.0;
  double g_l2 = 0.0;
  double g_sup = 0.0;
};

RhsNorms rhs_norms(const VectorField& f, const TensorField& g);

}  // namespace qthalf
