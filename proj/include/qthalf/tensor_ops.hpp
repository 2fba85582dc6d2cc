#pragma once

#include <array>
#include <utility>

namespace qthalf {

// Small dense n x n matrix, n = 2 or 3, for pointwise tensor algebra.
class MatN {
 public:
  explicit MatN(int n);
  static MatN identity(int n);

  int dim() const { return n_; }
  double& operator()(int i, int j) { return a_[i * n_ + j]; }
  double operator()(int i, int j) const { return a_[i * n_ + j]; }

  MatN& operator+=(const MatN& o);
  MatN& operator-=(const MatN& o);
  MatN& operator*=(double s);

  MatN transposed() const;
  double trace() const;
  double frobenius() const;
  double max_abs() const;

 private:
  int n_;
  std::array<double, 9> a_{};
};

MatN operator+(MatN a, const MatN& b);
MatN operator-(MatN a, const MatN& b);
MatN operator*(double s, MatN a);
MatN operator*(const MatN& a, const MatN& b);

// tr(A B)
double dot_trace(const MatN& a, const MatN& b);

// Symmetric traceless wrapper: construction projects onto the class.
class SymTraceless {
 public:
  explicit SymTraceless(int n) : m_(n) {}
  explicit SymTraceless(const MatN& any);

  int dim() const { return m_.dim(); }
  const MatN& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  MatN m_;
};

struct ModelParams {
  int dim;         // spatial dimension, 2 or 3
  double xi;       // shape parameter
  double a, b, c;  // bulk potential coefficients, a > 0, c > 0
  double beta;     // 2 xi / dim

  ModelParams(int dim_, double xi_, double a_, double b_, double c_);
};

// Splits a velocity gradient (grad u)_{ij} = d_j u_i into strain D and vorticity W.
std::pair<MatN, MatN> strain_and_vorticity(const MatN& grad_u);

// F(Q) = a/2 tr Q^2 - b/3 tr Q^3 + c/4 (tr Q^2)^2
double bulk_energy(const SymTraceless& q, const ModelParams& prm);

// F'(Q) = b (Q^2 - tr(Q^2) I / n) - c tr(Q^2) Q
SymTraceless bulk_derivative(const SymTraceless& q, const ModelParams& prm);

// H = lap Q - a Q + F'(Q), with the Laplacian supplied by the caller
SymTraceless molecular_field(const SymTraceless& q, const SymTraceless& lap_q,
                             const ModelParams& prm);

// S = (xi D + W)(Q + I/n) + (Q + I/n)(xi D - W) - 2 xi (Q + I/n) tr(Q grad_u)
MatN coupling_tensor_S(const MatN& grad_u, const SymTraceless& q, const ModelParams& prm);

struct StressPair {
  MatN tau;    // symmetric part of the distortion stress
  MatN sigma;  // antisymmetric part, Q H - H Q
};

// tau   = 2 xi tr(H Q)(Q + I/n) - xi [H (Q + I/n) + (Q + I/n) H] - gradQ (.) gradQ
// sigma = Q H - H Q
// grad_q[m] holds d_m Q; (gradQ (.) gradQ)_{ij} = sum_{k,l} d_i Q_{kl} d_j Q_{kl}.
StressPair stress_tensors(const SymTraceless& q, const SymTraceless& h,
                          const std::array<MatN, 3>& grad_q, const ModelParams& prm);

}  // namespace qthalf
