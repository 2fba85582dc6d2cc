#include "qthalf/tensor_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace qthalf {

namespace {
int checked_dim(int n) {
  if (n != 2 && n != 3) throw std::invalid_argument("tensor dimension must be 2 or 3");
  return n;
}
}  // namespace

MatN::MatN(int n) : n_(checked_dim(n)) {}

MatN MatN::identity(int n) {
  MatN m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

MatN& MatN::operator+=(const MatN& o) {
  for (int i = 0; i < n_ * n_; ++i) a_[i] += o.a_[i];
  return *this;
}

MatN& MatN::operator-=(const MatN& o) {
  for (int i = 0; i < n_ * n_; ++i) a_[i] -= o.a_[i];
  return *this;
}

MatN& MatN::operator*=(double s) {
  for (int i = 0; i < n_ * n_; ++i) a_[i] *= s;
  return *this;
}

MatN MatN::transposed() const {
  MatN m(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

double MatN::trace() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double MatN::frobenius() const {
  double s = 0.0;
  for (int i = 0; i < n_ * n_; ++i) s += a_[i] * a_[i];
  return std::sqrt(s);
}

double MatN::max_abs() const {
  double m = 0.0;
  for (int i = 0; i < n_ * n_; ++i) m = std::max(m, std::fabs(a_[i]));
  return m;
}

MatN operator+(MatN a, const MatN& b) { return a += b; }
MatN operator-(MatN a, const MatN& b) { return a -= b; }
MatN operator*(double s, MatN a) { return a *= s; }

MatN operator*(const MatN& a, const MatN& b) {
  const int n = a.dim();
  MatN r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

double dot_trace(const MatN& a, const MatN& b) {
  const int n = a.dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) s += a(i, k) * b(k, i);
  return s;
}

SymTraceless::SymTraceless(const MatN& any) : m_(any.dim()) {
  const int n = any.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m_(i, j) = 0.5 * (any(i, j) + any(j, i));
  const double t = m_.trace() / n;
  for (int i = 0; i < n; ++i) m_(i, i) -= t;
}

ModelParams::ModelParams(int dim_, double xi_, double a_, double b_, double c_)
    : dim(checked_dim(dim_)), xi(xi_), a(a_), b(b_), c(c_), beta(2.0 * xi_ / dim_) {
  if (!(a > 0.0)) throw std::invalid_argument("bulk coefficient a must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("bulk coefficient c must be positive");
}

std::pair<MatN, MatN> strain_and_vorticity(const MatN& grad_u) {
  const int n = grad_u.dim();
  MatN d(n), w(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      d(i, j) = 0.5 * (grad_u(i, j) + grad_u(j, i));
      w(i, j) = 0.5 * (grad_u(i, j) - grad_u(j, i));
    }
  return {d, w};
}

double bulk_energy(const SymTraceless& q, const ModelParams& prm) {
  const MatN& m = q.matrix();
  const MatN m2 = m * m;
  const double tr2 = m2.trace();
  const double tr3 = dot_trace(m2, m);
  return 0.5 * prm.a * tr2 - prm.b / 3.0 * tr3 + 0.25 * prm.c * tr2 * tr2;
}

SymTraceless bulk_derivative(const SymTraceless& q, const ModelParams& prm) {
  const int n = q.dim();
  const MatN& m = q.matrix();
  MatN m2 = m * m;
  const double tr2 = m2.trace();
  MatN r = prm.b * m2;
  for (int i = 0; i < n; ++i) r(i, i) -= prm.b * tr2 / n;
  r -= (prm.c * tr2) * m;
  return SymTraceless(r);
}

SymTraceless molecular_field(const SymTraceless& q, const SymTraceless& lap_q,
                             const ModelParams& prm) {
  MatN r = lap_q.matrix() - prm.a * q.matrix() + bulk_derivative(q, prm).matrix();
  return SymTraceless(r);
}

MatN coupling_tensor_S(const MatN& grad_u, const SymTraceless& q, const ModelParams& prm) {
  const int n = grad_u.dim();
  auto [d, w] = strain_and_vorticity(grad_u);
  MatN qn = q.matrix();
  for (int i = 0; i < n; ++i) qn(i, i) += 1.0 / n;
  const double qgu = dot_trace(q.matrix(), grad_u);
  MatN s = (prm.xi * d + w) * qn + qn * (prm.xi * d - w);
  s -= (2.0 * prm.xi * qgu) * qn;
  return s;
}

StressPair stress_tensors(const SymTraceless& q, const SymTraceless& h,
                          const std::array<MatN, 3>& grad_q, const ModelParams& prm) {
  const int n = q.dim();
  MatN qn = q.matrix();
  for (int i = 0; i < n; ++i) qn(i, i) += 1.0 / n;
  const double hq = dot_trace(h.matrix(), q.matrix());

  MatN tau = (2.0 * prm.xi * hq) * qn;
  tau -= prm.xi * (h.matrix() * qn + qn * h.matrix());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += grad_q[i](k, l) * grad_q[j](k, l);
      tau(i, j) -= s;
    }

  MatN sigma = q.matrix() * h.matrix() - h.matrix() * q.matrix();
  return {tau, sigma};
}

}  // namespace qthalf
