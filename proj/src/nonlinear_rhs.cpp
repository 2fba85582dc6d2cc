#include "qthalf/nonlinear_rhs.hpp"

#include <array>
#include <stdexcept>

#include "qthalf/field_ops.hpp"
#include "qthalf/linear_core.hpp"

namespace qthalf {

namespace {

void check_pair(const VectorField& u, const TensorField& q) {
  if (!(u.grid() == q.grid()))
    throw std::invalid_argument("nonlinear right sides: u and Q live on different grids");
}

// grad field layout: comp d * C + c = d_d of component c.
MatN grad_u_matrix(const GridField& gu, int dim, long t, int j) {
  MatN m(dim);  // m(i, k) = d_k u_i
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) m(i, k) = gu.at(k * dim + i, t, j);
  return m;
}

MatN grad_q_matrix(const GridField& gq, int dim, int d, long t, int j) {
  MatN m(dim);  // d_d Q
  const int c0 = d * dim * dim;
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) m(i, k) = gq.at(c0 + i * dim + k, t, j);
  return m;
}

MatN convection_q(const VectorField& u, const GridField& gq, int dim, long t, int j) {
  MatN m(dim);
  for (int d = 0; d < dim; ++d) {
    const double ud = u.at(d, t, j);
    const int c0 = d * dim * dim;
    for (int i = 0; i < dim; ++i)
      for (int k = 0; k < dim; ++k) m(i, k) += ud * gq.at(c0 + i * dim + k, t, j);
  }
  return m;
}

VectorField convection_u(const VectorField& u) {
  const Grid& g = u.grid();
  const int dim = g.dim;
  const GridField gu = grad(u);
  VectorField out = make_vector(g);
  for (long t = 0; t < g.tan_points(); ++t)
    for (int j = 0; j < g.n_wall; ++j)
      for (int i = 0; i < dim; ++i) {
        double s = 0.0;
        for (int d = 0; d < dim; ++d) s += u.at(d, t, j) * gu.at(d * dim + i, t, j);
        out.at(i, t, j) = s;
      }
  return out;
}

}  // namespace

TensorField bulk_derivative_field(const TensorField& q, const ModelParams& prm) {
  const Grid& g = q.grid();
  TensorField out = make_tensor(g);
  for (long t = 0; t < g.tan_points(); ++t)
    for (int j = 0; j < g.n_wall; ++j) {
      const SymTraceless qm(tensor_at(q, t, j));
      set_tensor(out, t, j, bulk_derivative(qm, prm).matrix());
    }
  return out;
}

TensorField molecular_field_grid(const TensorField& q, const ModelParams& prm) {
  const Grid& g = q.grid();
  const GridField lap_q = laplacian(q);
  TensorField out = make_tensor(g);
  for (long t = 0; t < g.tan_points(); ++t)
    for (int j = 0; j < g.n_wall; ++j) {
      const SymTraceless qm(tensor_at(q, t, j));
      const SymTraceless lm(matrix_at(lap_q, t, j));
      set_tensor(out, t, j, molecular_field(qm, lm, prm).matrix());
    }
  return out;
}

TensorField assemble_G(const VectorField& u, const TensorField& q, const ModelParams& prm) {
  check_pair(u, q);
  const Grid& g = u.grid();
  const int dim = g.dim;
  const GridField gu = grad(u);
  const GridField gq = grad(q);

  TensorField out = make_tensor(g);
  MatN eye = MatN::identity(dim);
  for (long t = 0; t < g.tan_points(); ++t)
    for (int j = 0; j < g.n_wall; ++j) {
      const MatN gum = grad_u_matrix(gu, dim, t, j);
      const auto [d, w] = strain_and_vorticity(gum);
      const MatN qm = tensor_at(q, t, j);
      const SymTraceless qs(qm);
      MatN qn = qm;
      qn += (1.0 / dim) * eye;
      const double trqgu = dot_trace(qm, gum);

      MatN val = convection_q(u, gq, dim, t, j);
      val *= -1.0;
      val += prm.xi * (d * qm + qm * d);
      val += w * qm - qm * w;
      val -= (2.0 * prm.xi * trqgu) * qn;
      val += bulk_derivative(qs, prm).matrix();
      set_tensor(out, t, j, val);
    }
  return out;
}

TensorField assemble_G_via_coupling(const VectorField& u, const TensorField& q,
                                    const ModelParams& prm) {
  check_pair(u, q);
  const Grid& g = u.grid();
  const int dim = g.dim;
  const GridField gu = grad(u);
  const GridField gq = grad(q);

  TensorField out = make_tensor(g);
  for (long t = 0; t < g.tan_points(); ++t)
    for (int j = 0; j < g.n_wall; ++j) {
      const MatN gum = grad_u_matrix(gu, dim, t, j);
      const auto [d, w] = strain_and_vorticity(gum);
      (void)w;
      const SymTraceless qs(tensor_at(q, t, j));

      MatN val = convection_q(u, gq, dim, t, j);
      val *= -1.0;
      val += coupling_tensor_S(gum, qs, prm);
      val -= prm.beta * d;
      val += bulk_derivative(qs, prm).matrix();
      set_tensor(out, t, j, val);
    }
  return out;
}

VectorField assemble_f(const VectorField& u, const TensorField& q, const ModelParams& prm) {
  check_pair(u, q);
  const Grid& g = u.grid();
  const int dim = g.dim;
  const GridField gq = grad(q);
  const TensorField hf = molecular_field_grid(q, prm);

  TensorField bracket = make_tensor(g);
  MatN eye = MatN::identity(dim);
  for (long t = 0; t < g.tan_points(); ++t)
    for (int j = 0; j < g.n_wall; ++j) {
      const MatN qm = tensor_at(q, t, j);
      const MatN hm = tensor_at(hf, t, j);
      MatN qn = qm;
      qn += (1.0 / dim) * eye;
      const double trhq = dot_trace(hm, qm);

      MatN val = (2.0 * prm.xi * trhq) * qn;
      val -= (prm.xi + 1.0) * (hm * qm);
      val += (1.0 - prm.xi) * (qm * hm);
      for (int i = 0; i < dim; ++i)  // gradQ (.) gradQ
        for (int k = 0; k < dim; ++k) {
          double s = 0.0;
          for (int c = 0; c < dim * dim; ++c)
            s += gq.at(i * dim * dim + c, t, j) * gq.at(k * dim * dim + c, t, j);
          val(i, k) -= s;
        }
      set_tensor(bracket, t, j, val);
    }

  VectorField f = convection_u(u);
  f *= -1.0;
  f += div_tensor(bracket);
  VectorField dfp = div_tensor(bulk_derivative_field(q, prm));
  dfp *= prm.beta;
  f -= dfp;
  return f;
}

VectorField assemble_f_stress_route(const VectorField& u, const TensorField& q,
                                    const ModelParams& prm) {
  check_pair(u, q);
  const Grid& g = u.grid();
  const int dim = g.dim;
  const GridField gq = grad(q);
  const TensorField hf = molecular_field_grid(q, prm);

  TensorField total = make_tensor(g);
  for (long t = 0; t < g.tan_points(); ++t)
    for (int j = 0; j < g.n_wall; ++j) {
      const SymTraceless qs(tensor_at(q, t, j));
      const SymTraceless hs(tensor_at(hf, t, j));
      std::array<MatN, 3> gqm = {MatN(dim), MatN(dim), MatN(dim)};
      for (int d = 0; d < dim; ++d) gqm[d] = grad_q_matrix(gq, dim, d, t, j);
      const StressPair sp = stress_tensors(qs, hs, gqm, prm);
      MatN val = sp.tau;
      val += sp.sigma;
      set_tensor(total, t, j, val);
    }

  VectorField f = convection_u(u);
  f *= -1.0;
  f += div_tensor(total);
  f += prm.beta * div_tensor(laplacian(q) - prm.a * q);
  return f;
}

VectorField assemble_f_expanded(const VectorField& u, const TensorField& q,
                                const ModelParams& prm) {
  check_pair(u, q);
  const Grid& g = u.grid();
  const int dim = g.dim;
  const int nc = dim * dim;

  const TensorField hf = molecular_field_grid(q, prm);
  const GridField gq = grad(q);    // d_d Q
  const GridField gh = grad(hf);   // d_d H
  const GridField ggq = grad(gq);  // d_e d_d Q
  const GridField lap_q = laplacian(q);

  VectorField f = convection_u(u);
  f *= -1.0;
  // The dissipative divergence beta Div(lap Q - a Q) is linear, so there is
  // no product to expand; both stress routes share it.
  f += prm.beta * div_tensor(lap_q - prm.a * q);

  MatN eye = MatN::identity(dim);
  for (long t = 0; t < g.tan_points(); ++t)
    for (int j = 0; j < g.n_wall; ++j) {
      const MatN qm = tensor_at(q, t, j);
      const MatN hm = tensor_at(hf, t, j);
      const MatN lq = matrix_at(lap_q, t, j);
      MatN qn = qm;
      qn += (1.0 / dim) * eye;
      const double trhq = dot_trace(hm, qm);

      std::array<MatN, 3> dq = {MatN(dim), MatN(dim), MatN(dim)};
      std::array<MatN, 3> dh = {MatN(dim), MatN(dim), MatN(dim)};
      for (int d = 0; d < dim; ++d) {
        dq[d] = grad_q_matrix(gq, dim, d, t, j);
        dh[d] = grad_q_matrix(gh, dim, d, t, j);
      }

      for (int i = 0; i < dim; ++i) {
        double acc = 0.0;
        // Div tau, tau = 2 xi tr(HQ)(Q + I/N) - xi [H(Q + I/N) + (Q + I/N)H]
        //              - gradQ (.) gradQ
        for (int d = 0; d < dim; ++d) {
          const double dtr = dot_trace(dh[d], qm) + dot_trace(hm, dq[d]);
          acc += 2.0 * prm.xi * (dtr * qn(i, d) + trhq * dq[d](i, d));
          const MatN sym_d = dh[d] * qn + hm * dq[d] + dq[d] * hm + qn * dh[d];
          acc -= prm.xi * sym_d(i, d);
        }
        // -Div[gradQ (.) gradQ]_i = -sum_d [d_d d_i Q : d_d Q] - d_i Q : lap Q
        for (int d = 0; d < dim; ++d) {
          double s = 0.0;
          for (int c = 0; c < nc; ++c) s += ggq.at(d * dim * nc + i * nc + c, t, j) * gq.at(d * nc + c, t, j);
          acc -= s;
        }
        acc -= dot_trace(dq[i], lq);
        // Div sigma, sigma = QH - HQ
        for (int d = 0; d < dim; ++d) {
          const MatN sig_d = dq[d] * hm + qm * dh[d] - dh[d] * qm - hm * dq[d];
          acc += sig_d(i, d);
        }
        f.at(i, t, j) += acc;
      }
    }
  return f;
}

RhsNorms rhs_norms(const VectorField& f, const TensorField& g) {
  RhsNorms n;
  n.f_l2 = lebesgue_norm(f, 2.0);
  n.f_sup = sup_norm(f);
  n.g_l2 = lebesgue_norm(g, 2.0);
  n.g_sup = sup_norm(g);
  return n;
}

}  // namespace qthalf
