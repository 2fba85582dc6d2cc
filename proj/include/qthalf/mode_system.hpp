#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "qthalf/fields.hpp"
#include "qthalf/tensor_ops.hpp"

namespace qthalf {

// Independent-component basis for symmetric traceless matrices:
//   dim 2: (q0, q1) with Q = [[q0, q1], [q1, -q0]]
//   dim 3: (q0..q4) = (Q00, Q11, Q01, Q02, Q12), Q22 = -q0 - q1.
struct QBasis {
  int dim = 0;
  int nq = 0;
  std::pair<int, int> rep[5];                          // representative entry per component
  std::vector<std::pair<int, double>> expansion[3][3]; // entry (i,j) as sum of components
};

const QBasis& qbasis(int dim);

// Extracts the nq representative entries of a tensor field / rebuilds the full
// tensor from them.
GridField rep_components(const TensorField& q);
TensorField expand_rep_components(const GridField& reps);

// Direct solver for the coupled shifted system at fixed lambda on one grid:
//   lambda u - lap u + grad p + beta Div(lap Q - a Q) = f,  div u = 0
//   lambda Q - beta D(u) - lap Q + a Q = G
// with u = 0 and dQ/dn = 0 on wall and top, pressure gauge p = 0 on the wall
// and dp/dn = 0 at the top.  Tangential directions are diagonalized by FFT;
// each tangential mode yields a banded complex system over the wall line
// (unknowns u, independent Q components, p interleaved per point), factored
// once with LAPACK zgbtrf and reused across solves.  Nyquist modes are
// annihilated, matching the band-limited convention of the field operators.
class ShiftedSolver {
 public:
  ShiftedSolver(const Grid& g, const ModelParams& prm, std::complex<double> lambda);

  const Grid& grid() const { return grid_; }
  const ModelParams& params() const { return prm_; }
  std::complex<double> lambda() const { return lambda_; }

  // Mode-space solve.  Layouts: f [i][t][j] (dim comps), gq [c][t][j] (nq rep
  // comps), outputs likewise, p [t][j].  If residual != nullptr the banded
  // matrices are re-assembled and |Ax - b|_2 / |b|_2 (aggregated over modes)
  // is written there.
  void solve_modes(const std::vector<std::complex<double>>& f,
                   const std::vector<std::complex<double>>& gq,
                   std::vector<std::complex<double>>& u, std::vector<std::complex<double>>& q,
                   std::vector<std::complex<double>>& p, double* residual = nullptr) const;

 private:
  struct ModeFactor {
    bool skip = false;  // Nyquist mode, solution forced to zero
    std::vector<std::complex<double>> ab;
    std::vector<int> ipiv;
  };

  void wavenumbers(long t, double* k) const;

  Grid grid_;
  ModelParams prm_;
  std::complex<double> lambda_;
  int block_;  // unknowns per wall point: dim + nq + 1
  int kl_, ku_, ldab_, nsys_;
  std::vector<ModeFactor> factors_;
};

// Grid-level solution bundle of the shifted system.
struct ResolventSolution {
  VectorField u;
  TensorField q;
  ScalarField p;
  double residual = 0.0;  // relative algebraic residual of the banded solves

  explicit ResolventSolution(const Grid& g) : u(make_vector(g)), q(make_tensor(g)), p(make_scalar(g)) {}
};

// One grid-level solve (transform, per-mode solve, inverse transform).
ResolventSolution solve_shifted(const ShiftedSolver& solver, const VectorField& f,
                                const TensorField& g, bool with_residual = true);

}  // namespace qthalf
