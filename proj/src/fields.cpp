#include "qthalf/fields.hpp"

#include <stdexcept>
#include <string>

namespace qthalf {

namespace {
bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }
}  // namespace

Grid::Grid(int dim_, int n_tan_, int n_wall_, double tan_extent_, double wall_extent_)
    : dim(dim_), n_tan(n_tan_), n_wall(n_wall_), tan_extent(tan_extent_),
      wall_extent(wall_extent_) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("grid dimension must be 2 or 3");
  if (!power_of_two(n_tan) || n_tan < 4)
    throw std::invalid_argument("n_tan must be a power of two >= 4, got " + std::to_string(n_tan));
  if (n_wall < 8)
    throw std::invalid_argument("n_wall must be >= 8, got " + std::to_string(n_wall));
  if (!(tan_extent > 0.0) || !(wall_extent > 0.0))
    throw std::invalid_argument("grid extents must be positive");
}

long Grid::tan_points() const {
  long p = 1;
  for (int d = 0; d < tan_dirs(); ++d) p *= n_tan;
  return p;
}

GridField::GridField(const Grid& g, int components)
    : grid_(g), comps_(components), tp_(g.tan_points()),
      v_(static_cast<size_t>(components) * g.points(), 0.0) {
  if (components < 1) throw std::invalid_argument("field needs at least one component");
}

GridField& GridField::operator+=(const GridField& o) {
  for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

GridField& GridField::operator-=(const GridField& o) {
  for (size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

GridField& GridField::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

GridField operator+(GridField a, const GridField& b) { return a += b; }
GridField operator-(GridField a, const GridField& b) { return a -= b; }
GridField operator*(double s, GridField a) { return a *= s; }

ScalarField make_scalar(const Grid& g) { return GridField(g, 1); }
VectorField make_vector(const Grid& g) { return GridField(g, g.dim); }
TensorField make_tensor(const Grid& g) { return GridField(g, g.dim * g.dim); }

State& State::operator+=(const State& o) {
  u += o.u;
  q += o.q;
  return *this;
}

State& State::operator-=(const State& o) {
  u -= o.u;
  q -= o.q;
  return *this;
}

State& State::operator*=(double s) {
  u *= s;
  q *= s;
  return *this;
}

State operator-(State a, const State& b) { return a -= b; }

MatN tensor_at(const TensorField& q, long t, int j) { return matrix_at(q, t, j); }

MatN matrix_at(const GridField& f, long t, int j) {
  const int n = f.grid().dim;
  MatN m(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) m(i, k) = f.at(i * n + k, t, j);
  return m;
}

void set_tensor(TensorField& q, long t, int j, const MatN& m) {
  const int n = q.grid().dim;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) q.at(i * n + k, t, j) = m(i, k);
}

}  // namespace qthalf
