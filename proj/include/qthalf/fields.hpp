#pragma once

#include <vector>

#include "qthalf/tensor_ops.hpp"

namespace qthalf {

// Truncated half-space box: periodic tangential directions (dim - 1 of them,
// n_tan points each over tan_extent), a solid wall at x_dim = 0 and an
// artificial top at x_dim = wall_extent (n_wall points inclusive).
struct Grid {
  int dim;
  int n_tan;
  int n_wall;
  double tan_extent;
  double wall_extent;

  Grid(int dim_, int n_tan_, int n_wall_, double tan_extent_, double wall_extent_);

  int tan_dirs() const { return dim - 1; }
  long tan_points() const;
  long points() const { return tan_points() * n_wall; }
  double tan_spacing() const { return tan_extent / n_tan; }
  double wall_spacing() const { return wall_extent / (n_wall - 1); }
  double tan_coord(int i) const { return i * tan_spacing(); }
  double wall_coord(int j) const { return j * wall_spacing(); }

  bool operator==(const Grid&) const = default;
};

// Real multi-component field sampled on a Grid.  Storage is component-major
// with the wall index fastest: value(c, t, j) at data[(c * tan_points + t) * n_wall + j],
// where t flattens the tangential indices (i1 for dim 2; i1 * n_tan + i2 for dim 3).
class GridField {
 public:
  GridField(const Grid& g, int components);

  const Grid& grid() const { return grid_; }
  int components() const { return comps_; }
  long size() const { return static_cast<long>(v_.size()); }

  double& at(int c, long t, int j) { return v_[(c * tp_ + t) * grid_.n_wall + j]; }
  double at(int c, long t, int j) const { return v_[(c * tp_ + t) * grid_.n_wall + j]; }

  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  GridField& operator+=(const GridField& o);
  GridField& operator-=(const GridField& o);
  GridField& operator*=(double s);

 private:
  Grid grid_;
  int comps_;
  long tp_;
  std::vector<double> v_;
};

GridField operator+(GridField a, const GridField& b);
GridField operator-(GridField a, const GridField& b);
GridField operator*(double s, GridField a);

using ScalarField = GridField;  // 1 component
using VectorField = GridField;  // dim components
using TensorField = GridField;  // dim*dim components, row-major matrix entries

ScalarField make_scalar(const Grid& g);
VectorField make_vector(const Grid& g);
TensorField make_tensor(const Grid& g);

// Velocity + Q-tensor pair on one grid.
struct State {
  VectorField u;
  TensorField q;

  explicit State(const Grid& g) : u(make_vector(g)), q(make_tensor(g)) {}
  State& operator+=(const State& o);
  State& operator-=(const State& o);
  State& operator*=(double s);
};

State operator-(State a, const State& b);

MatN tensor_at(const TensorField& q, long t, int j);
void set_tensor(TensorField& q, long t, int j, const MatN& m);
MatN matrix_at(const GridField& f, long t, int j);  // any dim*dim field

}  // namespace qthalf
