#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace aniso {

struct ExponentData;

inline constexpr int kMaxDim = 3;

/// Uniform tensor grid on a box in 1 to 3 dimensions. `res` counts cells, so
/// each axis carries res + 1 nodes; nodes are stored row-major with the last
/// axis fastest.
class Grid {
 public:
  Grid(std::span<const double> lo, std::span<const double> hi, std::span<const int> res);
  /// Cube [lo, hi]^dim with `res` cells per axis.
  static Grid cube(int dim, double lo, double hi, int res);

  int dim() const { return dim_; }
  double lo(int a) const { return lo_[a]; }
  double hi(int a) const { return hi_[a]; }
  int res(int a) const { return res_[a]; }
  int nodes(int a) const { return res_[a] + 1; }
  double h(int a) const { return h_[a]; }
  std::size_t node_count() const { return count_; }
  std::size_t stride(int a) const { return stride_[a]; }

  std::size_t index(const std::array<int, kMaxDim>& ijk) const;
  std::array<int, kMaxDim> coords(std::size_t idx) const;
  double coordinate(int a, int i) const { return lo_[a] + h_[a] * i; }
  std::array<double, kMaxDim> position(std::size_t idx) const;

  bool is_boundary(std::size_t idx) const;
  /// Trapezoid weight: prod_a h_a, halved per axis on which the node is extremal.
  double node_weight(std::size_t idx) const;
  double cell_volume() const;

  bool operator==(const Grid& o) const;

 private:
  int dim_;
  std::array<double, kMaxDim> lo_{};
  std::array<double, kMaxDim> hi_{};
  std::array<int, kMaxDim> res_{};
  std::array<double, kMaxDim> h_{};
  std::array<std::size_t, kMaxDim> stride_{};
  std::size_t count_ = 0;
};

/// Node values on a Grid. Boundary flags come from the grid; a field meant as
/// a zero-Dirichlet member carries zeros there (see `zero_boundary`).
class GridField {
 public:
  explicit GridField(Grid grid, double fill = 0.0);
  GridField(Grid grid, std::vector<double> values);

  using PointFn = std::function<double(std::span<const double>)>;
  static GridField from_function(const Grid& grid, const PointFn& f);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  bool on_boundary(std::size_t i) const { return grid_.is_boundary(i); }
  std::vector<bool> boundary_mask() const;
  GridField& zero_boundary();

  double max() const;
  double min() const;
  double max_abs() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Values on the faces normal to one axis: face j sits between node j and
/// node j + e_axis. Extents equal the node extents except along `axis`,
/// where they equal the cell count.
class FaceField {
 public:
  FaceField(Grid grid, int axis, double fill = 0.0);

  const Grid& grid() const { return grid_; }
  int axis() const { return axis_; }
  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Node index of the lower endpoint of face f.
  std::size_t lower_node(std::size_t f) const;
  /// Quadrature weight of face f: h_axis times trapezoid weights transverse.
  double weight(std::size_t f) const;

 private:
  Grid grid_;
  int axis_;
  std::array<int, kMaxDim> extent_{};
  std::vector<double> values_;
};

/// Forward differences (f[j + e_i] - f[j]) / h_i on the faces normal to axis i.
FaceField axis_diff(const GridField& f, int axis);
/// Discrete divergence along one axis with zero padding, the negative adjoint
/// of axis_diff: <axis_diff(f), g> = -<f, axis_div(g)> whenever f vanishes on
/// the boundary.
GridField axis_div(const FaceField& g);

double inner(const GridField& a, const GridField& b);
double inner(const FaceField& a, const FaceField& b);

double integrate(const GridField& f);
double weighted_integrate(const GridField& f, const GridField& w);

struct CutoffSpec {
  double R = 1.0;
  std::array<double, kMaxDim> center{};
};

/// Radial profile of the cutoff: 1 on [0, R], 1 - 3s^2 + 2s^3 with
/// s = (r - R)/R on (R, 2R), 0 beyond.
double cutoff_profile(double r, double R);
double cutoff_profile_derivative(double r, double R);
/// sup_r |psi_R'(r)| R, exactly 3/2 for the smoothstep profile.
inline constexpr double kCutoffGradientConstant = 1.5;

/// Nodal cutoff psi_R. Throws Geometry unless the ball B_2R(center) fits
/// inside the grid box.
GridField make_cutoff(const CutoffSpec& spec, const Grid& g);
/// max over nodes of |grad psi_R| evaluated from the continuum profile.
double cutoff_gradient_sup(const CutoffSpec& spec, const Grid& g);

/// Face flux |D_i u|^{p-2} D_i u along one axis.
FaceField p_flux(const GridField& u, int axis, double p);
/// Discrete anisotropic p-Laplacian -sum_i div(|D_i u|^{p_i-2} D_i u). It is
/// the exact gradient (per unit node volume) of `gradient_energy`; entries on
/// boundary nodes are set to zero. Requires e.N == grid dimension.
GridField p_laplacian_apply(const GridField& u, const ExponentData& e);
/// sum_i (1/p_i) int |D_i u|^{p_i}.
double gradient_energy(const GridField& u, const ExponentData& e);

/// Trapezoid measure of {u > k}.
double level_set_measure(const GridField& u, double k);

}  // namespace aniso
