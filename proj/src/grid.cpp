#include "aniso/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aniso/error.hpp"
#include "aniso/exponents.hpp"
#include "grid_internal.hpp"

namespace aniso {

using detail::for_each_face;

namespace {

void require_same_grid(const Grid& a, const Grid& b) {
  require(a == b, ErrorKind::InvalidInput, "fields live on different grids");
}

}  // namespace

Grid::Grid(std::span<const double> lo, std::span<const double> hi, std::span<const int> res) {
  dim_ = static_cast<int>(lo.size());
  require(dim_ >= 1 && dim_ <= kMaxDim, ErrorKind::InvalidInput, "grid dimension must be 1, 2 or 3");
  require(hi.size() == lo.size() && res.size() == lo.size(), ErrorKind::InvalidInput,
          "grid lo/hi/res sizes differ");
  for (int a = 0; a < dim_; ++a) {
    require(res[a] >= 2, ErrorKind::InvalidInput, "each axis needs at least 2 cells");
    require(hi[a] > lo[a], ErrorKind::InvalidInput, "grid box must have hi > lo");
    lo_[a] = lo[a];
    hi_[a] = hi[a];
    res_[a] = res[a];
    h_[a] = (hi[a] - lo[a]) / res[a];
  }
  std::size_t s = 1;
  for (int a = dim_ - 1; a >= 0; --a) {
    stride_[a] = s;
    s *= static_cast<std::size_t>(res_[a] + 1);
  }
  count_ = s;
}

Grid Grid::cube(int dim, double lo, double hi, int res) {
  require(dim >= 1 && dim <= kMaxDim, ErrorKind::InvalidInput, "grid dimension must be 1, 2 or 3");
  std::vector<double> l(dim, lo), h(dim, hi);
  std::vector<int> r(dim, res);
  return Grid(l, h, r);
}

std::size_t Grid::index(const std::array<int, kMaxDim>& ijk) const {
  std::size_t idx = 0;
  for (int a = 0; a < dim_; ++a) idx += static_cast<std::size_t>(ijk[a]) * stride_[a];
  return idx;
}

std::array<int, kMaxDim> Grid::coords(std::size_t idx) const {
  std::array<int, kMaxDim> c{};
  for (int a = 0; a < dim_; ++a) {
    c[a] = static_cast<int>(idx / stride_[a]);
    idx %= stride_[a];
  }
  return c;
}

std::array<double, kMaxDim> Grid::position(std::size_t idx) const {
  const auto c = coords(idx);
  std::array<double, kMaxDim> x{};
  for (int a = 0; a < dim_; ++a) x[a] = coordinate(a, c[a]);
  return x;
}

bool Grid::is_boundary(std::size_t idx) const {
  const auto c = coords(idx);
  for (int a = 0; a < dim_; ++a) {
    if (c[a] == 0 || c[a] == res_[a]) return true;
  }
  return false;
}

double Grid::node_weight(std::size_t idx) const {
  const auto c = coords(idx);
  double w = 1.0;
  for (int a = 0; a < dim_; ++a) {
    w *= (c[a] == 0 || c[a] == res_[a]) ? 0.5 * h_[a] : h_[a];
  }
  return w;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= h_[a];
  return v;
}

bool Grid::operator==(const Grid& o) const {
  if (dim_ != o.dim_) return false;
  for (int a = 0; a < dim_; ++a) {
    if (lo_[a] != o.lo_[a] || hi_[a] != o.hi_[a] || res_[a] != o.res_[a]) return false;
  }
  return true;
}

GridField::GridField(Grid grid, double fill)
    : grid_(std::move(grid)), values_(grid_.node_count(), fill) {}

GridField::GridField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  require(values_.size() == grid_.node_count(), ErrorKind::InvalidInput,
          "value count does not match the grid");
}

GridField GridField::from_function(const Grid& grid, const PointFn& f) {
  GridField out(grid);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto x = grid.position(i);
    out[i] = f(std::span<const double>(x.data(), static_cast<std::size_t>(grid.dim())));
  }
  return out;
}

std::vector<bool> GridField::boundary_mask() const {
  std::vector<bool> m(size());
  for (std::size_t i = 0; i < size(); ++i) m[i] = grid_.is_boundary(i);
  return m;
}

GridField& GridField::zero_boundary() {
  for (std::size_t i = 0; i < size(); ++i) {
    if (grid_.is_boundary(i)) values_[i] = 0.0;
  }
  return *this;
}

double GridField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double GridField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

FaceField::FaceField(Grid grid, int axis, double fill) : grid_(std::move(grid)), axis_(axis) {
  require(axis >= 0 && axis < grid_.dim(), ErrorKind::InvalidInput, "axis out of range");
  std::size_t n = 1;
  for (int a = 0; a < grid_.dim(); ++a) {
    extent_[a] = a == axis ? grid_.res(a) : grid_.nodes(a);
    n *= static_cast<std::size_t>(extent_[a]);
  }
  values_.assign(n, fill);
}

std::size_t FaceField::lower_node(std::size_t f) const {
  std::size_t node = 0;
  std::size_t rem = f;
  std::size_t fstride = values_.size();
  for (int a = 0; a < grid_.dim(); ++a) {
    fstride /= static_cast<std::size_t>(extent_[a]);
    const std::size_t c = rem / fstride;
    rem %= fstride;
    node += c * grid_.stride(a);
  }
  return node;
}

double FaceField::weight(std::size_t f) const {
  const std::size_t n = lower_node(f);
  const int i = grid_.coords(n)[axis_];
  // node_weight halves h_axis at i == 0; a face always spans a full cell.
  return grid_.node_weight(n) * (i == 0 ? 2.0 : 1.0);
}

FaceField axis_diff(const GridField& f, int axis) {
  FaceField out(f.grid(), axis);
  const double inv_h = 1.0 / f.grid().h(axis);
  for_each_face(f.grid(), axis, [&](std::size_t face, std::size_t lo, std::size_t hi, std::size_t) {
    out[face] = (f[hi] - f[lo]) * inv_h;
  });
  return out;
}

GridField axis_div(const FaceField& g) {
  GridField out(g.grid());
  const double inv_h = 1.0 / g.grid().h(g.axis());
  for_each_face(g.grid(), g.axis(), [&](std::size_t face, std::size_t lo, std::size_t hi, std::size_t) {
    out[lo] += g[face] * inv_h;
    out[hi] -= g[face] * inv_h;
  });
  return out;
}

double inner(const GridField& a, const GridField& b) {
  require_same_grid(a.grid(), b.grid());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.grid().node_weight(i) * a[i] * b[i];
  return s;
}

double inner(const FaceField& a, const FaceField& b) {
  require_same_grid(a.grid(), b.grid());
  require(a.axis() == b.axis(), ErrorKind::InvalidInput, "face fields on different axes");
  double s = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) s += a.weight(f) * a[f] * b[f];
  return s;
}

double integrate(const GridField& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f.grid().node_weight(i) * f[i];
  return s;
}

double weighted_integrate(const GridField& f, const GridField& w) { return inner(f, w); }

double cutoff_profile(double r, double R) {
  if (r <= R) return 1.0;
  if (r >= 2.0 * R) return 0.0;
  const double s = (r - R) / R;
  return 1.0 - 3.0 * s * s + 2.0 * s * s * s;
}

double cutoff_profile_derivative(double r, double R) {
  if (r <= R || r >= 2.0 * R) return 0.0;
  const double s = (r - R) / R;
  return -6.0 * s * (1.0 - s) / R;
}

namespace {

void require_cutoff_fits(const CutoffSpec& spec, const Grid& g) {
  require(spec.R > 0.0, ErrorKind::InvalidInput, "cutoff radius must be positive");
  for (int a = 0; a < g.dim(); ++a) {
    const double slack = 1e-12 * (g.hi(a) - g.lo(a));
    if (spec.center[a] - 2.0 * spec.R < g.lo(a) - slack ||
        spec.center[a] + 2.0 * spec.R > g.hi(a) + slack) {
      std::ostringstream os;
      os << "ball of radius 2R = " << 2.0 * spec.R << " leaves the grid box along axis " << a;
      throw Error(ErrorKind::Geometry, os.str());
    }
  }
}

double radius(const std::array<double, kMaxDim>& x, const std::array<double, kMaxDim>& c, int dim) {
  double r2 = 0.0;
  for (int a = 0; a < dim; ++a) r2 += (x[a] - c[a]) * (x[a] - c[a]);
  return std::sqrt(r2);
}

}  // namespace

GridField make_cutoff(const CutoffSpec& spec, const Grid& g) {
  require_cutoff_fits(spec, g);
  GridField out(g);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = cutoff_profile(radius(g.position(i), spec.center, g.dim()), spec.R);
  }
  return out;
}

double cutoff_gradient_sup(const CutoffSpec& spec, const Grid& g) {
  require_cutoff_fits(spec, g);
  double m = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    m = std::max(m, std::abs(cutoff_profile_derivative(radius(g.position(i), spec.center, g.dim()),
                                                       spec.R)));
  }
  return m;
}

FaceField p_flux(const GridField& u, int axis, double p) {
  FaceField d = axis_diff(u, axis);
  if (p != 2.0) {
    for (auto& v : d.values()) v = std::pow(std::abs(v), p - 2.0) * v;
  }
  return d;
}

GridField p_laplacian_apply(const GridField& u, const ExponentData& e) {
  const Grid& g = u.grid();
  require(e.N == g.dim(), ErrorKind::InvalidInput, "exponent count differs from grid dimension");
  GridField out(g);
  for (int a = 0; a < g.dim(); ++a) {
    const FaceField flux = p_flux(u, a, e.p[a]);
    const double inv_h = 1.0 / g.h(a);
    for_each_face(g, a, [&](std::size_t f, std::size_t lo, std::size_t hi, std::size_t) {
      out[lo] -= flux[f] * inv_h;
      out[hi] += flux[f] * inv_h;
    });
  }
  return out.zero_boundary();
}

double gradient_energy(const GridField& u, const ExponentData& e) {
  const Grid& g = u.grid();
  require(e.N == g.dim(), ErrorKind::InvalidInput, "exponent count differs from grid dimension");
  double total = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const double p = e.p[a];
    const FaceField d = axis_diff(u, a);
    double s = 0.0;
    for (std::size_t f = 0; f < d.size(); ++f) {
      if (d[f] != 0.0) s += d.weight(f) * std::pow(std::abs(d[f]), p);
    }
    total += s / p;
  }
  return total;
}

double level_set_measure(const GridField& u, double k) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] > k) m += u.grid().node_weight(i);
  }
  return m;
}

}  // namespace aniso
