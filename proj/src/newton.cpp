#include "aniso/newton.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "aniso/error.hpp"
#include "grid_internal.hpp"

namespace aniso {

using detail::for_each_face;

SourceTerm SourceTerm::fixed(const GridField& rhs) {
  SourceTerm s;
  // Captured by value: the source must outlive the caller's field.
  auto values = std::make_shared<std::vector<double>>(rhs.values().begin(), rhs.values().end());
  s.value = [values](std::size_t n, double) { return (*values)[n]; };
  s.slope = [](std::size_t, double) { return 0.0; };
  s.integral = [values](std::size_t n, double a, double b) { return (*values)[n] * (b - a); };
  return s;
}

double source_energy(const GridField& u, const ExponentData& e, const SourceTerm& s) {
  double src = 0.0;
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (u.on_boundary(n) || u[n] == 0.0) continue;
    src += u.grid().node_weight(n) * s.integral(n, 0.0, u[n]);
  }
  return gradient_energy(u, e) - src;
}

namespace {

std::vector<std::size_t> interior_nodes(const Grid& g) {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    if (!g.is_boundary(n)) out.push_back(n);
  }
  return out;
}

// plap(u) - s(u) on interior nodes, in `interior` order.
Eigen::VectorXd pde_defect(const GridField& u, const ExponentData& e, const SourceTerm& s,
                           const std::vector<std::size_t>& interior) {
  const GridField lap = p_laplacian_apply(u, e);
  Eigen::VectorXd r(static_cast<Eigen::Index>(interior.size()));
  for (std::size_t k = 0; k < interior.size(); ++k) {
    const std::size_t n = interior[k];
    r[static_cast<Eigen::Index>(k)] = lap[n] - s.value(n, u[n]);
  }
  return r;
}

}  // namespace

double pde_residual(const GridField& u, const ExponentData& e, const SourceTerm& s) {
  const auto interior = interior_nodes(u.grid());
  if (interior.empty()) return 0.0;
  return pde_defect(u, e, s, interior).lpNorm<Eigen::Infinity>();
}

NewtonResult minimize_convex(const ExponentData& e, const SourceTerm& s, GridField initial,
                             const NewtonOptions& opt) {
  const Grid g = initial.grid();
  require(e.N == g.dim(), ErrorKind::InvalidInput, "exponent count differs from grid dimension");
  initial.zero_boundary();

  const auto interior = interior_nodes(g);
  std::vector<long> slot(g.node_count(), -1);
  for (std::size_t k = 0; k < interior.size(); ++k) slot[interior[k]] = static_cast<long>(k);
  const auto m = static_cast<Eigen::Index>(interior.size());
  const double w_in = g.cell_volume();  // weight of every interior node

  NewtonResult res{std::move(initial), 0, 0.0, {}};
  GridField& u = res.u;
  res.energy.push_back(source_energy(u, e, s));
  if (m == 0) return res;

  Eigen::VectorXd defect = pde_defect(u, e, s, interior);
  res.residual = defect.lpNorm<Eigen::Infinity>();

  using SpMat = Eigen::SparseMatrix<double>;
  Eigen::SimplicialLDLT<SpMat> ldlt;
  bool analyzed = false;
  std::vector<Eigen::Triplet<double>> trip;

  while (res.residual > opt.tol) {
    if (res.iterations >= opt.maxIter) {
      throw NonConvergenceError("Newton iteration cap reached", res.residual, res.iterations);
    }

    // Hessian of J divided by the interior node weight.
    std::vector<FaceField> coeff;
    double cmax = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      FaceField d = axis_diff(u, a);
      const double p = e.p[a];
      const double ih2 = 1.0 / (g.h(a) * g.h(a));
      for (auto& v : d.values()) {
        v = p == 2.0 ? ih2 : (p - 1.0) * std::pow(std::abs(v), p - 2.0) * ih2;
        cmax = std::max(cmax, v);
      }
      coeff.push_back(std::move(d));
    }
    const double floor = 1e-8 * cmax;

    trip.clear();
    for (int a = 0; a < g.dim(); ++a) {
      const double lap = 1.0 / (g.h(a) * g.h(a));
      for_each_face(g, a, [&](std::size_t f, std::size_t lo, std::size_t hi, std::size_t) {
        const double c = cmax > 0.0 ? std::max(coeff[a][f], floor) : lap;
        const long il = slot[lo];
        const long ih = slot[hi];
        if (il >= 0) trip.emplace_back(il, il, c);
        if (ih >= 0) trip.emplace_back(ih, ih, c);
        if (il >= 0 && ih >= 0) {
          trip.emplace_back(il, ih, -c);
          trip.emplace_back(ih, il, -c);
        }
      });
    }
    for (std::size_t k = 0; k < interior.size(); ++k) {
      const std::size_t n = interior[k];
      const long kk = static_cast<long>(k);
      trip.emplace_back(kk, kk, -s.slope(n, u[n]));
    }
    SpMat H(m, m);
    H.setFromTriplets(trip.begin(), trip.end());
    if (!analyzed) {
      ldlt.analyzePattern(H);
      analyzed = true;
    }
    ldlt.factorize(H);
    if (ldlt.info() != Eigen::Success) {
      throw NonConvergenceError("Newton system factorization failed", res.residual, res.iterations);
    }
    const Eigen::VectorXd dir = ldlt.solve(-defect);
    const double slope = w_in * defect.dot(dir);
    if (!(slope < 0.0)) {
      throw NonConvergenceError("Newton direction is not a descent direction", res.residual,
                                res.iterations);
    }

    const double e_grad0 = gradient_energy(u, e);
    GridField trial = u;
    double t = 1.0;
    bool accepted = false;
    double best_t = 0.0;
    double best_r = res.residual;
    Eigen::VectorXd best_defect;
    constexpr double kArmijo = 1e-4;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      double src = 0.0;
      for (std::size_t k = 0; k < interior.size(); ++k) {
        const std::size_t n = interior[k];
        trial[n] = u[n] + t * dir[static_cast<Eigen::Index>(k)];
        src += s.integral(n, u[n], trial[n]);
      }
      const double dJ = gradient_energy(trial, e) - e_grad0 - w_in * src;
      Eigen::VectorXd d_trial = pde_defect(trial, e, s, interior);
      const double r_trial = d_trial.lpNorm<Eigen::Infinity>();
      if (std::isfinite(dJ) && dJ <= kArmijo * t * slope) {
        u = trial;
        defect = std::move(d_trial);
        res.residual = r_trial;
        accepted = true;
        break;
      }
      if (std::isfinite(r_trial) && r_trial < best_r) {
        best_r = r_trial;
        best_t = t;
        best_defect = std::move(d_trial);
      }
    }
    if (!accepted) {
      if (best_t == 0.0) {
        throw NonConvergenceError("line search made no progress", res.residual, res.iterations);
      }
      for (std::size_t k = 0; k < interior.size(); ++k) {
        u[interior[k]] += best_t * dir[static_cast<Eigen::Index>(k)];
      }
      defect = std::move(best_defect);
      res.residual = best_r;
    }
    ++res.iterations;
    res.energy.push_back(source_energy(u, e, s));
  }
  return res;
}

}  // namespace aniso
