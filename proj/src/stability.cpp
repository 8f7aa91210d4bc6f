#include "aniso/stability.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "aniso/error.hpp"
#include "grid_internal.hpp"

namespace aniso {

using detail::for_each_face;

namespace {

void require_positive(double u) {
  if (!(u > 0.0)) {
    std::ostringstream os;
    os << "nonlinearity evaluated at u = " << u << " <= 0";
    throw Error(ErrorKind::Singularity, os.str());
  }
}

void require_zero_boundary(const GridField& phi, const char* what) {
  for (std::size_t n = 0; n < phi.size(); ++n) {
    if (phi.on_boundary(n) && phi[n] != 0.0) {
      throw Error(ErrorKind::InvalidInput, std::string(what) + " must vanish on the grid boundary");
    }
  }
}

void require_dim(const Grid& g, const ExponentData& e) {
  require(e.N == g.dim(), ErrorKind::InvalidInput, "exponent count differs from grid dimension");
}

// log(sum exp(x_i)) accumulated one term at a time.
struct LogSum {
  double m = -std::numeric_limits<double>::infinity();
  double s = 0.0;
  void add(double x) {
    if (x == -std::numeric_limits<double>::infinity()) return;
    if (x <= m) {
      s += std::exp(x - m);
    } else {
      s = s * std::exp(m - x) + 1.0;
      m = x;
    }
  }
  double value() const { return s > 0.0 ? m + std::log(s) : -std::numeric_limits<double>::infinity(); }
};

}  // namespace

double NonlinearityEval::f(double u) const {
  require_positive(u);
  if (const auto* mp = std::get_if<MixedPower>(&kind)) {
    return -std::pow(u, -mp->delta) - std::pow(u, -mp->gamma);
  }
  return -std::exp(1.0 / u);
}

double NonlinearityEval::fprime(double u) const {
  require_positive(u);
  if (const auto* mp = std::get_if<MixedPower>(&kind)) {
    return mp->delta * std::pow(u, -mp->delta - 1.0) + mp->gamma * std::pow(u, -mp->gamma - 1.0);
  }
  return std::exp(1.0 / u) / (u * u);
}

std::string_view to_string(StabilityVariant v) {
  return v == StabilityVariant::AsWritten ? "AsWritten" : "WeightedByG";
}

double weak_residual(const GridField& u, const GridField& phi, const NonlinearityEval& nl,
                     const GridField& g, const ExponentData& e) {
  require_dim(u.grid(), e);
  require(u.grid() == phi.grid() && u.grid() == g.grid(), ErrorKind::InvalidInput,
          "fields live on different grids");
  require_zero_boundary(phi, "test function");
  double lhs = 0.0;
  for (int a = 0; a < u.grid().dim(); ++a) lhs += inner(p_flux(u, a, e.p[a]), axis_diff(phi, a));
  double rhs = 0.0;
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (phi[n] == 0.0) continue;
    rhs += u.grid().node_weight(n) * g[n] * nl.f(u[n]) * phi[n];
  }
  return lhs - rhs;
}

namespace {

std::vector<FaceField> kinetic_weights(const GridField& u, const ExponentData& e) {
  require_dim(u.grid(), e);
  std::vector<FaceField> w;
  for (int a = 0; a < u.grid().dim(); ++a) {
    FaceField d = axis_diff(u, a);
    const double p = e.p[a];
    for (auto& v : d.values()) v = p == 2.0 ? 1.0 : (p - 1.0) * std::pow(std::abs(v), p - 2.0);
    w.push_back(std::move(d));
  }
  return w;
}

}  // namespace

StabilityForms StabilityForms::from_solution(const GridField& u, const NonlinearityEval& nl,
                                             const GridField& g, const ExponentData& e,
                                             StabilityVariant variant) {
  require(u.grid() == g.grid(), ErrorKind::InvalidInput, "fields live on different grids");
  GridField v(u.grid());
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (u.on_boundary(n)) continue;  // test functions vanish there
    const double W = variant == StabilityVariant::WeightedByG ? g[n] : 1.0;
    v[n] = W == 0.0 ? 0.0 : W * nl.fprime(u[n]);
  }
  return StabilityForms(kinetic_weights(u, e), std::move(v));
}

StabilityForms StabilityForms::from_potential(const GridField& u, const ExponentData& e,
                                              GridField potential) {
  require(u.grid() == potential.grid(), ErrorKind::InvalidInput, "fields live on different grids");
  return StabilityForms(kinetic_weights(u, e), std::move(potential));
}

double StabilityForms::kinetic(const GridField& phi) const {
  require(phi.grid() == grid(), ErrorKind::InvalidInput, "test function on another grid");
  double s = 0.0;
  for (int a = 0; a < grid().dim(); ++a) {
    const FaceField d = axis_diff(phi, a);
    const FaceField& w = weights_[a];
    for (std::size_t f = 0; f < d.size(); ++f) s += d.weight(f) * w[f] * d[f] * d[f];
  }
  return s;
}

double StabilityForms::potential_form(const GridField& phi) const {
  require(phi.grid() == grid(), ErrorKind::InvalidInput, "test function on another grid");
  double s = 0.0;
  for (std::size_t n = 0; n < phi.size(); ++n) {
    if (phi[n] != 0.0) s += grid().node_weight(n) * potential_[n] * phi[n] * phi[n];
  }
  return s;
}

double stability_gap(const GridField& u, const GridField& phi, const NonlinearityEval& nl,
                     const GridField& g, const ExponentData& e, StabilityVariant variant) {
  require_zero_boundary(phi, "test function");
  // Only nodes carrying phi need u > 0; outside that set f'(u) is never used.
  GridField v(u.grid());
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (phi[n] == 0.0) continue;
    const double W = variant == StabilityVariant::WeightedByG ? g[n] : 1.0;
    v[n] = W == 0.0 ? 0.0 : W * nl.fprime(u[n]);
  }
  return StabilityForms::from_potential(u, e, std::move(v)).gap(phi);
}

namespace {

struct Pencil {
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd V;  // diagonal of the potential form
  std::vector<std::size_t> nodes;
};

Pencil assemble(const StabilityForms& forms) {
  const Grid& g = forms.grid();
  Pencil P;
  std::vector<long> slot(g.node_count(), -1);
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    if (!g.is_boundary(n)) {
      slot[n] = static_cast<long>(P.nodes.size());
      P.nodes.push_back(n);
    }
  }
  const auto m = static_cast<Eigen::Index>(P.nodes.size());
  std::vector<Eigen::Triplet<double>> trip;
  for (int a = 0; a < g.dim(); ++a) {
    const FaceField& w = forms.face_weights()[a];
    const double ih2 = 1.0 / (g.h(a) * g.h(a));
    const double wn = g.cell_volume();
    for_each_face(g, a, [&](std::size_t f, std::size_t lo, std::size_t hi, std::size_t) {
      const double c = wn * w[f] * ih2;
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
  P.K.resize(m, m);
  P.K.setFromTriplets(trip.begin(), trip.end());
  P.V.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const std::size_t n = P.nodes[static_cast<std::size_t>(k)];
    P.V[k] = g.node_weight(n) * forms.potential()[n];
  }
  return P;
}

}  // namespace

StabilityReport stability_index(const StabilityForms& forms, const StabilityOptions& opt) {
  const Pencil P = assemble(forms);
  StabilityReport rep;
  rep.minimizer = "eigenvector";
  const auto m = P.K.rows();
  require(m > 0, ErrorKind::InvalidInput, "grid has no interior nodes");
  require(P.V.minCoeff() >= 0.0, ErrorKind::InvalidInput,
          "eigen mode needs a nonnegative potential; pass an explicit family instead");
  if (P.V.maxCoeff() == 0.0) {
    rep.index = std::numeric_limits<double>::infinity();
    rep.muMin = rep.index;
    rep.stable = true;
    return rep;
  }

  // Inverse power on (K - shift V)^{-1} V; its top eigenvalue is 1/(mu - shift).
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  auto factor_ok = [&](const Eigen::SparseMatrix<double>& A) {
    ldlt.compute(A);
    if (ldlt.info() != Eigen::Success) return false;
    const Eigen::VectorXd d = ldlt.vectorD();
    return d.minCoeff() > 1e-14 * std::max(1.0, d.cwiseAbs().maxCoeff());
  };
  if (!factor_ok(P.K)) {
    rep.shift = -1.0;
    Eigen::SparseMatrix<double> A = P.K;
    for (Eigen::Index k = 0; k < m; ++k) A.coeffRef(k, k) += P.V[k];
    if (!factor_ok(A)) {
      throw Error(ErrorKind::Singularity,
                  "stability pencil is singular: K and V share a null direction");
    }
  }

  Eigen::VectorXd x = Eigen::VectorXd::Ones(m);
  auto vnorm = [&](const Eigen::VectorXd& y) { return std::sqrt(y.dot(P.V.cwiseProduct(y))); };
  double nu = 0.0;
  bool converged = false;
  for (int it = 1; it <= opt.maxIter; ++it) {
    Eigen::VectorXd y = ldlt.solve(P.V.cwiseProduct(x));
    const double ny = vnorm(y);
    if (!(ny > 0.0) || !std::isfinite(ny)) {
      throw Error(ErrorKind::NonConvergence, "inverse power iteration broke down");
    }
    y /= ny;
    // Rayleigh estimate of 1/(mu - shift).
    const Eigen::VectorXd Vy = P.V.cwiseProduct(y);
    const double nu_new = Vy.dot(ldlt.solve(Vy));
    rep.iterations = it;
    x = std::move(y);
    if (std::abs(nu_new - nu) <= opt.tol * std::abs(nu_new)) {
      nu = nu_new;
      converged = true;
      break;
    }
    nu = nu_new;
  }
  if (!converged) {
    throw NonConvergenceError("inverse power iteration stagnated", nu, opt.maxIter);
  }
  rep.muMin = rep.shift + 1.0 / nu;
  rep.index = rep.muMin - 1.0;
  rep.stable = rep.index >= 0.0;

  GridField ev(forms.grid());
  for (Eigen::Index k = 0; k < m; ++k) ev[P.nodes[static_cast<std::size_t>(k)]] = x[k];
  const double vf = forms.potential_form(ev);
  rep.gap = forms.gap(ev) / vf;
  rep.eigenvector = std::move(ev);
  return rep;
}

StabilityReport stability_index(const StabilityForms& forms, const std::vector<GridField>& family) {
  require(!family.empty(), ErrorKind::InvalidInput, "test-function family is empty");
  StabilityReport rep;
  rep.index = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < family.size(); ++i) {
    require_zero_boundary(family[i], "test function");
    const double V = forms.potential_form(family[i]);
    if (!(V > 0.0)) continue;  // gap >= 0 automatically, quotient undefined
    const double q = forms.gap(family[i]) / V;
    if (q < rep.index) {
      rep.index = q;
      rep.minimizer = "family[" + std::to_string(i) + "]";
    }
  }
  rep.muMin = rep.index + 1.0;
  rep.gap = rep.index;
  rep.stable = rep.index >= 0.0;
  return rep;
}

double dense_pencil_min_eigenvalue(const StabilityForms& forms) {
  const Pencil P = assemble(forms);
  const Eigen::MatrixXd K(P.K);
  const Eigen::MatrixXd V = P.V.asDiagonal();
  // V x = nu K x; the largest nu is 1/mu_min.
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(V, K, Eigen::EigenvaluesOnly);
  require(es.info() == Eigen::Success, ErrorKind::NonConvergence, "dense eigensolve failed");
  const double nu = es.eigenvalues().maxCoeff();
  return nu > 0.0 ? 1.0 / nu : std::numeric_limits<double>::infinity();
}

double apriori_coefficient(double alpha, double epsilon, const ExponentData& e) {
  return (alpha - 1.0) * (alpha - 1.0) * (e.N * (e.q - 1.0) + epsilon) /
         (4.0 * alpha * (1.0 - epsilon));
}

namespace {

void require_cutoff(const GridField& psi) {
  for (std::size_t n = 0; n < psi.size(); ++n) {
    require(psi[n] >= 0.0 && psi[n] <= 1.0, ErrorKind::InvalidInput, "psi must lie in [0, 1]");
  }
  require_zero_boundary(psi, "psi");
}

// sum_i int over faces of F_i(face) with psi, u averaged to the face and the
// face derivative of psi; faces where psi vanishes at both ends contribute 0.
template <class Fn>
double face_sum(const GridField& psi, Fn&& fn) {
  const Grid& g = psi.grid();
  double s = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const FaceField d = axis_diff(psi, a);
    for_each_face(g, a, [&](std::size_t f, std::size_t lo, std::size_t hi, std::size_t) {
      if (psi[lo] == 0.0 && psi[hi] == 0.0) return;
      s += d.weight(f) * fn(a, lo, hi, d[f]);
    });
  }
  return s;
}

}  // namespace

CaccioppoliReport apriori_sides(const GridField& u, const GridField& psi, double alpha,
                                double epsilon, std::optional<int> k, const NonlinearityEval& nl,
                                const GridField& g, const ExponentData& e, double C) {
  require_dim(u.grid(), e);
  require(u.grid() == psi.grid() && u.grid() == g.grid(), ErrorKind::InvalidInput,
          "fields live on different grids");
  require(alpha > e.p_max() - 1.0, ErrorKind::InvalidInput, "alpha must exceed p_N - 1");
  require(epsilon > 0.0 && epsilon < 1.0, ErrorKind::InvalidInput, "epsilon must lie in (0, 1)");
  require(C > 0.0, ErrorKind::InvalidInput, "constant C must be positive");
  require_cutoff(psi);

  std::optional<TruncationPair> tp;
  if (k) tp.emplace(*k, alpha);
  auto b = [&](double t) { return tp ? tp->b(t) : std::pow(t, -alpha); };

  CaccioppoliReport rep;
  rep.alpha = alpha;
  rep.epsilon = epsilon;
  rep.k = k;
  rep.C = C;
  rep.coefficient = apriori_coefficient(alpha, epsilon, e);

  const double q = e.q;
  double lhs = 0.0;
  double fterm = 0.0;
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (psi[n] == 0.0) continue;
    const double un = u[n];
    require_positive(un);
    const double wq = u.grid().node_weight(n) * g[n] * std::pow(psi[n], q);
    const double bn = b(un);
    lhs += wq * un * nl.fprime(un) * bn;
    fterm += wq * nl.f(un) * bn;
  }
  const double grad = face_sum(psi, [&](int a, std::size_t lo, std::size_t hi, double dpsi) {
    const double p = e.p[a];
    const double pf = 0.5 * (psi[lo] + psi[hi]);
    const double uf = 0.5 * (u[lo] + u[hi]);
    require_positive(uf);
    if (dpsi == 0.0) return 0.0;
    return std::pow(uf, p - alpha - 1.0) * std::pow(std::abs(dpsi), p) * std::pow(pf, q - p);
  });
  rep.gradientTerm = C * grad;
  rep.nonlinearTerm = -rep.coefficient * fterm;
  rep.lhs = lhs;
  rep.rhs = rep.gradientTerm + rep.nonlinearTerm;
  rep.satisfied = rep.lhs <= rep.rhs;
  return rep;
}

namespace {

std::string range_condition(const ProblemSpec& spec, CaccioppoliCase c) {
  switch (c) {
    case CaccioppoliCase::C5_2_1: return "0 < u <= 1";
    case CaccioppoliCase::C5_2_2: return "u >= 1";
    case CaccioppoliCase::C5_2_3: return "u > 0";
    case CaccioppoliCase::C5_3: {
      std::ostringstream os;
      os << "0 < u <= " << spec.exp().M;
      return os.str();
    }
  }
  return {};
}

bool in_range(double u, const ProblemSpec& spec, CaccioppoliCase c) {
  switch (c) {
    case CaccioppoliCase::C5_2_1: return u > 0.0 && u <= 1.0;
    case CaccioppoliCase::C5_2_2: return u >= 1.0;
    case CaccioppoliCase::C5_2_3: return u > 0.0;
    case CaccioppoliCase::C5_3: return u > 0.0 && u <= spec.exp().M;
  }
  return false;
}

void require_beta_in_case_window(double beta, const ProblemSpec& spec, CaccioppoliCase c) {
  const BetaWindow w = case_window(spec, c);
  if (!(beta > w.l1 && beta < w.upper)) {
    std::ostringstream os;
    os << "beta = " << beta << " outside the window (" << w.l1 << ", " << w.upper << ")";
    throw Error(ErrorKind::OutOfWindow, os.str());
  }
}

std::vector<double> gradient_powers(double beta, const ProblemSpec& spec, CaccioppoliCase c) {
  const auto& e = spec.exponents;
  std::vector<double> pw(e.N);
  for (int i = 0; i < e.N; ++i) pw[i] = e.p[i] * case_exponents(beta, spec, i, c).thetaPrime;
  return pw;
}

}  // namespace

CaccioppoliReport corollary_sides(const GridField& u, const GridField& psi, double beta,
                                  const ProblemSpec& spec, CaccioppoliCase c, double Cconst,
                                  const GridField& g) {
  const ExponentData& e = spec.exponents;
  require_dim(u.grid(), e);
  require(u.grid() == psi.grid() && u.grid() == g.grid(), ErrorKind::InvalidInput,
          "fields live on different grids");
  require(spec.is_mixed_power() == (c != CaccioppoliCase::C5_3), ErrorKind::InvalidInput,
          "Caccioppoli case does not match the nonlinearity");
  require(Cconst > 0.0, ErrorKind::InvalidInput, "constant must be positive");
  require_beta_in_case_window(beta, spec, c);
  require_cutoff(psi);

  CaccioppoliReport rep;
  rep.beta = beta;
  rep.C = Cconst;
  rep.rangeCondition = range_condition(spec, c);
  const double E = caccioppoli_exponent(beta, spec, c);
  rep.alpha = 2.0 * beta + e.q - 1.0;

  LogSum ls;
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (psi[n] == 0.0 || g[n] == 0.0) continue;
    require_positive(u[n]);
    if (!in_range(u[n], spec, c)) rep.rangeSatisfied = false;
    ls.add(std::log(u.grid().node_weight(n) * g[n]) + E * (std::log(psi[n]) - std::log(u[n])));
  }
  rep.logLhs = ls.value();
  rep.lhs = std::exp(*rep.logLhs);

  const std::vector<double> pw = gradient_powers(beta, spec, c);
  rep.gradientTerm = face_sum(psi, [&](int a, std::size_t, std::size_t, double dpsi) {
    return dpsi == 0.0 ? 0.0 : std::pow(std::abs(dpsi), pw[a]);
  });
  rep.rhs = Cconst * rep.gradientTerm;
  rep.satisfied = rep.lhs <= rep.rhs;
  return rep;
}

namespace {

// int_{B_R(center)} f over the grid: whole cells by the trapezoid average of
// their corners, cut cells by that average times the covered fraction from
// 8^N subsamples.
double ball_integral(const GridField& f, const std::array<double, kMaxDim>& center, double R) {
  const Grid& g = f.grid();
  const int N = g.dim();
  const int corners = 1 << N;
  constexpr int kSub = 8;
  double total = 0.0;
  std::array<int, kMaxDim> c{};
  std::array<int, kMaxDim> cells{};
  std::size_t ncells = 1;
  for (int a = 0; a < N; ++a) {
    cells[a] = g.res(a);
    ncells *= static_cast<std::size_t>(cells[a]);
  }
  const double vol = g.cell_volume();
  const double R2 = R * R;
  for (std::size_t cell = 0; cell < ncells; ++cell) {
    std::size_t rem = cell;
    for (int a = N - 1; a >= 0; --a) {
      c[a] = static_cast<int>(rem % cells[a]);
      rem /= cells[a];
    }
    // Nearest and farthest squared distances of the cell box from the center.
    double near2 = 0.0, far2 = 0.0;
    for (int a = 0; a < N; ++a) {
      const double lo = g.coordinate(a, c[a]) - center[a];
      const double hi = lo + g.h(a);
      const double nearest = lo > 0.0 ? lo : (hi < 0.0 ? -hi : 0.0);
      const double farthest = std::max(std::abs(lo), std::abs(hi));
      near2 += nearest * nearest;
      far2 += farthest * farthest;
    }
    if (near2 >= R2) continue;
    double avg = 0.0;
    for (int k = 0; k < corners; ++k) {
      std::array<int, kMaxDim> ijk = c;
      for (int a = 0; a < N; ++a) ijk[a] += (k >> a) & 1;
      avg += f[g.index(ijk)];
    }
    avg /= corners;
    double frac = 1.0;
    if (far2 > R2) {
      int inside = 0;
      int total_sub = 1;
      for (int a = 0; a < N; ++a) total_sub *= kSub;
      for (int s = 0; s < total_sub; ++s) {
        int rs = s;
        double d2 = 0.0;
        for (int a = 0; a < N; ++a) {
          const int j = rs % kSub;
          rs /= kSub;
          const double x = g.coordinate(a, c[a]) + (j + 0.5) * g.h(a) / kSub - center[a];
          d2 += x * x;
        }
        if (d2 < R2) ++inside;
      }
      frac = static_cast<double>(inside) / total_sub;
    }
    total += vol * frac * avg;
  }
  return total;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  return den > 0.0 ? (n * sxy - sx * sy) / den : 0.0;
}

}  // namespace

SweepReport radius_sweep(const GridField& u, const GridField& g, const ProblemSpec& spec,
                         double beta, CaccioppoliCase c, const std::vector<double>& radii,
                         double Cconst) {
  const ExponentData& e = spec.exponents;
  const Grid& grid = u.grid();
  require_dim(grid, e);
  require(grid == g.grid(), ErrorKind::InvalidInput, "fields live on different grids");
  require(!radii.empty(), ErrorKind::InvalidInput, "radius list is empty");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    require(radii[i] > radii[i - 1], ErrorKind::InvalidInput, "radii must increase");
  }
  require(Cconst > 0.0, ErrorKind::InvalidInput, "constant must be positive");
  require(spec.is_mixed_power() == (c != CaccioppoliCase::C5_3), ErrorKind::InvalidInput,
          "Caccioppoli case does not match the nonlinearity");
  require_beta_in_case_window(beta, spec, c);

  std::array<double, kMaxDim> center{};
  for (int a = 0; a < grid.dim(); ++a) center[a] = 0.5 * (grid.lo(a) + grid.hi(a));
  // Geometry check for the largest cutoff support.
  make_cutoff(CutoffSpec{radii.back(), center}, grid);

  SweepReport rep;
  rep.caseUsed = c;
  rep.beta = beta;
  rep.exponentE = caccioppoli_exponent(beta, spec, c);
  require(rep.exponentE > 0.0, ErrorKind::InvalidInput, "Caccioppoli exponent must be positive");
  rep.decay = decay_exponents(beta, spec, c);

  GridField integrand(grid);
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (g[n] == 0.0) continue;
    require_positive(u[n]);
    integrand[n] = g[n] * std::exp(-rep.exponentE * std::log(u[n]));
  }

  std::vector<double> rs, lhs, ratio;
  for (double R : radii) {
    SweepRow row;
    row.R = R;
    row.lhs = ball_integral(integrand, center, R);
    if (c == CaccioppoliCase::C5_3) {
      row.rhs = Cconst * std::pow(R, rep.decay.front());
    } else {
      for (double d : rep.decay) row.rhs += Cconst * std::pow(R, d);
    }
    row.ratio = row.lhs / row.rhs;
    if (!rep.firstViolatingR && row.lhs > row.rhs) rep.firstViolatingR = R;
    rs.push_back(R);
    lhs.push_back(row.lhs);
    ratio.push_back(row.ratio);
    rep.rows.push_back(row);
  }
  if (rs.size() >= 2) {
    rep.lhsSlope = loglog_slope(rs, lhs);
    rep.ratioSlope = loglog_slope(rs, ratio);
  }
  return rep;
}

NonexistenceCertificate nonexistence_certificate(const ProblemSpec& spec, const GridField& u,
                                                 const GridField& g, double Cconst,
                                                 const std::vector<double>& radii) {
  NonexistenceCertificate cert;
  cert.thresholds = region_memberships(spec);
  if (cert.thresholds.theoremApplicable == Theorem::None) {
    throw Error(ErrorKind::HypothesisNotApplicable,
                "certificate refused: no nonexistence theorem applies to these parameters");
  }
  const CaccioppoliCase c = case_for(cert.thresholds.theoremApplicable);
  cert.beta = select_beta(spec, c);
  cert.rangeCondition = range_condition(spec, c);
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (!in_range(u[n], spec, c)) {
      cert.rangeSatisfied = false;
      break;
    }
  }
  cert.sweep = radius_sweep(u, g, spec, cert.beta.beta, c, radii, Cconst);
  std::ostringstream os;
  if (cert.sweep.firstViolatingR) {
    os << "candidate cannot satisfy the Caccioppoli consequence of stability beyond R = "
       << *cert.sweep.firstViolatingR << " with constant " << Cconst;
  } else {
    os << "no violation within the sampled radii for constant " << Cconst;
  }
  cert.conclusion = os.str();
  return cert;
}

}  // namespace aniso
