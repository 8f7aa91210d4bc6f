#include "aniso/solver.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "aniso/error.hpp"
#include "grid_internal.hpp"

namespace aniso {

using detail::for_each_face;

WeightSpec::WeightSpec(GridField g_in, double m_in) : g(std::move(g_in)), m(m_in) {
  for (double v : g.values()) {
    require(v >= 0.0, ErrorKind::InvalidInput, "weight g must be nonnegative");
  }
  require(m >= 1.0, ErrorKind::InvalidInput, "integrability exponent m must be >= 1");
}

WeightSpec WeightSpec::constant(const Grid& grid, double c) {
  require(c >= 0.0 && std::isfinite(c), ErrorKind::InvalidInput, "constant weight must be >= 0");
  return WeightSpec(GridField(grid, c));
}

WeightSpec WeightSpec::radial_power(const Grid& grid, double s, std::array<double, kMaxDim> center,
                                    double m) {
  require(s >= 0.0, ErrorKind::InvalidInput, "radial weight exponent must be >= 0");
  GridField g = GridField::from_function(grid, [&](std::span<const double> x) {
    double r2 = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) r2 += (x[a] - center[a]) * (x[a] - center[a]);
    if (r2 == 0.0) return s > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
    return std::pow(r2, -0.5 * s);
  });
  return WeightSpec(std::move(g), m);
}

RegularizationLevel RegularizationLevel::make(int n, const WeightSpec& w) {
  require(n >= 1, ErrorKind::InvalidInput, "level index n must be >= 1");
  GridField gn = w.g;
  for (auto& v : gn.values()) v = std::min(v, static_cast<double>(n));
  return {n, std::move(gn), 1.0 / n};
}

namespace {

// int_a^b e^{1/(t+c)} dt for 0 <= a, b. The antiderivative is
// (t+c) e^{1/(t+c)} - Ei(1/(t+c)); short intervals use Gauss-Legendre to
// dodge the cancellation between two nearly equal primitives.
double exp_recip_integral(double a, double b, double c) {
  if (a == b) return 0.0;
  const double lo = std::min(a, b);
  if (std::abs(b - a) <= 0.25 * (lo + c)) {
    using GL = boost::math::quadrature::gauss<double, 10>;
    return GL::integrate([c](double t) { return std::exp(1.0 / (t + c)); }, a, b);
  }
  auto prim = [c](double t) {
    const double s = 1.0 / (t + c);
    return std::exp(s) / s - std::expint(s);
  };
  return prim(b) - prim(a);
}

}  // namespace

SourceTerm level_source(const RegularizationLevel& level) {
  auto gn = std::make_shared<std::vector<double>>(level.g_n.values().begin(),
                                                  level.g_n.values().end());
  const double c = level.shift;
  const double top = std::exp(1.0 / c);
  SourceTerm s;
  s.value = [gn, c](std::size_t n, double u) {
    return (*gn)[n] == 0.0 ? 0.0 : (*gn)[n] * std::exp(1.0 / (std::max(u, 0.0) + c));
  };
  s.slope = [gn, c](std::size_t n, double u) {
    if ((*gn)[n] == 0.0 || u <= 0.0) return 0.0;
    const double x = u + c;
    return -(*gn)[n] * std::exp(1.0 / x) / (x * x);
  };
  s.integral = [gn, c, top](std::size_t n, double a, double b) {
    const double g = (*gn)[n];
    if (g == 0.0 || a == b) return 0.0;
    const double sign = b >= a ? 1.0 : -1.0;
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    double v = 0.0;
    if (lo < 0.0) v += top * (std::min(hi, 0.0) - lo);
    if (hi > 0.0) v += exp_recip_integral(std::max(lo, 0.0), hi, c);
    return sign * g * v;
  };
  return s;
}

double inner_energy(const GridField& u, const GridField& rhs, const ExponentData& e) {
  return gradient_energy(u, e) - inner(rhs, u);
}

double default_inner_tol(const ExponentData& e) {
  const bool linear = std::all_of(e.p.begin(), e.p.end(), [](double p) { return p == 2.0; });
  return linear ? 1e-10 : 1e-8;
}

namespace {

double resolve_tol(const InnerOptions& opt, const ExponentData& e) {
  return opt.tol > 0.0 ? opt.tol : default_inner_tol(e);
}

double interior_sup(const GridField& f) {
  double m = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) {
    if (!f.on_boundary(n)) m = std::max(m, std::abs(f[n]));
  }
  return m;
}

}  // namespace

InnerResult solve_inner(const GridField& rhs, const ExponentData& e, const InnerOptions& opt,
                        std::optional<GridField> initial) {
  for (double v : rhs.values()) {
    require(std::isfinite(v), ErrorKind::InvalidInput, "inner right-hand side must be bounded");
  }
  GridField start = initial ? std::move(*initial) : GridField(rhs.grid());
  require(start.grid() == rhs.grid(), ErrorKind::InvalidInput, "initial guess on another grid");
  NewtonOptions nopt;
  nopt.tol = resolve_tol(opt, e) * std::max(1.0, interior_sup(rhs));
  nopt.maxIter = opt.maxIter;
  NewtonResult r = minimize_convex(e, SourceTerm::fixed(rhs), std::move(start), nopt);
  return {std::move(r.u), r.iterations, r.residual, std::move(r.energy)};
}

namespace {

GridField level_rhs(const GridField& v, const RegularizationLevel& level) {
  require(v.grid() == level.g_n.grid(), ErrorKind::InvalidInput, "level and field grids differ");
  GridField rhs(v.grid());
  for (std::size_t n = 0; n < v.size(); ++n) {
    const double g = level.g_n[n];
    rhs[n] = g == 0.0 ? 0.0 : g * std::exp(1.0 / (std::abs(v[n]) + level.shift));
  }
  return rhs;
}

double sup_diff(const GridField& a, const GridField& b) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

}  // namespace

GridField apply_A(const GridField& v, const RegularizationLevel& level, const ExponentData& e,
                  const InnerOptions& opt, std::optional<GridField> initial) {
  return solve_inner(level_rhs(v, level), e, opt, std::move(initial)).u;
}

std::string_view to_string(LevelStrategy s) {
  return s == LevelStrategy::ConvexNewton ? "ConvexNewton" : "FixedPoint";
}

LevelResult solve_level(const RegularizationLevel& level, const WeightSpec& w,
                        const ExponentData& e, const LevelOptions& opt,
                        std::optional<GridField> initial) {
  require(w.g.grid() == level.g_n.grid(), ErrorKind::InvalidInput, "weight and level grids differ");
  const Grid& g = level.g_n.grid();
  LevelResult out{GridField(g), 0.0, 0, opt.strategy};

  if (opt.strategy == LevelStrategy::ConvexNewton) {
    GridField start = initial ? std::move(*initial) : GridField(g);
    const SourceTerm src = level_source(level);
    double scale = 1.0;
    for (std::size_t n = 0; n < g.node_count(); ++n) {
      if (!g.is_boundary(n)) scale = std::max(scale, std::abs(src.value(n, start[n])));
    }
    NewtonOptions nopt;
    nopt.tol = resolve_tol(opt.inner, e) * scale;
    nopt.maxIter = opt.inner.maxIter;
    NewtonResult r = minimize_convex(e, src, std::move(start), nopt);
    out.u = std::move(r.u);
    out.iterations = r.iterations;
    out.fixedPointResidual = sup_diff(apply_A(out.u, level, e, opt.inner), out.u);
    return out;
  }

  // Picard sweeps from u = 0.
  GridField u(g);
  std::vector<double> changes;
  constexpr int kWindow = 10;
  for (int it = 1; it <= opt.maxOuter; ++it) {
    GridField next = apply_A(u, level, e, opt.inner, u);
    const double change = sup_diff(next, u);
    changes.push_back(change);
    u = std::move(next);
    out.iterations = it;
    if (change <= opt.tolFix) {
      out.u = std::move(u);
      out.fixedPointResidual = sup_diff(apply_A(out.u, level, e, opt.inner), out.u);
      return out;
    }
    if (it > 2 * kWindow && !(change < 0.5 * changes[changes.size() - 1 - kWindow])) {
      std::ostringstream os;
      os << "fixed-point sweeps stopped contracting at level n = " << level.n
         << " (change " << change << " after " << it << " sweeps)";
      throw NonConvergenceError(os.str(), change, it);
    }
  }
  throw NonConvergenceError("fixed-point sweep cap reached", changes.back(), opt.maxOuter);
}

double interior_min(const GridField& u) {
  const Grid& g = u.grid();
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < u.size(); ++n) {
    const auto x = g.position(n);
    bool inside = true;
    for (int a = 0; a < g.dim(); ++a) {
      const double mid = 0.5 * (g.lo(a) + g.hi(a));
      const double quarter = 0.25 * (g.hi(a) - g.lo(a));
      if (std::abs(x[a] - mid) > quarter * (1.0 + 1e-12)) inside = false;
    }
    if (inside) m = std::min(m, u[n]);
  }
  return m;
}

LevelSetFit level_set_fit(const GridField& u, const ExponentData& e, double m, int count) {
  require(count >= 2, ErrorKind::InvalidInput, "need at least two levels");
  const LevelSetExponents ex = level_set_exponents(e, m);
  LevelSetFit fit;
  fit.r = ex.r;
  fit.beta = ex.beta;
  const double top = u.max();
  if (!(top > 0.0)) return fit;

  // Smallest C that holds on every pair of the fit ladder.
  auto ladder = [&](int cnt, std::vector<double>& k, std::vector<double>& a) {
    for (int j = 0; j < cnt; ++j) {
      k.push_back(top * j / cnt);
      a.push_back(level_set_measure(u, k.back()));
    }
  };
  auto pair_ratio = [&](const std::vector<double>& k, const std::vector<double>& a, auto&& fn) {
    for (std::size_t j = 0; j < k.size(); ++j) {
      if (!(a[j] > 0.0)) continue;
      for (std::size_t l = j + 1; l < k.size(); ++l) {
        if (!(a[l] > 0.0)) continue;
        fn(a[l] * std::pow(k[l] - k[j], fit.r) / std::pow(a[j], fit.beta));
      }
    }
  };
  ladder(count, fit.levels, fit.measures);
  double lo = std::numeric_limits<double>::infinity();
  pair_ratio(fit.levels, fit.measures, [&](double q) {
    fit.C = std::max(fit.C, q);
    lo = std::min(lo, q);
  });
  fit.logSpread = fit.C > 0.0 ? std::log(fit.C / lo) : 0.0;

  // Holdout: a ladder twice as fine, checked against the fitted bound.
  std::vector<double> hk, ha;
  ladder(2 * count, hk, ha);
  pair_ratio(hk, ha, [&](double q) {
    fit.maxViolationRatio = std::max(fit.maxViolationRatio, q / fit.C);
  });
  fit.withinTolerance = fit.maxViolationRatio <= 1.05;
  return fit;
}

EpsilonMembership epsilon_membership(const GridField& u, const ExponentData& e, double epsilon) {
  require(epsilon > 0.0, ErrorKind::InvalidInput, "epsilon must be positive");
  const Grid& g = u.grid();
  EpsilonMembership rep;
  rep.epsilon = epsilon;
  GridField v(g);
  double clearance = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < u.size(); ++n) {
    v[n] = std::max(u[n] - epsilon, 0.0);
    if (v[n] > 0.0) {
      const auto x = g.position(n);
      for (int a = 0; a < g.dim(); ++a) {
        clearance = std::min({clearance, x[a] - g.lo(a), g.hi(a) - x[a]});
      }
    }
  }
  rep.energy = gradient_energy(v, e);
  rep.energyFinite = std::isfinite(rep.energy);
  rep.boundaryClearance = clearance;
  rep.supportAwayFromBoundary = clearance > 0.0;
  return rep;
}

namespace {

// Random cos^2 bumps with support inside the interior.
std::vector<GridField> bump_family(const Grid& g, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double side = std::numeric_limits<double>::infinity();
  for (int a = 0; a < g.dim(); ++a) side = std::min(side, g.hi(a) - g.lo(a));
  std::vector<GridField> out;
  for (int t = 0; t < count; ++t) {
    const double rho = side * (0.1 + 0.2 * unit(rng));
    std::array<double, kMaxDim> c{};
    for (int a = 0; a < g.dim(); ++a) {
      const double lo = g.lo(a) + rho + g.h(a);
      const double hi = g.hi(a) - rho - g.h(a);
      c[a] = lo + (hi - lo) * unit(rng);
    }
    out.push_back(GridField::from_function(g, [&](std::span<const double> x) {
      double v = 1.0;
      for (std::size_t a = 0; a < x.size(); ++a) {
        const double z = (x[a] - c[a]) / rho;
        if (std::abs(z) >= 1.0) return 0.0;
        const double cz = std::cos(0.5 * M_PI * z);
        v *= cz * cz;
      }
      return v;
    }));
  }
  return out;
}

// sum_i int flux_i D_i phi.
double flux_pairing(const GridField& u, const GridField& phi, const ExponentData& e) {
  double s = 0.0;
  for (int a = 0; a < u.grid().dim(); ++a) {
    const FaceField flux = p_flux(u, a, e.p[a]);
    const FaceField dphi = axis_diff(phi, a);
    s += inner(flux, dphi);
  }
  return s;
}

WeakResidualReport weak_battery(const GridField& u, const RegularizationLevel& level,
                                const WeightSpec& w, const ExponentData& e, int count,
                                std::uint64_t seed) {
  WeakResidualReport rep;
  rep.tests = count;
  const SourceTerm src = level_source(level);
  for (const GridField& phi : bump_family(u.grid(), count, seed)) {
    const double lhs = flux_pairing(u, phi, e);
    double level_rhs = 0.0;
    double limit_rhs = 0.0;
    double scale = 0.0;
    for (std::size_t n = 0; n < u.size(); ++n) {
      if (phi[n] == 0.0) continue;
      const double wn = u.grid().node_weight(n);
      const double s = src.value(n, u[n]);
      level_rhs += wn * s * phi[n];
      scale += wn * std::abs(s * phi[n]);
      limit_rhs += wn * (w.g[n] == 0.0 ? 0.0 : w.g[n] * std::exp(1.0 / u[n])) * phi[n];
    }
    rep.maxLevelResidual = std::max(rep.maxLevelResidual, std::abs(lhs - level_rhs));
    rep.maxLimitResidual = std::max(rep.maxLimitResidual, std::abs(lhs - limit_rhs));
    rep.scale = std::max(rep.scale, scale);
  }
  return rep;
}

bool boundedness_expected(const ExponentData& e, double m) {
  const IntegrabilityThresholds th = integrability_thresholds(e);
  if (th.pbarBelowN) return m > *th.m_bounded;
  return m > th.r_threshold(2.0 * e.p_max());
}

}  // namespace

LadderReport run_ladder(const WeightSpec& w, const ExponentData& e, const LadderOptions& opt) {
  require(opt.nMax >= 2, ErrorKind::InvalidInput, "nMax must be at least 2");
  require(e.N == w.g.grid().dim(), ErrorKind::InvalidInput,
          "exponent count differs from grid dimension");
  LadderReport rep;
  rep.boundednessExpected = boundedness_expected(e, w.m);

  std::vector<GridField> sols;
  std::optional<GridField> guess;
  for (int n = 1; n <= opt.nMax; ++n) {
    const RegularizationLevel level = RegularizationLevel::make(n, w);
    try {
      LevelResult lr = solve_level(level, w, e, opt.level, guess);
      LevelSummary s;
      s.n = n;
      s.fixedPointResidual = lr.fixedPointResidual;
      s.supNorm = lr.u.max_abs();
      s.interiorMin = interior_min(lr.u);
      s.iterations = lr.iterations;
      s.levelSets = level_set_fit(lr.u, e, w.m);
      rep.levels.push_back(std::move(s));
      guess = lr.u;
      sols.push_back(std::move(lr.u));
    } catch (const Error& err) {
      rep.failedLevel = n;
      rep.failureKind = err.kind();
      rep.failure = err.what();
      break;
    }
  }

  for (std::size_t k = 0; k + 1 < sols.size(); ++k) {
    double d = 0.0;
    for (std::size_t n = 0; n < sols[k].size(); ++n) d = std::max(d, sols[k][n] - sols[k + 1][n]);
    rep.levels[k].monotonicityDefect = d;
    rep.maxMonotonicityDefect = std::max(rep.maxMonotonicityDefect, d);
    if (rep.levels[k + 1].interiorMin < rep.levels[k].interiorMin - 10.0 * opt.level.tolFix) {
      rep.interiorMinNonDecreasing = false;
    }
  }
  if (rep.levels.size() >= 3) {
    const double first = rep.levels[1].supNorm - rep.levels[0].supNorm;
    const double last = rep.levels.back().supNorm - rep.levels[rep.levels.size() - 2].supNorm;
    rep.supNormIncrementsShrinking = last <= first;
  }
  if (!sols.empty()) {
    const GridField& top = sols.back();
    const RegularizationLevel level = RegularizationLevel::make(static_cast<int>(sols.size()), w);
    rep.weak = weak_battery(top, level, w, e, opt.weakTests, opt.seed);
    if (top.max() > 0.0) rep.epsilon = epsilon_membership(top, e, opt.epsilonFraction * top.max());
    rep.limit = top;
  }
  return rep;
}

double stampacchia_extinction(double C, double beta, double r, double k0, double phi0) {
  require(beta > 1.0, ErrorKind::InvalidInput, "Stampacchia recursion needs beta > 1");
  require(C > 0.0 && r > 0.0 && phi0 >= 0.0, ErrorKind::InvalidInput,
          "Stampacchia needs C > 0, r > 0, phi0 >= 0");
  if (phi0 == 0.0) return k0;
  const double log_d = (std::log(C) + (beta - 1.0) * std::log(phi0) +
                        r * beta / (beta - 1.0) * std::log(2.0)) / r;
  return k0 + std::exp(log_d);
}

StampacchiaCheck stampacchia_verify(double C, double beta, double r, double k0, double phi0,
                                    double floor) {
  StampacchiaCheck chk;
  chk.kStar = stampacchia_extinction(C, beta, r, k0, phi0);
  chk.d = chk.kStar - k0;
  if (phi0 == 0.0) {
    chk.confirmed = true;
    return chk;
  }
  const double L = std::log(2.0);
  const double log_floor = std::log(floor);
  const double log_d = std::log(chk.d);
  auto log_bound = [&](int j) { return std::log(phi0) - j * r * L / (beta - 1.0); };
  // Inductive step: if phi(k_j) sits on the bound, one application of the
  // recursion must land on (or under) the bound at k_{j+1}.
  int j = 0;
  bool under = true;
  while (log_bound(j) >= log_floor && j < 100000) {
    const double log_gap = log_d - (j + 1) * L;
    const double next = std::log(C) + beta * log_bound(j) - r * log_gap;
    const double target = log_bound(j + 1);
    const double rel = std::abs(next - target) / std::max(1.0, std::abs(target));
    chk.maxRelativeGap = std::max(chk.maxRelativeGap, rel);
    if (next > target + 1e-9 * std::max(1.0, std::abs(target))) under = false;
    ++j;
  }
  chk.steps = j;
  chk.finalBound = std::exp(log_bound(j));
  chk.confirmed = under && chk.maxRelativeGap <= 1e-9 && chk.finalBound < floor;
  return chk;
}

}  // namespace aniso
