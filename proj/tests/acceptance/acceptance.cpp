// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aniso/error.hpp"
#include "aniso/exponents.hpp"
#include "aniso/grid.hpp"
#include "aniso/solver.hpp"
#include "aniso/stability.hpp"
#include "aniso/truncations.hpp"
#include "oracles/bvp1d.hpp"
#include "oracles/poisson2d.hpp"
#include "oracles/rational.hpp"
#include "oracles/stampacchia.hpp"

using namespace aniso;

namespace {

// Tolerances, pinned.
constexpr double kTolThreshold = 1e-12;
constexpr double kTolTruncation = 1e-12;
constexpr double kTolPoisson1D = 1e-4;
constexpr double kTolPoisson2D = 5e-4;
constexpr double kTolBvp = 1e-3;
constexpr double kTolMonotone = 1e-6;
constexpr double kTolStampacchia = 1e-9;
constexpr double kTolEigen = 1e-8;
constexpr double kTolCaccioppoli = 1e-12;
constexpr double kTolSlope = 0.10;
constexpr double kTolGradient = 1e-6;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(const char* id, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& ex) {
    o.pass = false;
    o.detail << " [exception: " << ex.what() << "]";
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s %s  %s (%.2fs)%s\n", o.pass ? "PASS" : "FAIL", id, title, secs,
              o.detail.str().c_str());
  std::fflush(stdout);
}

double rel(double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); }

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void ac1(Outcome& o) {
  using oracle::Frac;
  const Frac p[3] = {2, 3, 4};
  const Frac N = 3;
  Frac inv;
  for (const auto& pi : p) inv = inv + Frac(1) / pi;
  const Frac pbar = N / inv;
  const Frac pstar = N * pbar / (N - pbar);
  const Frac q = (p[0] + p[1] + p[2]) / N;
  const Frac l1 = (p[2] - q) / Frac(2);
  const Frac a_lo = N * (q - 1) * (p[2] - 1) / Frac(4);
  Frac i_lo;
  for (const auto& pi : p) {
    const Frac lb = N * N * (q - 1) * (pi - 1) / (pi * (N * (q - 1) + 4) - N * N * (q - 1));
    if (i_lo < lb) i_lo = lb;
  }
  const Frac b_hi = Frac(4) / (N * (q - 1) * (p[2] - 1));
  const Frac c_hi = Frac(4) / (N * (N - 1) * (q - 1));
  const Frac j_hi = b_hi < c_hi ? b_hi : c_hi;
  const Frac l2 = Frac(2) * 10 / (N * (q - 1)) - (q - 1) / Frac(2);
  const Frac l3 = Frac(2) / (Frac(1, 5) * N * (q - 1)) - (q - 1) / Frac(2);
  const Frac m_bounded = pstar / (pstar - pbar);

  const auto e = ExponentData::from({2, 3, 4});
  const auto r = region_memberships(ProblemSpec::mixed_power(e, 10, 10));
  const auto rx = region_memberships(ProblemSpec::exp_singular(e, 0.2));
  const auto it = integrability_thresholds(e);

  auto cmp = [&](const char* name, double got, Frac want) {
    o.check(rel(got, want.value()) <= kTolThreshold, name);
  };
  cmp("pbar", r.pbar, pbar);
  cmp("pstar", r.pstar.value_or(NAN), pstar);
  cmp("q", r.q, q);
  cmp("l1", r.l1, l1);
  cmp("A", r.regionA.lower, a_lo);
  o.check(std::isinf(r.regionA.upper), "A unbounded");
  cmp("I", r.regionI.lower, i_lo);
  o.check(std::isinf(r.regionI.upper), "I unbounded");
  cmp("J", rx.regionJ.upper, j_hi);
  o.check(rx.regionJ.lower == 0.0, "J from 0");
  cmp("l2", r.l2.value_or(NAN), l2);
  cmp("l3", rx.l3.value_or(NAN), l3);
  cmp("m_bounded", it.m_bounded.value_or(NAN), m_bounded);
  o.detail << " pbar=" << pbar.num() << "/" << pbar.den() << " I=(" << i_lo.value()
           << ",inf) J=(0," << j_hi.num() << "/" << j_hi.den() << ")";
}

void ac2(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> kd(1, 50);
  std::uniform_real_distribution<double> ad(3.0, 12.0);
  const std::vector<double> p = {2, 3, 4};
  double worst_c = 0.0, worst_knot = 0.0, worst_eq = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int k = kd(rng);
    double alpha = ad(rng);
    if (alpha <= 3.0) alpha = 3.5;
    const TruncationPair tp(k, alpha);
    const auto samples = default_samples(tp, 1000);
    const auto rep = verify_properties(tp, samples, p);
    o.check(rep.propertyA, "property (a)");
    o.check(rep.propertyC, "property (c)");
    o.check(rep.continuity, "knot continuity");
    worst_c = std::max(worst_c, rep.maxPropertyCError);
    worst_knot = std::max(worst_knot, rep.maxKnotJump);
    // Equality a^2 = t b on the power piece, recomputed from the closed form.
    for (double t : samples) {
      if (t < 1.0 / k) continue;
      const double a2 = std::pow(tp.a(t), 2.0);
      const double tb = t * std::pow(t, -alpha);
      worst_eq = std::max(worst_eq, std::abs(a2 - tb) / tb);
      // Both builders must equal the raw powers there.
      const double da = std::abs(tp.a(t) - std::pow(t, 0.5 * (1.0 - alpha))) /
                        std::pow(t, 0.5 * (1.0 - alpha));
      o.check(da <= kTolTruncation, "a equals t^{(1-alpha)/2} on the power piece");
    }
  }
  o.check(worst_c <= kTolTruncation, "(c) error");
  o.check(worst_knot <= kTolTruncation, "knot jump");
  o.check(worst_eq <= kTolTruncation, "(a) equality on power piece");
  o.detail << " max(c)=" << worst_c << " knot=" << worst_knot << " eq=" << worst_eq;
}

void ac3(Outcome& o) {
  const auto e1 = ExponentData::from({2});
  const Grid g1 = Grid::cube(1, 0, 1, 128);
  GridField rhs1(g1, 1.0);
  const auto u1 = solve_inner(rhs1, e1).u;
  const double err1 = std::abs(u1.max() - 0.125);
  o.check(err1 <= kTolPoisson1D, "1D max");

  const auto e2 = ExponentData::from({2, 2});
  const Grid g2 = Grid::cube(2, 0, 1, 64);
  GridField rhs2(g2, 1.0);
  const auto u2 = solve_inner(rhs2, e2).u;
  const auto series = oracle::poisson_unit_square(64, 200);
  const double err2 = sup_diff(u2.values(), series);
  o.check(err2 <= kTolPoisson2D, "2D vs Fourier series");
  o.detail << " 1D |max-0.125|=" << err1 << " 2D sup=" << err2;
}

void ac4(Outcome& o) {
  const auto e = ExponentData::from({2});
  const int res = 128;
  const Grid g = Grid::cube(1, 0, 1, res);
  const WeightSpec w = WeightSpec::constant(g, 1.0);
  const auto level = RegularizationLevel::make(1, w);
  LevelOptions opt;
  opt.strategy = LevelStrategy::FixedPoint;
  const auto lr = solve_level(level, w, e, opt);

  auto F = [](double, double u) { return std::exp(1.0 / (std::max(u, 0.0) + 1.0)); };
  auto dF = [](double, double u) {
    if (u < 0.0) return 0.0;
    const double c = u + 1.0;
    return -std::exp(1.0 / c) / (c * c);
  };
  const int fine = 8 * res;
  const auto ref = oracle::solve_bvp(F, dF, 0.0, 1.0, 0.0, 0.0, fine);
  double err = 0.0;
  for (int i = 0; i <= res; ++i) err = std::max(err, std::abs(lr.u[i] - ref[8 * i]));
  o.check(err <= kTolBvp, "level-1 fixed point vs collocation oracle");
  o.check(lr.fixedPointResidual <= 1e-6, "fixed-point residual");
  o.detail << " sup=" << err << " sweeps=" << lr.iterations << " |A(u)-u|=" << lr.fixedPointResidual;
}

void ac5(Outcome& o) {
  for (const auto& p : {std::vector<double>{2, 2}, std::vector<double>{2, 4}}) {
    const auto e = ExponentData::from(p);
    const Grid g = Grid::cube(2, 0, 1, 64);
    const WeightSpec w = WeightSpec::constant(g, 1.0);
    LadderOptions opt;
    opt.nMax = 6;
    const auto rep = run_ladder(w, e, opt);
    o.check(!rep.failedLevel.has_value(), "ladder completed: " + rep.failure);
    o.check(rep.levels.size() == 6, "six levels");
    o.check(rep.maxMonotonicityDefect <= kTolMonotone, "monotonicity defect");
    bool positive = true, nondecreasing = true;
    for (std::size_t n = 0; n < rep.levels.size(); ++n) {
      positive = positive && rep.levels[n].interiorMin > 0.0;
      if (n > 0) nondecreasing = nondecreasing && rep.levels[n].interiorMin >= rep.levels[n - 1].interiorMin;
    }
    o.check(positive, "interior min positive");
    o.check(nondecreasing, "interior min non-decreasing");
    o.detail << " p=(" << p[0] << "," << p[1] << ") defect=" << rep.maxMonotonicityDefect
             << " min=" << rep.levels.front().interiorMin << ".." << rep.levels.back().interiorMin;
  }
}

void ac6(Outcome& o) {
  const auto base = stampacchia_verify(1, 2, 2, 0, 1);
  o.check(std::abs(base.d - 4.0) <= kTolStampacchia, "d = 4");
  o.check(base.confirmed, "recursion confirms the bound");
  o.check(base.finalBound < 1e-12, "bound driven below 1e-12");
  const double d_oracle = oracle::stampacchia_increment(1, 2, 2, 1);
  o.check(std::abs(d_oracle - 4.0) <= 1e-9 * 4.0, "oracle agrees on d = 4");

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> lc(-2.0, 2.0), bd(1.2, 4.0), rd(0.5, 4.0), lp(-3.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double C = std::exp(lc(rng)), beta = bd(rng), r = rd(rng), phi0 = std::exp(lp(rng));
    const auto chk = stampacchia_verify(C, beta, r, 0.0, phi0);
    const double want = oracle::stampacchia_increment(C, beta, r, phi0);
    const double err = std::abs(chk.d - want) / want;
    worst = std::max(worst, err);
    o.check(chk.confirmed, "random case confirmed");
  }
  o.check(worst <= kTolStampacchia, "closed form vs oracle");
  o.detail << " d=" << base.d << " steps=" << base.steps << " worst rel=" << worst;
}

void ac7(Outcome& o) {
  const auto e = ExponentData::from({2});
  const double pi = std::acos(-1.0);
  std::vector<double> errs;
  for (int res : {32, 64, 128}) {
    const Grid g = Grid::cube(1, 0, pi, res);
    const double h = g.h(0);
    const double lam_star = 2.0 / (h * h) * (1.0 - std::cos(h));
    auto forms_at = [&](double lam) {
      GridField pot(g, lam);
      pot.zero_boundary();
      return StabilityForms::from_potential(GridField(g), e, pot);
    };
    const auto f1 = forms_at(1.0);
    const auto rep = stability_index(f1);
    // With V = lambda M the index vanishes exactly at lambda = mu_min(V = M).
    const double crossing = rep.muMin;
    o.check(std::abs(crossing - lam_star) <= kTolEigen, "crossing at (2/h^2)(1 - cos h)");
    if (res <= 64) {
      const double dense = dense_pencil_min_eigenvalue(f1);
      o.check(std::abs(dense - crossing) <= kTolEigen, "dense eigensolve agrees");
    }
    const double below = stability_index(forms_at(lam_star * (1.0 - 1e-6))).index;
    const double above = stability_index(forms_at(lam_star * (1.0 + 1e-6))).index;
    o.check(below > 0.0 && above < 0.0, "index changes sign");
    errs.push_back(std::abs(crossing - 1.0));
  }
  const double order1 = std::log2(errs[0] / errs[1]);
  const double order2 = std::log2(errs[1] / errs[2]);
  o.check(std::abs(order1 - 2.0) < 0.1 && std::abs(order2 - 2.0) < 0.1, "O(h^2) convergence to 1");
  o.detail << " |lambda*-1|=" << errs[0] << "," << errs[1] << "," << errs[2] << " orders "
           << order1 << "," << order2;
}

void ac8(Outcome& o) {
  const auto e = ExponentData::from({3, 4});
  const auto spec = ProblemSpec::mixed_power(e, 2, 5);
  const auto nl = NonlinearityEval::from(spec);
  const Grid g = Grid::cube(2, -1, 1, 24);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> un(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 1 + static_cast<int>(un(rng) * 8);
    const double alpha = 3.2 + 4.0 * un(rng);
    const double eps = 0.05 + 0.9 * un(rng);
    GridField u(g), wt(g);
    for (std::size_t n = 0; n < u.size(); ++n) {
      u[n] = 1.0 / k + 2.0 * un(rng);
      wt[n] = 0.5 + un(rng);
    }
    const double R = 0.2 + 0.25 * un(rng);
    const GridField psi = make_cutoff({R, {0, 0, 0}}, g);
    const auto trunc = apriori_sides(u, psi, alpha, eps, k, nl, wt, e);
    const auto pure = apriori_sides(u, psi, alpha, eps, std::nullopt, nl, wt, e);
    const double dl = std::abs(trunc.lhs - pure.lhs) / std::abs(pure.lhs);
    const double dr = std::abs(trunc.rhs - pure.rhs) / std::abs(pure.rhs);
    worst = std::max({worst, dl, dr});
  }
  o.check(worst <= kTolCaccioppoli, "b_k vs pure power");
  o.detail << " worst rel=" << worst;
}

void ac9(Outcome& o) {
  const auto e = ExponentData::from({2, 3, 4});
  const Grid g = Grid::cube(3, -480, 480, 96);
  const GridField one(g, 1.0);
  std::vector<double> radii;
  for (int i = 0; i <= 8; ++i) radii.push_back(24.0 * std::pow(10.0, i / 8.0));

  const auto spec = ProblemSpec::mixed_power(e, 10, 10);
  const auto cert = nonexistence_certificate(spec, one, one, 1.0, radii);
  double min_pt = std::numeric_limits<double>::infinity();
  const auto c = case_for(cert.thresholds.theoremApplicable);
  for (int i = 0; i < 3; ++i) {
    min_pt = std::min(min_pt, e.p[i] * case_exponents(cert.beta.beta, spec, i, c).thetaPrime);
  }
  const double slope = cert.sweep.ratioSlope;
  o.check(std::abs(slope - min_pt) <= kTolSlope * min_pt, "ratio slope vs min p theta'");
  o.check(cert.sweep.firstViolatingR.has_value(), "finite firstViolatingR");

  const auto outside = ProblemSpec::mixed_power(e, 5, 5);
  const auto w = beta_window(outside);
  bool every_beta_blocked = !w.empty();
  for (int j = 1; j < 200; ++j) {
    const double beta = w.l1 + (w.upper - w.l1) * j / 200.0;
    const auto d = decay_exponents(beta, outside, CaccioppoliCase::C5_2_1);
    every_beta_blocked = every_beta_blocked &&
                         std::any_of(d.begin(), d.end(), [](double x) { return x >= 0.0; });
  }
  o.check(every_beta_blocked, "delta=5: a non-negative decay exponent for every beta");
  bool refused = false;
  try {
    (void)nonexistence_certificate(outside, one, one, 1.0, radii);
  } catch (const Error& err) {
    refused = err.kind() == ErrorKind::HypothesisNotApplicable;
  }
  o.check(refused, "delta=5 certificate refused");
  o.detail << " beta=" << cert.beta.beta << " slope=" << slope << " min p theta'=" << min_pt
           << " firstViolatingR=" << cert.sweep.firstViolatingR.value_or(NAN);
}

void ac10(Outcome& o) {
  const auto e = ExponentData::from({2, 3, 4});
  const Grid g = Grid::cube(3, -480, 480, 96);
  const GridField one(g, 1.0);
  std::vector<double> radii;
  for (int i = 0; i <= 8; ++i) radii.push_back(24.0 * std::pow(10.0, i / 8.0));

  const auto spec = ProblemSpec::exp_singular(e, 0.2);
  const auto cert = nonexistence_certificate(spec, GridField(g, 0.2), one, 1.0, radii);
  o.check(cert.thresholds.theoremApplicable == Theorem::Thm3_5, "Thm3_5 applies");
  const double decay = e.N - 2.0 * cert.beta.beta - e.q;
  o.check(decay < 0.0, "N - 2 beta - q < 0");
  o.check(cert.sweep.firstViolatingR.has_value(), "finite firstViolatingR");

  bool refused = false;
  try {
    (void)nonexistence_certificate(ProblemSpec::exp_singular(e, 0.5), GridField(g, 0.5), one, 1.0,
                                   radii);
  } catch (const Error& err) {
    refused = err.kind() == ErrorKind::HypothesisNotApplicable;
  }
  o.check(refused, "M=0.5 refused");
  o.detail << " beta=" << cert.beta.beta << " decay=" << decay
           << " firstViolatingR=" << cert.sweep.firstViolatingR.value_or(NAN);
}

void ac11(Outcome& o) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> un(-1.0, 1.0);
  double worst = 0.0;
  for (const auto& p : {std::vector<double>{2, 2}, std::vector<double>{3, 3},
                        std::vector<double>{2, 4}}) {
    const auto e = ExponentData::from(p);
    const Grid g = Grid::cube(2, 0, 1, 10);
    GridField u(g), rhs(g);
    for (std::size_t n = 0; n < u.size(); ++n) {
      u[n] = un(rng);
      rhs[n] = un(rng);
    }
    u.zero_boundary();
    const GridField plap = p_laplacian_apply(u, e);
    double scale = 0.0, err = 0.0;
    for (std::size_t n = 0; n < u.size(); ++n) {
      if (g.is_boundary(n)) continue;
      const double analytic = (plap[n] - rhs[n]) * g.node_weight(n);
      // Fourth-order central difference.
      const double s = 1e-3;
      auto J = [&](double dv) {
        GridField v = u;
        v[n] += dv;
        return inner_energy(v, rhs, e);
      };
      const double fd = (-J(2 * s) + 8 * J(s) - 8 * J(-s) + J(-2 * s)) / (12 * s);
      err = std::max(err, std::abs(fd - analytic));
      scale = std::max(scale, std::abs(analytic));
    }
    const double r = err / scale;
    worst = std::max(worst, r);
    o.detail << " p=(" << p[0] << "," << p[1] << ") rel=" << r;
  }
  o.check(worst <= kTolGradient, "p_laplacian_apply vs FD gradient of inner_energy");
}

}  // namespace

int main() {
  criterion("AC1", "threshold algebra vs exact rationals", ac1);
  criterion("AC2", "truncation identities, 50 random (k, alpha)", ac2);
  criterion("AC3", "linear solver vs closed form and Fourier series", ac3);
  criterion("AC4", "level-1 fixed point vs 1D collocation oracle", ac4);
  criterion("AC5", "ladder monotonicity and interior minimum, 64^2", ac5);
  criterion("AC6", "Stampacchia extinction increment", ac6);
  criterion("AC7", "stability eigen-oracle", ac7);
  criterion("AC8", "Caccioppoli truncation consistency", ac8);
  criterion("AC9", "contradiction sweep, mixed power", ac9);
  criterion("AC10", "contradiction sweep, exponential", ac10);
  criterion("AC11", "discrete variational consistency", ac11);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
