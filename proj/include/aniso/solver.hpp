#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "aniso/error.hpp"
#include "aniso/exponents.hpp"
#include "aniso/grid.hpp"
#include "aniso/newton.hpp"

namespace aniso {

/// Nonnegative weight g on the grid; `m` is the claimed integrability
/// exponent (metadata only, +inf for bounded weights). g == 0 is allowed.
struct WeightSpec {
  GridField g;
  double m = std::numeric_limits<double>::infinity();

  WeightSpec(GridField g, double m = std::numeric_limits<double>::infinity());
  static WeightSpec constant(const Grid& grid, double c);
  /// g(x) = |x - center|^{-s}, +inf at the center node itself; m is left at
  /// the caller's claim.
  static WeightSpec radial_power(const Grid& grid, double s, std::array<double, kMaxDim> center,
                                 double m);
};

struct RegularizationLevel {
  int n = 1;
  GridField g_n;       // min(g, n)
  double shift = 1.0;  // 1/n

  static RegularizationLevel make(int n, const WeightSpec& w);
};

/// e^{1/(max(u,0) + shift)} times g_n, the right side of the level problem.
/// Below zero the nonlinearity is frozen at its value at 0, which keeps the
/// level energy convex; solutions are positive so the extension is inert.
SourceTerm level_source(const RegularizationLevel& level);

/// sum_i (1/p_i) int |D_i u|^{p_i} - int rhs u.
double inner_energy(const GridField& u, const GridField& rhs, const ExponentData& e);

struct InnerOptions {
  double tol = 0.0;  // 0 selects 1e-10 when every p_i = 2, else 1e-8
  int maxIter = 10000;
};
double default_inner_tol(const ExponentData& e);

struct InnerResult {
  GridField u;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> energy;
};

/// Minimizer of inner_energy with zero boundary values. The stopping test is
/// sup |plap(u) - rhs| <= tol * max(1, sup |rhs|) on interior nodes.
InnerResult solve_inner(const GridField& rhs, const ExponentData& e, const InnerOptions& opt = {},
                        std::optional<GridField> initial = std::nullopt);

/// A(v): solve_inner with rhs = g_n e^{1/(|v| + 1/n)}, started from
/// `initial` (zero by default).
GridField apply_A(const GridField& v, const RegularizationLevel& level, const ExponentData& e,
                  const InnerOptions& opt = {}, std::optional<GridField> initial = std::nullopt);

enum class LevelStrategy { ConvexNewton, FixedPoint };
std::string_view to_string(LevelStrategy s);

struct LevelOptions {
  LevelStrategy strategy = LevelStrategy::ConvexNewton;
  double tolFix = 1e-8;
  int maxOuter = 200;
  InnerOptions inner;
};

struct LevelResult {
  GridField u;
  double fixedPointResidual = 0.0;  // sup |A(u) - u|
  int iterations = 0;               // Newton steps or outer sweeps
  LevelStrategy strategy = LevelStrategy::ConvexNewton;
};

/// Fixed point u = A(u) of one level. ConvexNewton minimizes the level
/// energy directly; FixedPoint iterates u <- A(u) from u = 0 and throws
/// NonConvergenceError when the sweep changes stop contracting.
LevelResult solve_level(const RegularizationLevel& level, const WeightSpec& w,
                        const ExponentData& e, const LevelOptions& opt = {},
                        std::optional<GridField> initial = std::nullopt);

struct LevelSetFit {
  double r = 0.0;
  double beta = 0.0;
  double C = 0.0;                 // smallest constant valid on all fit pairs
  double logSpread = 0.0;         // log(max/min) of the per-pair constants
  std::vector<double> levels;     // k_j
  std::vector<double> measures;   // |A(k_j)|
  double maxViolationRatio = 0.0; // holdout pairs: measured / fitted bound
  bool withinTolerance = true;    // maxViolationRatio <= 1.05
};

/// Fit of |A(h)| <= C |A(k)|^beta / (h-k)^r with (r, beta) from the
/// integrability exponent m, on levels k_j = j max(u)/count. The bound is
/// then checked on a ladder of 2 count levels, which interleaves new levels
/// between the fitted ones.
LevelSetFit level_set_fit(const GridField& u, const ExponentData& e, double m, int count = 16);

struct EpsilonMembership {
  double epsilon = 0.0;
  double energy = 0.0;              // gradient energy of (u - eps)^+
  bool energyFinite = false;
  double boundaryClearance = 0.0;   // min distance from supp (u-eps)^+ to the boundary
  bool supportAwayFromBoundary = false;
};
EpsilonMembership epsilon_membership(const GridField& u, const ExponentData& e, double epsilon);

struct LevelSummary {
  int n = 0;
  double fixedPointResidual = 0.0;
  double supNorm = 0.0;
  double interiorMin = 0.0;
  std::optional<double> monotonicityDefect;  // max (u_n - u_{n+1})^+, absent on the last level
  int iterations = 0;
  LevelSetFit levelSets;
};

struct WeakResidualReport {
  int tests = 0;
  double maxLevelResidual = 0.0;  // against the level-n problem
  double maxLimitResidual = 0.0;  // against g e^{1/u}, reported only
  double scale = 0.0;             // max over tests of int |source| |phi|
};

struct LadderOptions {
  int nMax = 6;
  LevelOptions level;
  int weakTests = 20;
  std::uint64_t seed = 12345;
  double epsilonFraction = 0.1;  // epsilon = fraction * max u_nMax
};

struct LadderReport {
  std::vector<LevelSummary> levels;
  double maxMonotonicityDefect = 0.0;
  bool interiorMinNonDecreasing = true;
  bool boundednessExpected = false;  // m above the uniform-bound threshold
  bool supNormIncrementsShrinking = false;
  std::optional<int> failedLevel;
  std::optional<ErrorKind> failureKind;
  std::string failure;
  std::optional<GridField> limit;    // u_nMax
  WeakResidualReport weak;
  std::optional<EpsilonMembership> epsilon;
};

/// u_1 ... u_nMax with the Lemma-style diagnostics. A failing level stops the
/// ladder and is recorded instead of thrown.
LadderReport run_ladder(const WeightSpec& w, const ExponentData& e, const LadderOptions& opt = {});

/// Minimum of u over the centered box of half the side length.
double interior_min(const GridField& u);

/// Extinction level k* = k0 + d for phi(h) <= C phi(k)^beta / (h-k)^r, with
/// d^r = C phi0^{beta-1} 2^{r beta/(beta-1)}. Throws InvalidInput for beta <= 1.
double stampacchia_extinction(double C, double beta, double r, double k0, double phi0);

struct StampacchiaCheck {
  double d = 0.0;
  double kStar = 0.0;
  int steps = 0;
  double finalBound = 0.0;      // phi0 2^{-j r/(beta-1)} at the last step
  double maxRelativeGap = 0.0;  // worst-case recursion vs the bound
  bool confirmed = false;
};

/// Runs k_{j+1} = k_j + d 2^{-(j+1)} with the worst-case recursion
/// phi_{j+1} = C phi_j^beta / (k_{j+1} - k_j)^r (in log space) until the
/// bound phi0 2^{-j r/(beta-1)} drops below `floor`, checking phi_j never
/// exceeds it.
StampacchiaCheck stampacchia_verify(double C, double beta, double r, double k0, double phi0,
                                    double floor = 1e-12);

}  // namespace aniso
