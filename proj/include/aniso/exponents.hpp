#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace aniso {

/// Anisotropy vector p_1 <= ... <= p_N together with every scalar derived
/// from it. `from()` validates the ordering but never sorts.
struct ExponentData {
  std::vector<double> p;
  int N = 0;
  double pbar = 0.0;             // harmonic mean
  std::optional<double> pstar;   // N pbar / (N - pbar), only when pbar < N
  double q = 0.0;                // arithmetic mean

  /// Requires p non-empty, ascending and every entry >= 2.
  static ExponentData from(std::vector<double> p);

  double p_max() const { return p.back(); }
  /// The nonexistence theory assumes 2 < p_1; thresholds are still computed
  /// when p_1 == 2, this only reports whether the strict assumption holds.
  bool strictly_above_two() const { return p.front() > 2.0; }
};

double harmonic_mean(std::span<const double> p);
/// Same, with an explicit dimension that must match p.size().
double harmonic_mean(std::span<const double> p, int N);
/// Throws UndefinedExponent when pbar >= N.
double sobolev_exponent(const ExponentData& e);

struct MixedPower {
  double delta = 0.0;
  double gamma = 0.0;
};
struct ExpSingular {
  double M = 0.0;
};

struct ProblemSpec {
  std::variant<MixedPower, ExpSingular> kind;
  double weight_floor = 1.0;  // c with g >= c > 0
  ExponentData exponents;

  static ProblemSpec mixed_power(ExponentData e, double delta, double gamma,
                                 double weight_floor = 1.0);
  static ProblemSpec exp_singular(ExponentData e, double M, double weight_floor = 1.0);

  bool is_mixed_power() const { return std::holds_alternative<MixedPower>(kind); }
  const MixedPower& mixed() const;
  const ExpSingular& exp() const;
};

/// Open interval (lower, upper); upper may be +inf.
struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool empty() const { return !(upper > lower); }
  /// Strict membership with a relative guard band of 1e-9 around each
  /// finite endpoint: points on (or numerically at) an endpoint are outside.
  bool contains(double x) const;
};

inline constexpr double kMembershipTolerance = 1e-9;

double l1(const ExponentData& e);
double l2(const ExponentData& e, double delta);
double l3(const ExponentData& e, double M);

struct BetaWindow {
  double l1 = 0.0;
  double upper = 0.0;  // l2 (mixed power) or l3 (exp singular)
  bool empty() const { return !(upper > l1); }
  Interval interval() const { return {l1, upper}; }
};

/// (l1, l2) for the mixed-power nonlinearity, (l1, l3) for the exponential
/// one. An empty window is reported, not rejected. Throws when q <= 1.
BetaWindow beta_window(const ProblemSpec& spec);

enum class Theorem { Thm3_2, Thm3_3, Thm3_4, Thm3_5, None };
std::string_view to_string(Theorem t);

/// Which Caccioppoli inequality a nonexistence argument runs through.
enum class CaccioppoliCase { C5_2_1, C5_2_2, C5_2_3, C5_3 };
std::string_view to_string(CaccioppoliCase c);
CaccioppoliCase case_for(Theorem t);

struct ThresholdReport {
  double pbar = 0.0;
  std::optional<double> pstar;
  double q = 0.0;
  double l1 = 0.0;
  std::optional<double> l2;
  std::optional<double> l3;

  Interval regionA;
  Interval regionB;
  Interval regionC;
  Interval regionJ;
  Interval regionI;                   // intersection of the I_i
  std::vector<double> regionILowerBounds;
  bool regionIDefined = false;        // false when some I_i denominator <= 0

  bool deltaInA = false;
  bool deltaInI = false;
  bool gammaInI = false;
  bool MInB = false;
  bool MInC = false;
  bool MInJ = false;

  Interval betaWindow;
  std::optional<double> beta;
  std::vector<double> decayExponents;

  bool hypothesesThm3_2 = false;
  bool hypothesesThm3_3 = false;
  bool hypothesesThm3_4 = false;
  bool hypothesesThm3_5 = false;
  bool strictAnisotropy = false;      // p_1 > 2
  bool betaAdmissible = false;
  Theorem theoremApplicable = Theorem::None;
};

ThresholdReport region_memberships(const ProblemSpec& spec);

struct ConjugatePair {
  double theta = 0.0;
  double thetaPrime = 0.0;
};

/// theta_i = (2b + delta + q - 1)/(2b + q - p_i), theta_i' its conjugate.
/// Throws OutOfWindow when beta <= l1.
ConjugatePair theta_exponents(double beta, const ProblemSpec& spec, int axis);
/// Same with gamma in place of delta.
ConjugatePair zeta_exponents(double beta, const ProblemSpec& spec, int axis);
/// Exponential case: (2b+q)/(2b+q-p_i) and (2b+q)/p_i.
ConjugatePair exp_exponents(double beta, const ProblemSpec& spec, int axis);
ConjugatePair case_exponents(double beta, const ProblemSpec& spec, int axis,
                             CaccioppoliCase c);

/// Power E of (psi/u) on the left of the Caccioppoli inequality.
double caccioppoli_exponent(double beta, const ProblemSpec& spec, CaccioppoliCase c);
/// N - p_i theta_i' per axis (N - 2 beta - q repeated for the exponential case).
std::vector<double> decay_exponents(double beta, const ProblemSpec& spec, CaccioppoliCase c);
/// Window in which beta may be chosen for the given case.
BetaWindow case_window(const ProblemSpec& spec, CaccioppoliCase c);

struct BetaSelection {
  double beta = 0.0;
  std::vector<double> decay;
  int candidatesTried = 0;
};

/// Picks beta inside the case window with every decay exponent negative.
/// The first candidate is upper - 1e-6 (upper - l1); when it is not
/// admissible the offset is halved toward the upper endpoint until one is.
/// Throws HypothesisViolated when no admissible beta exists.
BetaSelection select_beta(const ProblemSpec& spec, CaccioppoliCase c);
/// Uses the theorem certified by region_memberships; throws
/// HypothesisNotApplicable when none applies.
BetaSelection select_beta(const ProblemSpec& spec);

/// Integrability exponents for the weight in the existence theory.
struct IntegrabilityThresholds {
  bool pbarBelowN = false;
  std::optional<double> m_exist;    // (pstar)' = pstar/(pstar-1)
  std::optional<double> m_bounded;  // pstar/(pstar-pbar)
  double p_max = 0.0;
  /// r/(r - p_N) for r > p_N (the pbar >= N branch).
  double r_threshold(double r) const;
};

IntegrabilityThresholds integrability_thresholds(const ExponentData& e);

/// Exponents (r, beta) of the level-set recursion |A(h)| <= C|A(k)|^beta/(h-k)^r
/// that yields the uniform bound, for a weight in L^m (m may be +inf).
/// For pbar >= N the free parameter r is fixed at 2 p_N.
struct LevelSetExponents {
  double r = 0.0;
  double beta = 0.0;
};
LevelSetExponents level_set_exponents(const ExponentData& e, double m);

}  // namespace aniso
