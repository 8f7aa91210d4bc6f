#include "aniso/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "aniso/error.hpp"

namespace aniso {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool decay_all_negative(const std::vector<double>& d) {
  return std::all_of(d.begin(), d.end(), [](double x) { return x < 0.0; });
}

}  // namespace

ExponentData ExponentData::from(std::vector<double> p) {
  require(!p.empty(), ErrorKind::InvalidInput, "exponent vector is empty");
  for (std::size_t i = 0; i < p.size(); ++i) {
    require(std::isfinite(p[i]) && p[i] >= 2.0, ErrorKind::InvalidInput,
            "every p_i must be a finite value >= 2");
    if (i > 0) {
      require(p[i] >= p[i - 1], ErrorKind::InvalidInput, "p must be sorted ascending");
    }
  }
  ExponentData e;
  e.N = static_cast<int>(p.size());
  e.pbar = harmonic_mean(p);
  double sum = 0.0;
  for (double pi : p) sum += pi;
  e.q = sum / e.N;
  e.p = std::move(p);
  if (e.pbar < e.N) e.pstar = e.N * e.pbar / (e.N - e.pbar);
  return e;
}

double harmonic_mean(std::span<const double> p) {
  require(!p.empty(), ErrorKind::InvalidInput, "harmonic mean of an empty vector");
  double inv = 0.0;
  for (double pi : p) {
    require(pi > 0.0, ErrorKind::InvalidInput, "harmonic mean needs positive entries");
    inv += 1.0 / pi;
  }
  return static_cast<double>(p.size()) / inv;
}

double harmonic_mean(std::span<const double> p, int N) {
  require(N >= 1 && static_cast<std::size_t>(N) == p.size(), ErrorKind::InvalidInput,
          "dimension does not match the exponent vector");
  return harmonic_mean(p);
}

double sobolev_exponent(const ExponentData& e) {
  if (!e.pstar) {
    std::ostringstream os;
    os << "pbar = " << e.pbar << " >= N = " << e.N << ", Sobolev exponent undefined";
    throw Error(ErrorKind::UndefinedExponent, os.str());
  }
  return *e.pstar;
}

ProblemSpec ProblemSpec::mixed_power(ExponentData e, double delta, double gamma,
                                     double weight_floor) {
  require(delta > 0.0 && gamma > 0.0, ErrorKind::InvalidInput, "delta and gamma must be positive");
  require(delta <= gamma, ErrorKind::InvalidInput, "mixed power requires delta <= gamma");
  require(weight_floor > 0.0, ErrorKind::InvalidInput, "weight floor must be positive");
  return ProblemSpec{MixedPower{delta, gamma}, weight_floor, std::move(e)};
}

ProblemSpec ProblemSpec::exp_singular(ExponentData e, double M, double weight_floor) {
  require(M > 0.0, ErrorKind::InvalidInput, "M must be positive");
  require(weight_floor > 0.0, ErrorKind::InvalidInput, "weight floor must be positive");
  return ProblemSpec{ExpSingular{M}, weight_floor, std::move(e)};
}

const MixedPower& ProblemSpec::mixed() const {
  require(is_mixed_power(), ErrorKind::InvalidInput, "problem is not of mixed-power type");
  return std::get<MixedPower>(kind);
}

const ExpSingular& ProblemSpec::exp() const {
  require(!is_mixed_power(), ErrorKind::InvalidInput, "problem is not of exp-singular type");
  return std::get<ExpSingular>(kind);
}

bool Interval::contains(double x) const {
  if (empty()) return false;
  const double lo_guard = kMembershipTolerance * std::max(1.0, std::abs(lower));
  if (!(x - lower > lo_guard)) return false;
  if (std::isinf(upper)) return true;
  const double hi_guard = kMembershipTolerance * std::max(1.0, std::abs(upper));
  return upper - x > hi_guard;
}

double l1(const ExponentData& e) { return (e.p_max() - e.q) / 2.0; }

double l2(const ExponentData& e, double delta) {
  require(e.q > 1.0, ErrorKind::InvalidInput, "q must exceed 1");
  return 2.0 * delta / (e.N * (e.q - 1.0)) - (e.q - 1.0) / 2.0;
}

double l3(const ExponentData& e, double M) {
  require(e.q > 1.0, ErrorKind::InvalidInput, "q must exceed 1");
  return 2.0 / (M * e.N * (e.q - 1.0)) - (e.q - 1.0) / 2.0;
}

BetaWindow beta_window(const ProblemSpec& spec) {
  const auto& e = spec.exponents;
  if (spec.is_mixed_power()) return {l1(e), l2(e, spec.mixed().delta)};
  return {l1(e), l3(e, spec.exp().M)};
}

std::string_view to_string(Theorem t) {
  switch (t) {
    case Theorem::Thm3_2: return "Thm3_2";
    case Theorem::Thm3_3: return "Thm3_3";
    case Theorem::Thm3_4: return "Thm3_4";
    case Theorem::Thm3_5: return "Thm3_5";
    case Theorem::None: return "None";
  }
  return "None";
}

std::string_view to_string(CaccioppoliCase c) {
  switch (c) {
    case CaccioppoliCase::C5_2_1: return "C5_2_1";
    case CaccioppoliCase::C5_2_2: return "C5_2_2";
    case CaccioppoliCase::C5_2_3: return "C5_2_3";
    case CaccioppoliCase::C5_3: return "C5_3";
  }
  return "C5_2_1";
}

CaccioppoliCase case_for(Theorem t) {
  switch (t) {
    case Theorem::Thm3_2: return CaccioppoliCase::C5_2_1;
    case Theorem::Thm3_3: return CaccioppoliCase::C5_2_2;
    case Theorem::Thm3_4: return CaccioppoliCase::C5_2_3;
    case Theorem::Thm3_5: return CaccioppoliCase::C5_3;
    case Theorem::None: break;
  }
  throw Error(ErrorKind::HypothesisNotApplicable, "no theorem applies");
}

ThresholdReport region_memberships(const ProblemSpec& spec) {
  const auto& e = spec.exponents;
  const double N = e.N;
  const double q1 = e.q - 1.0;
  require(q1 > 0.0, ErrorKind::InvalidInput, "q must exceed 1");

  ThresholdReport r;
  r.pbar = e.pbar;
  r.pstar = e.pstar;
  r.q = e.q;
  r.l1 = l1(e);
  r.strictAnisotropy = e.strictly_above_two();

  const double pN = e.p_max();
  r.regionA = {N * q1 * (pN - 1.0) / 4.0, kInf};
  r.regionB = {0.0, 4.0 / (N * q1 * (pN - 1.0))};
  r.regionC = {0.0, N > 1.0 ? 4.0 / (N * (N - 1.0) * q1) : kInf};
  r.regionJ = {0.0, std::min(r.regionB.upper, r.regionC.upper)};

  r.regionIDefined = true;
  double i_lower = 0.0;
  for (double pi : e.p) {
    const double denom = pi * (N * q1 + 4.0) - N * N * q1;
    if (denom <= 0.0) {
      r.regionIDefined = false;
      r.regionILowerBounds.push_back(kInf);
      continue;
    }
    const double lb = N * N * q1 * (pi - 1.0) / denom;
    r.regionILowerBounds.push_back(lb);
    i_lower = std::max(i_lower, lb);
  }
  // Empty interval (upper == lower) when some I_i is undefined.
  r.regionI = r.regionIDefined ? Interval{i_lower, kInf} : Interval{kInf, kInf};

  const BetaWindow w = beta_window(spec);
  r.betaWindow = w.interval();

  if (spec.is_mixed_power()) {
    const auto& mp = spec.mixed();
    r.l2 = w.upper;
    r.deltaInA = r.regionA.contains(mp.delta);
    r.deltaInI = r.regionI.contains(mp.delta);
    r.gammaInI = r.regionI.contains(mp.gamma);
    const bool equal = mp.delta == mp.gamma;
    r.hypothesesThm3_2 = !equal && mp.delta >= 1.0 && r.deltaInA && r.deltaInI;
    r.hypothesesThm3_3 = !equal && r.deltaInA && r.gammaInI && mp.gamma >= 1.0;
    r.hypothesesThm3_4 = equal && mp.delta >= 1.0 && r.deltaInA && r.deltaInI;
  } else {
    const double M = spec.exp().M;
    r.l3 = w.upper;
    r.MInB = r.regionB.contains(M);
    r.MInC = r.regionC.contains(M);
    r.MInJ = r.regionJ.contains(M);
    r.hypothesesThm3_5 = r.MInJ;
  }

  std::vector<Theorem> candidates;
  if (r.hypothesesThm3_4) candidates.push_back(Theorem::Thm3_4);
  if (r.hypothesesThm3_2) candidates.push_back(Theorem::Thm3_2);
  if (r.hypothesesThm3_3) candidates.push_back(Theorem::Thm3_3);
  if (r.hypothesesThm3_5) candidates.push_back(Theorem::Thm3_5);

  for (Theorem t : candidates) {
    try {
      const BetaSelection sel = select_beta(spec, case_for(t));
      r.beta = sel.beta;
      r.decayExponents = sel.decay;
      r.betaAdmissible = true;
      r.theoremApplicable = t;
      break;
    } catch (const Error& err) {
      // Under the hypotheses of 3.3 gamma in I does not by itself make the
      // zeta decay negative at beta -> l2(delta); any other failure is a bug.
      if (t != Theorem::Thm3_3 || err.kind() != ErrorKind::HypothesisViolated) throw;
    }
  }
  return r;
}

namespace {

void require_in_window(double beta, const ProblemSpec& spec) {
  const double lo = l1(spec.exponents);
  if (!(beta > lo)) {
    std::ostringstream os;
    os << "beta = " << beta << " is not above l1 = " << lo;
    throw Error(ErrorKind::OutOfWindow, os.str());
  }
}

void require_axis(const ProblemSpec& spec, int axis) {
  require(axis >= 0 && axis < spec.exponents.N, ErrorKind::InvalidInput, "axis out of range");
}

ConjugatePair power_pair(double beta, const ProblemSpec& spec, int axis, double s) {
  require_axis(spec, axis);
  require_in_window(beta, spec);
  const auto& e = spec.exponents;
  const double pi = e.p[axis];
  const double top = 2.0 * beta + s + e.q - 1.0;
  return {top / (2.0 * beta + e.q - pi), top / (s + pi - 1.0)};
}

}  // namespace

ConjugatePair theta_exponents(double beta, const ProblemSpec& spec, int axis) {
  return power_pair(beta, spec, axis, spec.mixed().delta);
}

ConjugatePair zeta_exponents(double beta, const ProblemSpec& spec, int axis) {
  return power_pair(beta, spec, axis, spec.mixed().gamma);
}

ConjugatePair exp_exponents(double beta, const ProblemSpec& spec, int axis) {
  require_axis(spec, axis);
  require_in_window(beta, spec);
  const auto& e = spec.exponents;
  const double pi = e.p[axis];
  const double top = 2.0 * beta + e.q;
  return {top / (top - pi), top / pi};
}

ConjugatePair case_exponents(double beta, const ProblemSpec& spec, int axis,
                             CaccioppoliCase c) {
  switch (c) {
    case CaccioppoliCase::C5_2_1:
    case CaccioppoliCase::C5_2_3: return theta_exponents(beta, spec, axis);
    case CaccioppoliCase::C5_2_2: return zeta_exponents(beta, spec, axis);
    case CaccioppoliCase::C5_3: return exp_exponents(beta, spec, axis);
  }
  return {};
}

double caccioppoli_exponent(double beta, const ProblemSpec& spec, CaccioppoliCase c) {
  const double q = spec.exponents.q;
  switch (c) {
    case CaccioppoliCase::C5_2_1:
    case CaccioppoliCase::C5_2_3: return 2.0 * beta + spec.mixed().delta + q - 1.0;
    case CaccioppoliCase::C5_2_2: return 2.0 * beta + spec.mixed().gamma + q - 1.0;
    case CaccioppoliCase::C5_3: return 2.0 * beta + q;
  }
  return 0.0;
}

std::vector<double> decay_exponents(double beta, const ProblemSpec& spec, CaccioppoliCase c) {
  const auto& e = spec.exponents;
  std::vector<double> d(e.N);
  for (int i = 0; i < e.N; ++i) {
    if (c == CaccioppoliCase::C5_3) {
      require_in_window(beta, spec);
      d[i] = e.N - 2.0 * beta - e.q;
    } else {
      d[i] = e.N - e.p[i] * case_exponents(beta, spec, i, c).thetaPrime;
    }
  }
  return d;
}

BetaWindow case_window(const ProblemSpec& spec, CaccioppoliCase c) {
  const auto& e = spec.exponents;
  if (c == CaccioppoliCase::C5_3) return {l1(e), l3(e, spec.exp().M)};
  return {l1(e), l2(e, spec.mixed().delta)};
}

BetaSelection select_beta(const ProblemSpec& spec, CaccioppoliCase c) {
  const BetaWindow w = case_window(spec, c);
  if (w.empty()) throw Error(ErrorKind::HypothesisViolated, "beta window is empty");
  const double width = w.upper - w.l1;

  BetaSelection sel;
  auto try_beta = [&](double beta) {
    ++sel.candidatesTried;
    if (!(beta > w.l1) || !(beta < w.upper)) return false;
    auto d = decay_exponents(beta, spec, c);
    if (!decay_all_negative(d)) return false;
    sel.beta = beta;
    sel.decay = std::move(d);
    return true;
  };

  double offset = 1e-6 * width;
  if (try_beta(w.upper - offset)) return sel;

  // Decay exponents decrease in beta, so only candidates closer to the upper
  // endpoint can still be admissible.
  for (int j = 0; j < 80 && offset > 0.0; ++j) {
    offset *= 0.5;
    const double beta = w.upper - offset;
    if (beta >= w.upper) break;
    if (try_beta(beta)) return sel;
  }
  std::ostringstream os;
  os << "no beta in (" << w.l1 << ", " << w.upper << ") makes every decay exponent negative";
  throw Error(ErrorKind::HypothesisViolated, os.str());
}

BetaSelection select_beta(const ProblemSpec& spec) {
  const ThresholdReport r = region_memberships(spec);
  if (r.theoremApplicable == Theorem::None) {
    throw Error(ErrorKind::HypothesisNotApplicable, "no nonexistence theorem applies");
  }
  return select_beta(spec, case_for(r.theoremApplicable));
}

double IntegrabilityThresholds::r_threshold(double r) const {
  require(r > p_max, ErrorKind::InvalidInput, "r must exceed p_N");
  return r / (r - p_max);
}

IntegrabilityThresholds integrability_thresholds(const ExponentData& e) {
  IntegrabilityThresholds t;
  t.p_max = e.p_max();
  t.pbarBelowN = e.pstar.has_value();
  if (e.pstar) {
    const double ps = *e.pstar;
    t.m_exist = ps / (ps - 1.0);
    t.m_bounded = ps / (ps - e.pbar);
  }
  return t;
}

LevelSetExponents level_set_exponents(const ExponentData& e, double m) {
  require(m > 1.0, ErrorKind::InvalidInput, "integrability exponent must exceed 1");
  LevelSetExponents out;
  if (e.pstar) {
    const double ps = *e.pstar;
    const double ps_conj = ps / (ps - 1.0);
    out.r = ps;
    out.beta = std::isinf(m) ? (ps - 1.0) / (e.pbar - 1.0)
                             : (ps - 1.0) * (m - ps_conj) / (m * (e.pbar - 1.0));
  } else {
    const double r = 2.0 * e.p_max();
    const double r_conj = r / (r - 1.0);
    out.r = r;
    out.beta = std::isinf(m) ? r / (r_conj * (e.p_max() - 1.0))
                             : r * (m - r_conj) / (m * r_conj * (e.p_max() - 1.0));
  }
  return out;
}

}  // namespace aniso
