#include "aniso/reports.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace aniso {

using nlohmann::json;

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json opt(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

json interval(const Interval& i) { return json::array({num(i.lower), num(i.upper)}); }

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

}  // namespace

json to_json(const ThresholdReport& r) {
  json j;
  j["pbar"] = num(r.pbar);
  j["pstar"] = opt(r.pstar);
  j["q"] = num(r.q);
  j["l1"] = num(r.l1);
  j["l2"] = opt(r.l2);
  j["l3"] = opt(r.l3);
  j["regionA"] = interval(r.regionA);
  j["regionB"] = interval(r.regionB);
  j["regionC"] = interval(r.regionC);
  j["regionJ"] = interval(r.regionJ);
  j["regionI"] = interval(r.regionI);
  j["regionILowerBounds"] = numbers(r.regionILowerBounds);
  j["regionIDefined"] = r.regionIDefined;
  j["deltaInA"] = r.deltaInA;
  j["deltaInI"] = r.deltaInI;
  j["gammaInI"] = r.gammaInI;
  j["MInB"] = r.MInB;
  j["MInC"] = r.MInC;
  j["MInJ"] = r.MInJ;
  j["betaWindow"] = interval(r.betaWindow);
  j["beta"] = opt(r.beta);
  j["decayExponents"] = numbers(r.decayExponents);
  j["hypothesesThm3_2"] = r.hypothesesThm3_2;
  j["hypothesesThm3_3"] = r.hypothesesThm3_3;
  j["hypothesesThm3_4"] = r.hypothesesThm3_4;
  j["hypothesesThm3_5"] = r.hypothesesThm3_5;
  j["strictAnisotropy"] = r.strictAnisotropy;
  j["betaAdmissible"] = r.betaAdmissible;
  j["theoremApplicable"] = std::string(to_string(r.theoremApplicable));
  return j;
}

json to_json(const IntegrabilityThresholds& t) {
  json j;
  j["pbarBelowN"] = t.pbarBelowN;
  j["m_exist"] = opt(t.m_exist);
  j["m_bounded"] = opt(t.m_bounded);
  j["p_max"] = num(t.p_max);
  j["r_threshold_at_2pN"] = num(t.r_threshold(2.0 * t.p_max));
  return j;
}

json to_json(const TruncationReport& r) {
  json j;
  j["k"] = r.k;
  j["alpha"] = num(r.alpha);
  j["samples"] = r.samples;
  j["propertyA"] = r.propertyA;
  j["propertyB"] = r.propertyB;
  j["propertyC"] = r.propertyC;
  j["continuity"] = r.continuity;
  j["allPass"] = r.all_pass();
  j["propertyBConstants"] = numbers(r.propertyBConstants);
  j["maxPropertyCError"] = num(r.maxPropertyCError);
  j["maxKnotJump"] = num(r.maxKnotJump);
  json v = json::array();
  for (const auto& x : r.violations) {
    v.push_back({{"property", x.property}, {"t", num(x.t)}, {"lhs", num(x.lhs)}, {"rhs", num(x.rhs)}});
  }
  j["violations"] = v;
  return j;
}

json to_json(const LadderReport& r) {
  json j;
  json levels = json::array();
  for (const auto& l : r.levels) {
    levels.push_back({{"n", l.n},
                      {"fixedPointResidual", num(l.fixedPointResidual)},
                      {"supNorm", num(l.supNorm)},
                      {"interiorMin", num(l.interiorMin)},
                      {"monotonicityDefect", opt(l.monotonicityDefect)},
                      {"iterations", l.iterations},
                      {"levelSetR", num(l.levelSets.r)},
                      {"levelSetBeta", num(l.levelSets.beta)},
                      {"levelSetC", num(l.levelSets.C)},
                      {"levelSetLogSpread", num(l.levelSets.logSpread)},
                      {"levelSetMaxViolationRatio", num(l.levelSets.maxViolationRatio)},
                      {"levelSetWithinTolerance", l.levelSets.withinTolerance}});
  }
  j["levels"] = levels;
  j["maxMonotonicityDefect"] = num(r.maxMonotonicityDefect);
  j["interiorMinNonDecreasing"] = r.interiorMinNonDecreasing;
  j["boundednessExpected"] = r.boundednessExpected;
  j["supNormIncrementsShrinking"] = r.supNormIncrementsShrinking;
  j["failedLevel"] = r.failedLevel ? json(*r.failedLevel) : json(nullptr);
  j["failureKind"] = r.failureKind ? json(std::string(to_string(*r.failureKind))) : json(nullptr);
  j["failure"] = r.failure;
  j["weakTests"] = r.weak.tests;
  j["weakMaxLevelResidual"] = num(r.weak.maxLevelResidual);
  j["weakMaxLimitResidual"] = num(r.weak.maxLimitResidual);
  j["weakScale"] = num(r.weak.scale);
  if (r.epsilon) {
    j["epsilon"] = num(r.epsilon->epsilon);
    j["epsilonEnergy"] = num(r.epsilon->energy);
    j["epsilonEnergyFinite"] = r.epsilon->energyFinite;
    j["epsilonBoundaryClearance"] = num(r.epsilon->boundaryClearance);
    j["epsilonSupportAwayFromBoundary"] = r.epsilon->supportAwayFromBoundary;
  }
  return j;
}

json to_json(const StabilityReport& r) {
  json j;
  j["index"] = num(r.index);
  j["indexInfinite"] = std::isinf(r.index);
  j["muMin"] = num(r.muMin);
  j["stable"] = r.stable;
  j["gap"] = num(r.gap);
  j["iterations"] = r.iterations;
  j["shift"] = num(r.shift);
  j["minimizer"] = r.minimizer;
  return j;
}

json to_json(const CaccioppoliReport& r) {
  json j;
  j["lhs"] = num(r.lhs);
  j["rhs"] = num(r.rhs);
  j["logLhs"] = opt(r.logLhs);
  j["gradientTerm"] = num(r.gradientTerm);
  j["nonlinearTerm"] = num(r.nonlinearTerm);
  j["coefficient"] = num(r.coefficient);
  j["alpha"] = num(r.alpha);
  j["epsilon"] = num(r.epsilon);
  j["beta"] = opt(r.beta);
  j["k"] = r.k ? json(*r.k) : json(nullptr);
  j["C"] = num(r.C);
  j["rangeSatisfied"] = r.rangeSatisfied;
  j["rangeCondition"] = r.rangeCondition;
  j["satisfied"] = r.satisfied;
  j["firstViolatingR"] = opt(r.firstViolatingR);
  return j;
}

json to_json(const SweepReport& r) {
  json j;
  j["case"] = std::string(to_string(r.caseUsed));
  j["beta"] = num(r.beta);
  j["exponentE"] = num(r.exponentE);
  j["decay"] = numbers(r.decay);
  j["firstViolatingR"] = opt(r.firstViolatingR);
  j["lhsSlope"] = num(r.lhsSlope);
  j["ratioSlope"] = num(r.ratioSlope);
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"R", num(row.R)}, {"lhs", num(row.lhs)}, {"rhs", num(row.rhs)},
                    {"ratio", num(row.ratio)}});
  }
  j["rows"] = rows;
  return j;
}

json to_json(const NonexistenceCertificate& c) {
  json j;
  j["theoremApplicable"] = std::string(to_string(c.thresholds.theoremApplicable));
  j["thresholds"] = to_json(c.thresholds);
  j["beta"] = num(c.beta.beta);
  j["betaCandidatesTried"] = c.beta.candidatesTried;
  j["decayExponents"] = numbers(c.beta.decay);
  j["sweep"] = to_json(c.sweep);
  j["firstViolatingR"] = opt(c.sweep.firstViolatingR);
  j["rangeSatisfied"] = c.rangeSatisfied;
  j["rangeCondition"] = c.rangeCondition;
  j["conclusion"] = c.conclusion;
  return j;
}

std::string sweep_csv(const SweepReport& r) {
  std::ostringstream os;
  os << "R,lhs,rhs,ratio\n";
  char buf[128];
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", row.R, row.lhs, row.rhs, row.ratio);
    os << buf;
  }
  return os.str();
}

}  // namespace aniso
