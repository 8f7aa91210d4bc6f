#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "aniso/error.hpp"
#include "aniso/exponents.hpp"
#include "oracles/rational.hpp"

using namespace aniso;
using oracle::Frac;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidInput;
}

ExponentData random_exponents(std::mt19937_64& rng, int N) {
  std::uniform_real_distribution<double> pd(2.05, 6.0);
  std::vector<double> p(N);
  for (auto& x : p) x = pd(rng);
  std::sort(p.begin(), p.end());
  return ExponentData::from(p);
}

}  // namespace

TEST_CASE("harmonic mean and Sobolev exponent examples") {
  const std::vector<double> p222 = {2, 2, 2};
  CHECK(harmonic_mean(p222, 3) == doctest::Approx(2.0).epsilon(1e-15));
  const std::vector<double> p234 = {2, 3, 4};
  CHECK(harmonic_mean(p234, 3) == doctest::Approx(36.0 / 13.0).epsilon(1e-15));
  const std::vector<double> p22 = {2, 2};
  CHECK(harmonic_mean(p22, 2) == doctest::Approx(2.0));

  CHECK(sobolev_exponent(ExponentData::from({2, 3, 4})) == doctest::Approx(36.0).epsilon(1e-13));
  CHECK(sobolev_exponent(ExponentData::from({2, 2, 2})) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(kind_of([] { sobolev_exponent(ExponentData::from({3, 3})); }) ==
        ErrorKind::UndefinedExponent);

  CHECK(kind_of([] { harmonic_mean(std::vector<double>{}); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([] { harmonic_mean(std::vector<double>{2, 0}); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([] { ExponentData::from({3, 2}); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([] { ExponentData::from({1.5, 2}); }) == ErrorKind::InvalidInput);
}

TEST_CASE("harmonic mean identity on random vectors") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const auto e = random_exponents(rng, 1 + t % 3);
    double inv = 0.0;
    for (double pi : e.p) inv += 1.0 / pi;
    CHECK(std::abs(1.0 / e.pbar - inv / e.N) <= 1e-12);
    CHECK(e.pstar.has_value() == (e.pbar < e.N));
  }
}

TEST_CASE("beta windows") {
  const auto e = ExponentData::from({2, 3, 4});
  auto w = beta_window(ProblemSpec::mixed_power(e, 10, 10));
  CHECK(w.l1 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(w.upper == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
  w = beta_window(ProblemSpec::exp_singular(e, 0.2));
  CHECK(w.upper == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  // l1 = 0 and l2 = 6/6 - 1 = 0.
  w = beta_window(ProblemSpec::mixed_power(ExponentData::from({3, 3, 3}), 3, 3));
  CHECK(std::abs(w.l1) < 1e-15);
  CHECK(std::abs(w.upper) < 1e-15);
  CHECK(w.empty());
}

TEST_CASE("region endpoints against exact fractions") {
  const auto r = region_memberships(ProblemSpec::mixed_power(ExponentData::from({2, 3, 4}), 10, 10));
  const Frac N = 3, q = 3, q1 = q - 1;
  const Frac p[3] = {2, 3, 4};
  for (int i = 0; i < 3; ++i) {
    const Frac lb = N * N * q1 * (p[i] - 1) / (p[i] * (N * q1 + 4) - N * N * q1);
    CHECK(std::abs(r.regionILowerBounds[i] - lb.value()) <= 1e-12);
  }
  CHECK(Frac(18, 2) == Frac(9));
  CHECK(std::abs(r.regionILowerBounds[2] - Frac(54, 22).value()) <= 1e-12);
  CHECK(std::abs(r.regionA.lower - 4.5) <= 1e-12);
  CHECK(std::abs(r.regionB.upper - (Frac(4) / (N * q1 * 3)).value()) <= 1e-12);
  CHECK(std::abs(r.regionC.upper - Frac(1, 3).value()) <= 1e-12);
  CHECK(std::abs(r.regionJ.upper - Frac(2, 9).value()) <= 1e-12);
  CHECK(r.theoremApplicable == Theorem::Thm3_4);
  CHECK(r.deltaInA);
  CHECK(r.deltaInI);

  const auto rx = region_memberships(ProblemSpec::exp_singular(ExponentData::from({2, 3, 4}), 0.2));
  CHECK(rx.theoremApplicable == Theorem::Thm3_5);
  CHECK(rx.MInJ);
  CHECK_FALSE(region_memberships(ProblemSpec::exp_singular(ExponentData::from({2, 3, 4}), 0.5)).MInJ);
}

TEST_CASE("membership booleans are re-derivable from the endpoints") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dd(0.1, 40.0);
  for (int t = 0; t < 300; ++t) {
    const auto e = random_exponents(rng, 1 + t % 3);
    const double d = dd(rng);
    const auto r = region_memberships(ProblemSpec::mixed_power(e, d, d));
    CHECK(r.deltaInA == (d > r.regionA.lower * (1 + 1e-9)));
    if (r.regionIDefined) CHECK(r.deltaInI == (d > r.regionI.lower * (1 + 1e-9)));
    else CHECK_FALSE(r.deltaInI);
    CHECK(r.hypothesesThm3_4 == (d >= 1.0 && r.deltaInA && r.deltaInI));
  }
}

TEST_CASE("endpoints count as outside") {
  const auto e = ExponentData::from({2, 3, 4});
  CHECK_FALSE(region_memberships(ProblemSpec::mixed_power(e, 4.5, 20)).deltaInA);
  CHECK_FALSE(region_memberships(ProblemSpec::mixed_power(e, 4.5 + 1e-12, 20)).deltaInA);
  CHECK(region_memberships(ProblemSpec::mixed_power(e, 4.5 + 1e-6, 20)).deltaInA);
  CHECK_FALSE(region_memberships(ProblemSpec::mixed_power(e, 9, 9)).deltaInI);
  CHECK_FALSE(region_memberships(ProblemSpec::exp_singular(e, 2.0 / 9.0)).MInJ);
  const Interval open{0.0, 1.0};
  CHECK_FALSE(open.contains(0.0));
  CHECK_FALSE(open.contains(1.0));
  CHECK(open.contains(0.5));
}

TEST_CASE("theta exponents and conjugacy") {
  const auto spec = ProblemSpec::mixed_power(ExponentData::from({2, 3, 4}), 10, 10);
  const double beta = 7.0 / 3.0;
  CHECK(theta_exponents(beta, spec, 0).thetaPrime == doctest::Approx(50.0 / 33.0).epsilon(1e-14));
  CHECK(theta_exponents(beta, spec, 2).thetaPrime == doctest::Approx(50.0 / 39.0).epsilon(1e-14));
  CHECK(kind_of([&] { theta_exponents(0.5, spec, 0); }) == ErrorKind::OutOfWindow);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> un(0.0, 1.0);
  for (int t = 0; t < 300; ++t) {
    const auto e = random_exponents(rng, 1 + t % 3);
    const double d = 0.5 + 30 * un(rng);
    const double g = d + 10 * un(rng);
    const auto s = ProblemSpec::mixed_power(e, d, g);
    const double b = l1(e) + 0.01 + 5 * un(rng);
    for (int i = 0; i < e.N; ++i) {
      const auto th = theta_exponents(b, s, i);
      const auto ze = zeta_exponents(b, s, i);
      CHECK(std::abs(1.0 / th.theta + 1.0 / th.thetaPrime - 1.0) <= 1e-12);
      CHECK(std::abs(1.0 / ze.theta + 1.0 / ze.thetaPrime - 1.0) <= 1e-12);
    }
    const auto x = ProblemSpec::exp_singular(e, 0.01 + un(rng));
    for (int i = 0; i < e.N; ++i) {
      const auto ex = exp_exponents(b, x, i);
      CHECK(std::abs(1.0 / ex.theta + 1.0 / ex.thetaPrime - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("decay exponents near l2 for delta = gamma = 10") {
  const auto spec = ProblemSpec::mixed_power(ExponentData::from({2, 3, 4}), 10, 10);
  const double beta = 7.0 / 3.0 - 1e-12;
  const auto d = decay_exponents(beta, spec, CaccioppoliCase::C5_2_3);
  // 3 - p_i (50/3)/(9 + p_i), exactly.
  const Frac want[3] = {Frac(3) - Frac(2) * Frac(50, 3) / Frac(11),
                        Frac(3) - Frac(3) * Frac(50, 3) / Frac(12),
                        Frac(3) - Frac(4) * Frac(50, 3) / Frac(13)};
  CHECK(want[0] == Frac(-1, 33));
  CHECK(want[1] == Frac(-7, 6));
  CHECK(want[2] == Frac(-83, 39));
  for (int i = 0; i < 3; ++i) CHECK(std::abs(d[i] - want[i].value()) <= 1e-9);

  const auto sel = select_beta(spec);
  CHECK(sel.beta < 7.0 / 3.0);
  CHECK(sel.beta > 7.0 / 3.0 - 1e-5);
  for (double x : sel.decay) CHECK(x < 0.0);

  const auto xsel = select_beta(ProblemSpec::exp_singular(ExponentData::from({2, 3, 4}), 0.2));
  CHECK(xsel.decay[0] == doctest::Approx(-4.0 / 3.0).epsilon(1e-5));
}

TEST_CASE("l2 increases in delta, l3 decreases in M") {
  const auto e = ExponentData::from({2, 3, 4});
  double prev = -1e300;
  for (int j = 1; j <= 200; ++j) {
    const double v = l2(e, 0.1 * j);
    CHECK(v > prev);
    prev = v;
  }
  prev = 1e300;
  for (int j = 1; j <= 200; ++j) {
    const double v = l3(e, 0.01 * j);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("window ordering") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> un(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    const auto e = random_exponents(rng, 1 + t % 3);
    const auto r0 = region_memberships(ProblemSpec::mixed_power(e, 1, 1));
    const double a = r0.regionA.lower;
    const double d = a * (0.2 + 1.6 * un(rng));
    if (std::abs(d - a) < 1e-6 * a) continue;
    const bool inA = region_memberships(ProblemSpec::mixed_power(e, d, d)).deltaInA;
    const double L2 = l2(e, d);
    CHECK(inA == (L2 > l1(e) && L2 > 0.0));

    const double M = 0.5 * un(rng) + 1e-3;
    const auto rx = region_memberships(ProblemSpec::exp_singular(e, M));
    if (rx.MInJ) {
      CHECK(*rx.l3 > rx.l1);
      CHECK(*rx.l3 > 0.0);
    }
  }
}

TEST_CASE("consistency: a certified theorem always yields a beta") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> un(0.0, 1.0);
  int certified = 0, gaps = 0;
  for (int t = 0; t < 600; ++t) {
    const auto e = random_exponents(rng, 1 + t % 3);
    const auto base = region_memberships(ProblemSpec::mixed_power(e, 1, 1));
    const double lo = std::max(base.regionA.lower, base.regionIDefined ? base.regionI.lower : 1.0);
    const double d = std::max(1.0, lo) * (0.8 + 1.5 * un(rng));
    const double g = d * (1.0 + (t % 2) * un(rng));
    const auto spec = ProblemSpec::mixed_power(e, d, g);
    const auto r = region_memberships(spec);
    if (r.theoremApplicable != Theorem::None) {
      ++certified;
      const auto sel = select_beta(spec);
      CHECK(sel.beta > r.l1);
      CHECK(sel.beta < *r.l2);
      for (double x : sel.decay) CHECK(x < 0.0);
    } else if (r.hypothesesThm3_3) {
      ++gaps;
    }
    const auto xs = ProblemSpec::exp_singular(e, un(rng));
    if (region_memberships(xs).theoremApplicable == Theorem::Thm3_5) {
      ++certified;
      CHECK_NOTHROW(select_beta(xs));
    }
  }
  CHECK(certified > 100);
  MESSAGE("certified draws: " << certified << ", Thm3_3 hypotheses without admissible beta: " << gaps);
}

TEST_CASE("decay exponent vanishes at l2 when delta sits on the I_i endpoint") {
  const auto e = ExponentData::from({2, 3, 4});
  const auto r = region_memberships(ProblemSpec::mixed_power(e, 10, 10));
  for (int i = 0; i < 3; ++i) {
    const double d = r.regionILowerBounds[i];
    const auto spec = ProblemSpec::mixed_power(e, d, d + 1);
    const double up = l2(e, d);
    if (!(up > l1(e))) continue;
    const double decay = decay_exponents(up - 1e-9 * (up - l1(e)), spec, CaccioppoliCase::C5_2_1)[i];
    CHECK(std::abs(decay) <= 1e-6);
  }
}

TEST_CASE("integrability thresholds") {
  auto t = integrability_thresholds(ExponentData::from({2, 3, 4}));
  CHECK(*t.m_exist == doctest::Approx(36.0 / 35.0).epsilon(1e-14));
  CHECK(*t.m_bounded == doctest::Approx(13.0 / 12.0).epsilon(1e-14));
  t = integrability_thresholds(ExponentData::from({2, 2, 2}));
  CHECK(*t.m_exist == doctest::Approx(1.2).epsilon(1e-14));
  CHECK(*t.m_bounded == doctest::Approx(1.5).epsilon(1e-14));
  t = integrability_thresholds(ExponentData::from({3, 3}));
  CHECK_FALSE(t.pbarBelowN);
  CHECK(t.r_threshold(6.0) == doctest::Approx(2.0));
}

TEST_CASE("mixed power requires 0 < delta <= gamma") {
  const auto e = ExponentData::from({2, 3});
  CHECK(kind_of([&] { ProblemSpec::mixed_power(e, 3, 2); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([&] { ProblemSpec::mixed_power(e, -1, 2); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([&] { ProblemSpec::exp_singular(e, 0); }) == ErrorKind::InvalidInput);
  CHECK(ExponentData::from({2, 3}).strictly_above_two() == false);
  CHECK(ExponentData::from({2.5, 3}).strictly_above_two());
}
