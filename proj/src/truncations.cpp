#include "aniso/truncations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aniso/error.hpp"

namespace aniso {

namespace {

void require_nonnegative(double t) {
  require(t >= 0.0 && !std::isnan(t), ErrorKind::InvalidInput, "truncation argument must be >= 0");
}

double rel_diff(double x, double y) {
  const double scale = std::max({std::abs(x), std::abs(y), std::numeric_limits<double>::min()});
  return std::abs(x - y) / scale;
}

}  // namespace

TruncationPair::TruncationPair(int k, double alpha) : k_(k), alpha_(alpha) {
  require(k >= 1, ErrorKind::InvalidInput, "k must be a positive integer");
  require(alpha > 1.0 && std::isfinite(alpha), ErrorKind::InvalidInput, "alpha must exceed 1");
  const double kd = k;
  knot_ = 1.0 / kd;
  a_slope_ = 0.5 * (1.0 - alpha) * std::pow(kd, 0.5 * (alpha + 1.0));
  a_shift_ = (1.0 + alpha) / (kd * (1.0 - alpha));
  b_slope_ = -alpha * std::pow(kd, alpha + 1.0);
  b_shift_ = (1.0 + alpha) / (kd * alpha);
}

double TruncationPair::a(double t) const {
  require_nonnegative(t);
  if (t < knot_) return a_slope_ * (t + a_shift_);
  return std::pow(t, 0.5 * (1.0 - alpha_));
}

double TruncationPair::a_prime(double t) const {
  require_nonnegative(t);
  if (t < knot_) return a_slope_;
  return 0.5 * (1.0 - alpha_) * std::pow(t, -0.5 * (1.0 + alpha_));
}

double TruncationPair::b(double t) const {
  require_nonnegative(t);
  if (t < knot_) return b_slope_ * (t - b_shift_);
  return std::pow(t, -alpha_);
}

double TruncationPair::b_prime(double t) const {
  require_nonnegative(t);
  if (t < knot_) return b_slope_;
  return -alpha_ * std::pow(t, -alpha_ - 1.0);
}

double TruncationPair::derivative_ratio() const {
  return (alpha_ - 1.0) * (alpha_ - 1.0) / (4.0 * alpha_);
}

TruncationReport verify_properties(const TruncationPair& tp, std::span<const double> samples,
                                   std::span<const double> p) {
  TruncationReport rep;
  rep.k = tp.k();
  rep.alpha = tp.alpha();
  rep.samples = samples.size();
  rep.propertyBConstants.assign(p.size(), 0.0);

  constexpr double kTol = 1e-12;
  const double ratio = tp.derivative_ratio();

  for (double t : samples) {
    require_nonnegative(t);
    const double a = tp.a(t);
    const double ap = tp.a_prime(t);
    const double b = tp.b(t);
    const double bp = tp.b_prime(t);

    // (a) a^2 >= t b, with equality on the power piece.
    const double a2 = a * a;
    const double tb = t * b;
    if (a2 < tb * (1.0 - kTol)) {
      rep.propertyA = false;
      rep.violations.push_back({"a", t, a2, tb});
    }

    // (c) a'^2 = (alpha-1)^2/(4 alpha) |b'|.
    const double lhs_c = ap * ap;
    const double rhs_c = ratio * std::abs(bp);
    const double err_c = rel_diff(lhs_c, rhs_c);
    rep.maxPropertyCError = std::max(rep.maxPropertyCError, err_c);
    if (err_c > kTol) {
      rep.propertyC = false;
      rep.violations.push_back({"c", t, lhs_c, rhs_c});
    }

    // (b) quotient against t^{p_i - alpha - 1}; only its finiteness is asserted.
    if (t > 0.0) {
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double pi = p[i];
        const double num = std::pow(a, pi) * std::pow(std::abs(ap), 2.0 - pi) +
                           std::pow(b, pi) * std::pow(std::abs(bp), 1.0 - pi);
        // Evaluated in logs: t^{p-alpha-1} under- or overflows at the sample extremes.
        const double log_q = std::log(num) - (pi - tp.alpha() - 1.0) * std::log(t);
        const double quotient = std::exp(log_q);
        if (!std::isfinite(quotient)) {
          rep.propertyB = false;
          rep.violations.push_back({"b", t, num, std::pow(t, pi - tp.alpha() - 1.0)});
          continue;
        }
        rep.propertyBConstants[i] = std::max(rep.propertyBConstants[i], quotient);
      }
    }
  }

  // Knot: the linear piece evaluated at 1/k against the power piece.
  const double t0 = tp.knot();
  const double below = std::nextafter(t0, 0.0);
  auto jump = [&](double lin, double pw, const char* what) {
    const double d = rel_diff(lin, pw);
    rep.maxKnotJump = std::max(rep.maxKnotJump, d);
    if (d > kTol) {
      rep.continuity = false;
      rep.violations.push_back({std::string("continuity:") + what, t0, lin, pw});
    }
  };
  // One ulp below the knot the linear piece is active; its value there
  // differs from the knot value by O(ulp * slope), far below tolerance.
  jump(tp.a(below), tp.a(t0), "a");
  jump(tp.b(below), tp.b(t0), "b");
  jump(tp.a_prime(below), tp.a_prime(t0), "a'");
  jump(tp.b_prime(below), tp.b_prime(t0), "b'");

  return rep;
}

std::vector<double> default_samples(const TruncationPair& tp, std::size_t count, double t_max) {
  require(count >= 4, ErrorKind::InvalidInput, "need at least four samples");
  std::vector<double> s;
  s.reserve(count + 3);
  s.push_back(0.0);
  s.push_back(tp.knot());
  const double lo = std::log(1e-12);
  const double hi = std::log(t_max);
  for (std::size_t j = 0; j < count; ++j) {
    s.push_back(std::exp(lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(count - 1)));
  }
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace aniso
