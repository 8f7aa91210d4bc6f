#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aniso {

/// The truncated test-function builders a_k and b_k. On [1/k, inf) they are
/// the powers t^{(1-alpha)/2} and t^{-alpha}; below the knot they are the
/// tangent lines at t = 1/k, so both are C^1, positive and decreasing.
class TruncationPair {
 public:
  /// k >= 1, alpha > 1. The nonexistence argument additionally needs
  /// alpha > p_N - 1; see `admissible_for`.
  TruncationPair(int k, double alpha);

  int k() const { return k_; }
  double alpha() const { return alpha_; }
  double knot() const { return knot_; }
  bool admissible_for(double p_max) const { return alpha_ > p_max - 1.0; }

  double a(double t) const;
  double a_prime(double t) const;
  double b(double t) const;
  double b_prime(double t) const;

  /// (alpha-1)^2/(4 alpha), the constant tying a_k'^2 to |b_k'|.
  double derivative_ratio() const;

 private:
  int k_;
  double alpha_;
  double knot_;
  // Linear pieces: a = a_slope_ * (t + a_shift_), b = b_slope_ * (t - b_shift_).
  double a_slope_;
  double a_shift_;
  double b_slope_;
  double b_shift_;
};

struct PropertyViolation {
  std::string property;  // "a", "b", "c", "continuity"
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct TruncationReport {
  int k = 0;
  double alpha = 0.0;
  std::size_t samples = 0;
  bool propertyA = true;
  bool propertyB = true;
  bool propertyC = true;
  bool continuity = true;
  /// sup over sampled t > 0 of the property-(b) quotient, one entry per p_i.
  std::vector<double> propertyBConstants;
  double maxPropertyCError = 0.0;  // relative
  double maxKnotJump = 0.0;        // relative, values and derivatives
  std::vector<PropertyViolation> violations;

  bool all_pass() const { return propertyA && propertyB && propertyC && continuity; }
};

/// Checks properties (a)-(c) and knot continuity on the supplied samples.
/// Violations are collected, never thrown.
TruncationReport verify_properties(const TruncationPair& tp, std::span<const double> samples,
                                   std::span<const double> p);

/// Log-spaced samples on [0, t_max] that straddle the knot, including t = 0,
/// the knot itself and points down to 1e-12 to probe t -> 0+.
std::vector<double> default_samples(const TruncationPair& tp, std::size_t count,
                                    double t_max = 1e6);

}  // namespace aniso
