#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace oracle {

// Exact fractions over 64-bit integers, reduced after every operation.
class Frac {
 public:
  constexpr Frac(std::int64_t n = 0, std::int64_t d = 1) : n_(n), d_(d) { normalize(); }

  std::int64_t num() const { return n_; }
  std::int64_t den() const { return d_; }
  double value() const { return static_cast<double>(n_) / static_cast<double>(d_); }

  friend Frac operator+(Frac a, Frac b) { return {a.n_ * b.d_ + b.n_ * a.d_, a.d_ * b.d_}; }
  friend Frac operator-(Frac a, Frac b) { return {a.n_ * b.d_ - b.n_ * a.d_, a.d_ * b.d_}; }
  friend Frac operator*(Frac a, Frac b) { return {a.n_ * b.n_, a.d_ * b.d_}; }
  friend Frac operator/(Frac a, Frac b) {
    if (b.n_ == 0) throw std::domain_error("division by zero fraction");
    return {a.n_ * b.d_, a.d_ * b.n_};
  }
  friend bool operator==(Frac a, Frac b) { return a.n_ == b.n_ && a.d_ == b.d_; }
  friend bool operator<(Frac a, Frac b) { return a.n_ * b.d_ < b.n_ * a.d_; }

 private:
  constexpr void normalize() {
    if (d_ < 0) {
      n_ = -n_;
      d_ = -d_;
    }
    const std::int64_t g = std::gcd(n_ < 0 ? -n_ : n_, d_);
    if (g > 1) {
      n_ /= g;
      d_ /= g;
    }
  }
  std::int64_t n_;
  std::int64_t d_;
};

}  // namespace oracle
