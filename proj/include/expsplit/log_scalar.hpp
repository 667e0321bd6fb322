#pragma once

#include <compare>
#include <limits>
#include <string>

#include "expsplit/real.hpp"

namespace expsplit {

/// A nonnegative magnitude g stored as log2(g).
///
/// -inf encodes g = 0 exactly. +inf is admitted as the "vacuous" sentinel used
/// for infima over an empty set. Ordering and multiplication are monotone in g.
class LogScalar {
 public:
  constexpr LogScalar() = default;

  static constexpr LogScalar zero() { return LogScalar(-std::numeric_limits<double>::infinity()); }
  static constexpr LogScalar one() { return LogScalar(0.0); }
  static constexpr LogScalar infinity() { return LogScalar(std::numeric_limits<double>::infinity()); }
  static constexpr LogScalar from_log2(double log2_value) { return LogScalar(log2_value); }
  /// Takes |value|.
  static LogScalar from_value(const Real& value);

  constexpr double log2() const { return log2_; }
  constexpr bool is_zero() const { return log2_ == -std::numeric_limits<double>::infinity(); }
  constexpr bool is_infinite() const { return log2_ == std::numeric_limits<double>::infinity(); }
  constexpr bool is_finite() const { return !is_zero() && !is_infinite(); }

  /// The magnitude as a Real.
  Real value() const;

  /// Scientific decimal string with `digits` significant digits, valid far
  /// outside the range of any floating type ("0" and "inf" for the sentinels).
  std::string decimal(int digits = 10) const;

  friend constexpr LogScalar operator*(LogScalar a, LogScalar b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return LogScalar(a.log2_ + b.log2_);
  }
  friend constexpr LogScalar operator/(LogScalar a, LogScalar b) {
    if (a.is_zero()) return zero();
    return LogScalar(a.log2_ - b.log2_);
  }

  friend constexpr auto operator<=>(LogScalar a, LogScalar b) { return a.log2_ <=> b.log2_; }
  friend constexpr bool operator==(LogScalar a, LogScalar b) { return a.log2_ == b.log2_; }

 private:
  constexpr explicit LogScalar(double log2_value) : log2_(log2_value) {}

  double log2_ = -std::numeric_limits<double>::infinity();
};

LogScalar max(LogScalar a, LogScalar b);
LogScalar min(LogScalar a, LogScalar b);

}  // namespace expsplit
