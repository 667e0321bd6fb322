#include "expsplit/log_scalar.hpp"

#include <cmath>
#include <cstdio>

namespace expsplit {

LogScalar LogScalar::from_value(const Real& value) { return LogScalar(log2_abs(value)); }

Real LogScalar::value() const {
  if (is_zero()) return 0;
  if (is_infinite()) return std::numeric_limits<Real>::infinity();
  return exp2r(Real(log2_));
}

std::string LogScalar::decimal(int digits) const {
  if (is_zero()) return "0";
  if (is_infinite()) return "inf";
  // log10 g = log2 g * log10(2); split into integer exponent and mantissa.
  const long double log10_value = static_cast<long double>(log2_) * std::log10(2.0L);
  long double exponent = std::floor(log10_value);
  long double mantissa = std::pow(10.0L, log10_value - exponent);
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*Lf", digits - 1, mantissa);
  // Rounding can carry the mantissa to 10.000...
  if (buffer[0] == '1' && buffer[1] == '0') {
    mantissa /= 10;
    exponent += 1;
    std::snprintf(buffer, sizeof buffer, "%.*Lf", digits - 1, mantissa);
  }
  char out[96];
  std::snprintf(out, sizeof out, "%se%+03lld", buffer, static_cast<long long>(exponent));
  return out;
}

LogScalar max(LogScalar a, LogScalar b) { return a < b ? b : a; }
LogScalar min(LogScalar a, LogScalar b) { return b < a ? b : a; }

}  // namespace expsplit
