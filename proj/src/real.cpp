#include "expsplit/real.hpp"

#include <cmath>
#include <limits>

namespace expsplit {

Real ldexp2(const Real& x, std::int64_t e) {
  Real out;
  mpfr_mul_2si(out.backend().data(), x.backend().data(), static_cast<long>(e), MPFR_RNDN);
  return out;
}

Real exp2r(const Real& x) {
  Real out;
  mpfr_exp2(out.backend().data(), x.backend().data(), MPFR_RNDN);
  return out;
}

std::int64_t binary_exponent(const Real& x) {
  if (!mpfr_regular_p(x.backend().data())) return 0;
  return static_cast<std::int64_t>(mpfr_get_exp(x.backend().data()));
}

bool sign_bit(const Real& x) { return mpfr_signbit(x.backend().data()) != 0; }

bool is_finite(const Real& x) { return mpfr_number_p(x.backend().data()) != 0; }

double log2_abs(const Real& x) {
  if (mpfr_zero_p(x.backend().data())) return -std::numeric_limits<double>::infinity();
  if (mpfr_inf_p(x.backend().data())) return std::numeric_limits<double>::infinity();
  long e = 0;
  const double d = mpfr_get_d_2exp(&e, x.backend().data(), MPFR_RNDN);
  return std::log2(std::fabs(d)) + static_cast<double>(e);
}

}  // namespace expsplit
