#pragma once

#include <cstdint>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace expsplit {

/// Decimal digits carried by every matrix entry.
///
/// Products of corpus steps cancel terms up to 2^126 times larger than their
/// result at window M = 64, so a 64-bit mantissa would lose every digit.
inline constexpr unsigned kRealDigits10 = 100;

using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<kRealDigits10, boost::multiprecision::allocate_stack>,
    boost::multiprecision::et_off>;

/// x * 2^e.
Real ldexp2(const Real& x, std::int64_t e);
/// e with |x| = f * 2^e, f in [1/2, 1); 0 for x = 0.
std::int64_t binary_exponent(const Real& x);
bool sign_bit(const Real& x);
/// 2^x.
Real exp2r(const Real& x);
bool is_finite(const Real& x);
/// log2 |x| as a double; -inf for 0.
double log2_abs(const Real& x);

}  // namespace expsplit
