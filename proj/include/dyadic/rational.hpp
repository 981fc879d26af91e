#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>
#include <type_traits>

#include "dyadic/errors.hpp"

namespace dyadic {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational, always reduced, denominator > 0.
using Rational = boost::multiprecision::cpp_rational;

/// "num/den" with the "/den" part omitted for integers: "7", "-3/8".
std::string to_string(const Rational& r);

/// Parses "num" or "num/den" (optional sign, arbitrary precision).
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

template <class Real>
Real rational_cast(const Rational& r) {
  if constexpr (std::is_floating_point_v<Real>) {
    return r.template convert_to<Real>();
  } else {
    return Real(numerator(r)) / Real(denominator(r));
  }
}

/// Complex integer a + b*i with exact components.
struct GaussInt {
  BigInt re;
  BigInt im;
};

GaussInt gauss_mul(const GaussInt& a, const GaussInt& b);

/// (re + i*im)^n by binary powering, exact.
GaussInt gauss_pow(GaussInt base, unsigned exponent);

}  // namespace dyadic
