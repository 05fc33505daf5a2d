#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <string>

#include "vnlab/errors.hpp"

namespace vnlab {

/// Exact probability masses.
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den) {
  if (den == 0) throw InvalidInput("zero denominator");
  return Rational(num, den);
}

/// Exact conversion of a finite double (every double is a dyadic rational).
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw InvalidInput("mass must be finite");
  int exp = 0;
  double mant = std::frexp(x, &exp);
  // mant * 2^53 is an integer
  auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(scaled);
  boost::multiprecision::cpp_int two_pow = 1;
  two_pow <<= std::abs(exp);
  if (exp >= 0)
    r *= Rational(two_pow);
  else
    r /= Rational(two_pow);
  return r;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace vnlab
