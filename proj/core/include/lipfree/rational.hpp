#pragma once

#include "lipfree/errors.hpp"

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace lipfree {

/// Exact rational scalar. Every distance, coefficient, and function value in
/// the library is one of these; there is no floating point on any code path.
using Rational = mpq_class;

/// Parses "p/q" or "p" (optionally signed). Decimal notation is rejected.
Rational parse_rational(std::string_view text);

/// Canonical lowest-terms "p/q" form; integers keep the "/1" suffix.
std::string format_rational(const Rational &value);

/// num / den in lowest terms. The two-argument mpq_class constructor does
/// not canonicalize, so ratios built from runtime integers go through here.
inline Rational ratio(long num, long den)
{
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational abs_value(const Rational &value)
{
  return value < 0 ? Rational(-value) : value;
}

}  // namespace lipfree
