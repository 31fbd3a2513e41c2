#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace pslab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "p/q", an integer, or a decimal with optional exponent
/// ("1.05", "-2.5e-3", "1e7") into an exact rational.
Rational parse_rational(std::string_view text);

/// The exact binary value of a finite double.
Rational rational_from_double(double v);

double to_double(const Rational& q);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);

} // namespace pslab
