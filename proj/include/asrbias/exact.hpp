#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace asrbias {

/// Exact rational used for every WER-derived quantity except standard
/// deviations. Inputs printed as decimals ("41.6") are represented exactly.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "41.6", "-3", "1e-2" style decimals or "p/q" fractions exactly.
/// Throws Error(FormatError) on anything else.
Rational parse_exact(std::string_view text);

/// Lossless text form: a terminating decimal when one exists, "p/q" otherwise.
/// parse_exact(to_exact_string(x)) == x.
std::string to_exact_string(const Rational& value);

/// Fixed-point rendering with round-half-away-from-zero on the exact value.
std::string to_fixed(const Rational& value, int decimals);

/// Same rounding rule applied to a double (used for standard deviations).
std::string to_fixed(double value, int decimals);

double to_double(const Rational& value);

/// Shortest decimal text that parses back to the same double.
std::string to_roundtrip_string(double value);

Rational percent(const Rational& fraction);

}  // namespace asrbias
