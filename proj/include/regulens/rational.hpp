#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace regulens {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// Parses "a/b", an integer, or a finite decimal ("0.25") into an exact
/// rational. Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// Always "num/den" with den > 0, e.g. "1/4", "0/1", "3/1".
std::string to_fraction_string(const Rational& value);

BigInt numerator_of(const Rational& value);
BigInt denominator_of(const Rational& value);

/// floor(value) for value >= 0.
BigInt floor_of(const Rational& value);
BigInt ceil_of(const Rational& value);

/// Integer power of a rational.
Rational pow(const Rational& base, unsigned exponent);

}  // namespace regulens
