#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace opmatch {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Scaled integer numerator. Every weight of one (P, Q, WeightSpec) instance
// shares a single denominator, so sums and comparisons stay exact.
using WeightValue = __int128;

Rational make_rational(std::int64_t num, std::int64_t den);
Rational make_rational(WeightValue num, WeightValue den);
inline Rational make_rational(int num, int den) {
  return make_rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

BigInt to_bigint(WeightValue v);
// Throws ConfigError when the value does not fit.
WeightValue to_weight_value(const BigInt& v);

// Exact parse of "12", "-3.25", "1e-3" style literals and "p/q" fractions.
Rational parse_rational(std::string_view text);

// "7", "-3/4"
std::string format_rational(const Rational& r);
std::string format_int128(WeightValue v);

double to_double(const Rational& r);

// Multiplication that throws ConfigError on overflow.
WeightValue checked_mul(WeightValue a, WeightValue b);
WeightValue checked_add(WeightValue a, WeightValue b);

}  // namespace opmatch
