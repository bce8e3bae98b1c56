#include "opmatch/rational.h"

#include <cctype>
#include <limits>

#include "opmatch/errors.h"

namespace opmatch {

namespace {

const BigInt& int128_max() {
  static const BigInt v = (BigInt(1) << 127) - 1;
  return v;
}

}  // namespace

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ContractViolation("zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

Rational make_rational(WeightValue num, WeightValue den) {
  if (den == 0) throw ContractViolation("zero denominator");
  return Rational(to_bigint(num), to_bigint(den));
}

BigInt to_bigint(WeightValue v) { return BigInt(v); }

WeightValue to_weight_value(const BigInt& v) {
  if (v > int128_max() || v < -int128_max()) {
    throw ConfigError("value exceeds 127-bit range: " + v.str());
  }
  return static_cast<WeightValue>(v);
}

Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw ValidationError("not a number: '" + std::string(text) + "'");
  };
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) return fail();

  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw ValidationError("zero denominator in '" + s + "'");
    return num / den;
  }

  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') {
    negative = s[i] == '-';
    ++i;
  }
  BigInt digits = 0;
  int frac_digits = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      any_digit = true;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) return fail();
  long exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') return fail();
    ++i;
    std::size_t used = 0;
    try {
      exponent = std::stol(s.substr(i), &used);
    } catch (const std::exception&) {
      return fail();
    }
    if (i + used != s.size() || exponent > 4000 || exponent < -4000) return fail();
  }
  exponent -= frac_digits;
  Rational value(digits);
  BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  if (exponent < 0) {
    value /= Rational(ten_pow);
  } else {
    value *= Rational(ten_pow);
  }
  return negative ? Rational(-value) : value;
}

std::string format_rational(const Rational& r) {
  const BigInt& num = boost::multiprecision::numerator(r);
  const BigInt& den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_int128(WeightValue v) { return to_bigint(v).str(); }

double to_double(const Rational& r) { return r.convert_to<double>(); }

WeightValue checked_mul(WeightValue a, WeightValue b) {
  WeightValue out;
  if (__builtin_mul_overflow(a, b, &out)) throw ConfigError("weight arithmetic overflow");
  return out;
}

WeightValue checked_add(WeightValue a, WeightValue b) {
  WeightValue out;
  if (__builtin_add_overflow(a, b, &out)) throw ConfigError("weight arithmetic overflow");
  return out;
}

}  // namespace opmatch
