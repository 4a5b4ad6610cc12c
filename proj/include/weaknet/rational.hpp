#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace weaknet {

/// Exact rational scalar used everywhere in the library. Expression templates
/// are disabled so that `auto` always yields a value.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return Rational(num, den);
}

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return make_rational(BigInt(num), BigInt(den));
}

inline BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline int sign(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

/// Largest integer <= q.
inline BigInt floor_of(const Rational& q) {
  BigInt n = numerator_of(q), d = denominator_of(q);
  BigInt quot = n / d;  // truncates toward zero
  if (n < 0 && quot * d != n) quot -= 1;
  return quot;
}

/// Smallest integer >= q.
inline BigInt ceil_of(const Rational& q) { return -floor_of(Rational(-q)); }

inline Rational power(const Rational& q, unsigned exp) {
  return make_rational(boost::multiprecision::pow(numerator_of(q), exp), boost::multiprecision::pow(denominator_of(q), exp));
}

/// Nearest rational with the given denominator; ties round up.
inline Rational round_to_denominator(const Rational& q, const BigInt& den) {
  BigInt k = floor_of(q * Rational(den) + Rational(1, 2));
  return Rational(k, den);
}

inline std::int64_t to_int64(const BigInt& v) {
  if (v > BigInt(INT64_MAX) || v < BigInt(INT64_MIN))
    throw std::overflow_error("integer does not fit in 64 bits");
  return v.convert_to<std::int64_t>();
}

/// Bit-exact text form "num/den" (den always printed, even when 1).
inline std::string to_text(const Rational& q) {
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

/// Accepts "num/den", "num", or a plain integer string.
inline Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(BigInt(std::string(text)));
    BigInt num(std::string(text.substr(0, slash)));
    BigInt den(std::string(text.substr(slash + 1)));
    return make_rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational: " + std::string(text));
  }
}

inline Rational min_of(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max_of(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace weaknet
