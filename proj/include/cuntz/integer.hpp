#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "cuntz/errors.hpp"

namespace cuntz {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Remainder in [0, |m|).
inline Integer floor_mod(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += abs(m);
  return r;
}

/// Quotient rounded toward negative infinity.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(a, b);
}

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

inline std::string to_string(const Integer& a) { return a.str(); }

/// Narrowing used by the search kernels; they work in fixed width once the
/// inputs have been checked against the declared limits.
inline std::int64_t to_int64(const Integer& a, std::int64_t bound = std::int64_t{1} << 40) {
  if (a > bound || a < -bound)
    throw ResourceLimitError("integer " + a.str() + " exceeds the fixed-width search range");
  return a.convert_to<std::int64_t>();
}

/// Parses an optionally signed decimal integer; the whole string must match.
inline Integer parse_integer(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  std::size_t end = text.size();
  while (end > pos && (text[end - 1] == ' ' || text[end - 1] == '\t')) --end;
  std::string_view body = text.substr(pos, end - pos);
  std::size_t digits = (!body.empty() && (body[0] == '-' || body[0] == '+')) ? 1 : 0;
  if (digits == body.size()) throw ParseError("expected an integer, got '" + std::string(text) + "'");
  for (std::size_t i = digits; i < body.size(); ++i)
    if (body[i] < '0' || body[i] > '9')
      throw ParseError("expected an integer, got '" + std::string(text) + "'");
  Integer value(std::string(body[0] == '+' ? body.substr(1) : body));
  return value;
}

}  // namespace cuntz
