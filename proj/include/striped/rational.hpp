#pragma once

// Exact rational numbers used for all geometric data.

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace striped {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Rational make_rational(long long num, long long den = 1) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  return Rational(Integer(num), Integer(den));
}

/// Always "p/q", including integers ("3/1"). Used by JSON and CSV output.
inline std::string to_fraction_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

/// Integers print bare, everything else as "p/q". Used by atlas documents.
inline std::string to_compact_string(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1) {
    return boost::multiprecision::numerator(r).str();
  }
  return to_fraction_string(r);
}

/// Accepts "[+-]digits", "[+-]digits/digits" and "[+-]digits.digits".
/// Throws std::invalid_argument on anything else.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  };
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  auto digits = [&](std::size_t from) {
    std::size_t j = from;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    return j;
  };
  std::size_t end_int = digits(i);
  if (end_int == i) return fail();
  Integer whole(std::string(text.substr(i, end_int - i)));
  Rational value(whole);
  if (end_int < text.size()) {
    char sep = text[end_int];
    std::size_t end_frac = digits(end_int + 1);
    if (end_frac == end_int + 1 || end_frac != text.size()) return fail();
    std::string tail(text.substr(end_int + 1, end_frac - end_int - 1));
    if (sep == '/') {
      Integer den(tail);
      if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
      value = Rational(whole, den);
    } else if (sep == '.') {
      Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(tail.size()));
      value = Rational(whole * scale + Integer(tail), scale);
    } else {
      return fail();
    }
  }
  return negative ? Rational(-value) : value;
}

}  // namespace striped
