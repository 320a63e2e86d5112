#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "qseries/error.hpp"

namespace qseries {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational r(Integer(static_cast<long>(num)), Integer(static_cast<long>(den)));
  r.canonicalize();
  return r;
}

/// Exact integer power; negative exponents invert.
inline Rational pow(const Rational& base, std::int64_t k) {
  if (k < 0) {
    if (base == 0) throw Error("zero raised to a negative power");
    Rational inv = 1 / base;
    return pow(inv, -k);
  }
  Rational result = 1;
  Rational b = base;
  auto e = static_cast<std::uint64_t>(k);
  while (e) {
    if (e & 1U) result *= b;
    e >>= 1U;
    if (e) b *= b;
  }
  return result;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline std::int64_t to_int64(const Rational& r) {
  if (!is_integer(r) || !r.get_num().fits_slong_p()) throw Error("value is not a machine integer: " + r.get_str());
  return r.get_num().get_si();
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Parses "p", "-p" or "p/d".
inline Rational parse_rational(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0) throw Error("not a rational number: " + text);
  r.canonicalize();
  return r;
}

}  // namespace qseries
