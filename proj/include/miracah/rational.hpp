#pragma once

// Exact rational scalar used everywhere an identity is checked to be
// literally zero.  Backed by GMP; values are kept canonical (lowest
// terms, positive denominator) by mpq_class itself.

#include <gmpxx.h>

#include <optional>
#include <string>

#include "miracah/errors.hpp"

namespace miracah {

using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw DegenerateError("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Accepts "p", "-p", "p/q" with optional sign on p; q must be positive.
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ParseError("empty rational literal");
  std::size_t slash = text.find('/');
  try {
    Rational r;
    if (r.set_str(text, 10) != 0) throw ParseError("bad rational literal: " + text);
    if (slash != std::string::npos && mpz_class(text.substr(slash + 1)) <= 0)
      throw ParseError("denominator must be positive: " + text);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational literal: " + text);
  }
}

// Canonical text form: integers as "p", everything else as "p/q".
inline std::string format_rational(const Rational& r) {
  return r.get_str();
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline long to_long(const Rational& r) {
  if (!is_integer(r) || !r.get_num().fits_slong_p())
    throw DegenerateError("expected a small integer, got " + format_rational(r));
  return r.get_num().get_si();
}

inline int sign_of(const Rational& r) { return sgn(r); }

inline Rational pow_int(const Rational& base, long e) {
  if (e == 0) return Rational(1);
  if (base == 0) {
    if (e > 0) return Rational(0);
    throw DegenerateError("zero base with negative exponent");
  }
  Rational b = e > 0 ? base : Rational(1) / base;
  unsigned long k = e > 0 ? static_cast<unsigned long>(e) : static_cast<unsigned long>(-e);
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), b.get_num_mpz_t(), k);
  mpz_pow_ui(out.get_den_mpz_t(), b.get_den_mpz_t(), k);
  out.canonicalize();
  return out;
}

inline long floor_long(const Rational& r) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  if (!f.fits_slong_p()) throw DegenerateError("floor out of range");
  return f.get_si();
}

// Greatest integer strictly below r.
inline long strict_floor_long(const Rational& r) {
  return is_integer(r) ? to_long(r) - 1 : floor_long(r);
}

// Exact square root when r is a perfect square of a rational.
inline std::optional<Rational> exact_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  mpz_class num_root, den_root, rem;
  mpz_sqrtrem(num_root.get_mpz_t(), rem.get_mpz_t(), r.get_num_mpz_t());
  if (rem != 0) return std::nullopt;
  mpz_sqrtrem(den_root.get_mpz_t(), rem.get_mpz_t(), r.get_den_mpz_t());
  if (rem != 0) return std::nullopt;
  return Rational(num_root, den_root);
}

}  // namespace miracah
