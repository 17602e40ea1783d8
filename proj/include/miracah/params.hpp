#pragma once

// Parameter bookkeeping for the two finite discrete families.
//
// racah:  parameters (a,b,c,d) are rationals themselves, a = -N.
// qracah: parameters hold the multiplicative values (q^l1,...,q^l4),
//         a = q^-N.  Integer base-q exponents are cached when the
//         values are exact integer powers of q, so that level maps
//         needing exponent arithmetic stay exact.
//
// Site coordinates: every grid or off-grid evaluation point is carried
// as a single rational u, meaning x itself (racah) or q^x (qracah).
// Stepping x -> x+k is u+k resp. u*q^k; all system functions are
// rational in u, so identities can be checked off-grid exactly.

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "miracah/errors.hpp"
#include "miracah/rational.hpp"

namespace miracah {

enum class Family { racah, qracah };

inline std::string family_name(Family f) {
  return f == Family::racah ? "racah" : "qracah";
}

struct ShiftVector {
  int a = 0, b = 0, c = 0, d = 0;
};

// Uniform shift: lowers N by one per step and advances every parameter.
inline constexpr ShiftVector kDelta{1, 1, 1, 1};
// Partial shift touching only c and d; commutes with the twist.
inline constexpr ShiftVector kDeltaTilde{0, 0, 1, 1};

struct ParameterSet {
  Family family = Family::racah;
  Rational q;           // in (0,1) for qracah, unused otherwise
  Rational a, b, c, d;  // racah: additive values; qracah: multiplicative
  std::optional<long> ea, eb, ec, ed;  // qracah exponent cache
  bool validated = false;

  friend bool operator==(const ParameterSet& l, const ParameterSet& r) {
    return l.family == r.family && l.q == r.q && l.a == r.a && l.b == r.b &&
           l.c == r.c && l.d == r.d;
  }
};

// Smallest integer e with value == q^e, if any.  q must be in (0,1).
inline std::optional<long> q_exponent(const Rational& value, const Rational& q) {
  if (value <= 0) return std::nullopt;
  if (value == 1) return 0;
  const long limit = 1 << 20;
  Rational acc(1);
  if (value < 1) {
    for (long e = 1; e <= limit; ++e) {
      acc *= q;
      if (acc == value) return e;
      if (acc < value) return std::nullopt;
    }
  } else {
    for (long e = 1; e <= limit; ++e) {
      acc /= q;
      if (acc == value) return -e;
      if (acc > value) return std::nullopt;
    }
  }
  return std::nullopt;
}

inline ParameterSet make_racah(long N, Rational b, Rational c, Rational d) {
  if (N < 1) throw RangeError("lattice size must be >= 1");
  ParameterSet p;
  p.family = Family::racah;
  p.a = Rational(-N);
  p.b = std::move(b);
  p.c = std::move(c);
  p.d = std::move(d);
  return p;
}

inline ParameterSet make_qracah(long N, Rational q, Rational b, Rational c, Rational d) {
  if (N < 1) throw RangeError("lattice size must be >= 1");
  if (!(q > 0 && q < 1)) throw RangeError("q must satisfy 0 < q < 1");
  ParameterSet p;
  p.family = Family::qracah;
  p.q = q;
  p.a = pow_int(q, -N);
  p.b = std::move(b);
  p.c = std::move(c);
  p.d = std::move(d);
  p.ea = -N;
  p.eb = q_exponent(p.b, q);
  p.ec = q_exponent(p.c, q);
  p.ed = q_exponent(p.d, q);
  return p;
}

// Lattice size N encoded in the first parameter, when it is.
inline long lattice_size(const ParameterSet& p) {
  if (p.family == Family::racah) {
    if (is_integer(p.a) && p.a < 0) return -to_long(p.a);
  } else if (p.ea && *p.ea < 0) {
    return -*p.ea;
  }
  throw RangeError("parameter set does not encode a lattice size");
}

inline Rational d_tilde(const ParameterSet& p) {
  if (p.family == Family::racah) return p.a + p.b + p.c - p.d - 1;
  return p.a * p.b * p.c / (p.d * p.q);
}

// Shape-invariance scale: 1 additively, 1/q multiplicatively.
inline Rational kappa(const ParameterSet& p) {
  return p.family == Family::racah ? Rational(1) : Rational(1) / p.q;
}

inline Rational alpha(const ParameterSet& p) {
  if (p.family == Family::racah) return Rational(1);
  return p.a * p.b / (p.d * p.q);
}

inline Rational alpha_prime(const ParameterSet& p) {
  if (p.family == Family::racah) return -p.c * (p.a + p.b - p.d - 1);
  return -(1 - p.c) * (1 - p.a * p.b / (p.d * p.q));
}

inline ParameterSet shift_params(const ParameterSet& p, const ShiftVector& s, long m = 1) {
  ParameterSet out = p;
  out.validated = false;
  if (p.family == Family::racah) {
    out.a = p.a + Rational(s.a) * m;
    out.b = p.b + Rational(s.b) * m;
    out.c = p.c + Rational(s.c) * m;
    out.d = p.d + Rational(s.d) * m;
  } else {
    out.a = p.a * pow_int(p.q, s.a * m);
    out.b = p.b * pow_int(p.q, s.b * m);
    out.c = p.c * pow_int(p.q, s.c * m);
    out.d = p.d * pow_int(p.q, s.d * m);
    if (p.ea) out.ea = *p.ea + s.a * m;
    if (p.eb) out.eb = *p.eb + s.b * m;
    if (p.ec) out.ec = *p.ec + s.c * m;
    if (p.ed) out.ed = *p.ed + s.d * m;
  }
  return out;
}

// Involutive parameter twist (l1,l2,l3,l4) -> (l4-l1+1, l4-l2+1, l3, l4).
// Multiplicative form needs no exponent data, so it never rejects.
inline ParameterSet twist(const ParameterSet& p) {
  ParameterSet out = p;
  out.validated = false;
  if (p.family == Family::racah) {
    out.a = p.d - p.a + 1;
    out.b = p.d - p.b + 1;
  } else {
    out.a = p.d * p.q / p.a;
    out.b = p.d * p.q / p.b;
    out.ea = (p.ed && p.ea) ? std::optional<long>(*p.ed - *p.ea + 1) : std::nullopt;
    out.eb = (p.ed && p.eb) ? std::optional<long>(*p.ed - *p.eb + 1) : std::nullopt;
  }
  return out;
}

// Reflection companion (l1, l1+l3-l4, l1+l2-l4, 2*l1-l4): the system seen
// from the other end of the lattice.  Generally lands outside the
// admissible region, so the result is usable for evaluation only.
inline ParameterSet mirror_params(const ParameterSet& p) {
  ParameterSet out = p;
  out.validated = false;
  if (p.family == Family::racah) {
    out.b = p.a + p.c - p.d;
    out.c = p.a + p.b - p.d;
    out.d = 2 * p.a - p.d;
    return out;
  }
  if (!(p.ea && p.eb && p.ec && p.ed))
    throw UnsupportedError("mirror map needs q-power representable parameters");
  out.b = p.a * p.c / p.d;
  out.c = p.a * p.b / p.d;
  out.d = p.a * p.a / p.d;
  out.eb = *p.ea + *p.ec - *p.ed;
  out.ec = *p.ea + *p.eb - *p.ed;
  out.ed = 2 * *p.ea - *p.ed;
  return out;
}

// Exponent 4-tuple at the additive level (racah: the values themselves).
inline std::array<Rational, 4> additive_levels(const ParameterSet& p) {
  if (p.family == Family::racah) return {p.a, p.b, p.c, p.d};
  if (!(p.ea && p.eb && p.ec && p.ed))
    throw UnsupportedError("level arithmetic needs q-power representable parameters");
  return {Rational(*p.ea), Rational(*p.eb), Rational(*p.ec), Rational(*p.ed)};
}

// Largest admissible virtual index: min([l1+l2-l4-1]', [(l1+l2-l3-l4)/2])
// where [x]' is the greatest integer strictly below x.
inline long v_max(const ParameterSet& p) {
  auto l = additive_levels(p);
  Rational first = l[0] + l[1] - l[3] - 1;
  Rational second = (l[0] + l[1] - l[2] - l[3]) / 2;
  return std::min(strict_floor_long(first), floor_long(second));
}

// Admissible virtual indices; index 0 solves the twisted equation too but
// deleting it only shifts parameters, so it is excluded here.
inline std::vector<long> virtual_indices(const ParameterSet& p) {
  std::vector<long> out;
  for (long v = 1; v <= v_max(p); ++v) out.push_back(v);
  return out;
}

// Deleting M virtual levels keeps the twisted weight positive only while
// this holds.
inline bool m_range_ok(const ParameterSet& p, long M) {
  if (p.family == Family::racah) return p.d + M < p.a + p.b;
  return p.a * p.b < p.d * pow_int(p.q, M);
}

inline std::vector<std::string> validate_ranges(const ParameterSet& p) {
  std::vector<std::string> bad;
  if (p.family == Family::racah) {
    if (!(is_integer(p.a) && p.a <= -1))
      bad.push_back("a must be a negative integer -N");
    if (!(p.d > 0)) bad.push_back("need 0 < d");
    if (!(p.d < p.a + p.b)) bad.push_back("need d < a+b");
    if (!(p.c > 0)) bad.push_back("need 0 < c");
    if (!(p.c < 1 + p.d)) bad.push_back("need c < 1+d");
  } else {
    if (!(p.q > 0 && p.q < 1)) bad.push_back("need 0 < q < 1");
    if (!(p.ea && *p.ea <= -1)) bad.push_back("a must be q^-N, N >= 1");
    if (!(p.b > 0)) bad.push_back("need 0 < b");
    if (!(p.a * p.b < p.d)) bad.push_back("need ab < d");
    if (!(p.d < 1)) bad.push_back("need d < 1");
    if (!(p.q * p.d < p.c)) bad.push_back("need qd < c");
    if (!(p.c < 1)) bad.push_back("need c < 1");
  }
  return bad;
}

inline ParameterSet validate(const ParameterSet& p) {
  auto bad = validate_ranges(p);
  if (!bad.empty()) {
    std::string msg = "parameter set out of range:";
    for (const auto& b : bad) msg += " [" + b + "]";
    throw RangeError(msg);
  }
  ParameterSet out = p;
  out.validated = true;
  return out;
}

// ---- site coordinates ----

inline Rational site(const ParameterSet& p, long x) {
  return p.family == Family::racah ? Rational(x) : pow_int(p.q, x);
}

inline Rational shift_site(const ParameterSet& p, const Rational& u, long k) {
  return p.family == Family::racah ? Rational(u + k) : Rational(u * pow_int(p.q, k));
}

// x -> -x-d additively, q^x -> q^-x/d multiplicatively; fixes eta.
inline Rational involution_site(const ParameterSet& p, const Rational& u) {
  if (p.family == Family::racah) return -u - p.d;
  if (u == 0) throw DegenerateError("involution at zero site");
  return Rational(1) / (p.d * u);
}

// ---- shifted factorials ----

inline Rational pochhammer(const Rational& x, long k) {
  if (k < 0) throw DegenerateError("negative Pochhammer length");
  Rational out(1);
  for (long i = 0; i < k; ++i) out *= x + i;
  return out;
}

inline Rational pochhammer_multi(std::initializer_list<Rational> xs, long k) {
  Rational out(1);
  for (const auto& x : xs) out *= pochhammer(x, k);
  return out;
}

inline Rational q_pochhammer(const Rational& a, const Rational& q, long k) {
  if (k < 0) throw DegenerateError("negative q-Pochhammer length");
  Rational out(1), aq = a;
  for (long i = 0; i < k; ++i) {
    out *= 1 - aq;
    aq *= q;
  }
  return out;
}

inline Rational q_pochhammer_multi(std::initializer_list<Rational> as, const Rational& q, long k) {
  Rational out(1);
  for (const auto& a : as) out *= q_pochhammer(a, q, k);
  return out;
}

}  // namespace miracah
