#pragma once

// Dense univariate polynomials over the exact rationals: interpolation,
// arithmetic, and Sturm-chain root counting on open intervals.
// Coefficients are stored ascending; an empty vector is the zero polynomial.

#include <vector>

#include "miracah/rational.hpp"

namespace miracah {

using Poly = std::vector<Rational>;

inline void poly_trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline long poly_degree(const Poly& p) { return static_cast<long>(p.size()) - 1; }

inline Rational poly_eval(const Poly& p, const Rational& x) {
  Rational acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline Poly poly_derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(Rational(long(i)) * p[i]);
  return d;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Remainder of a by b; b must be nonzero.
inline Poly poly_rem(Poly a, const Poly& b) {
  if (b.empty()) throw DegenerateError("polynomial division by zero");
  poly_trim(a);
  while (poly_degree(a) >= poly_degree(b)) {
    Rational f = a.back() / b.back();
    std::size_t off = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
    a.pop_back();
    poly_trim(a);
    if (a.empty()) break;
  }
  return a;
}

// Divide out the positive content to keep Sturm chains small; signs of all
// evaluations are preserved.
inline void poly_reduce_content(Poly& p) {
  if (p.empty()) return;
  mpz_class num_gcd(0), den_lcm(1);
  for (const auto& c : p) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational content(num_gcd, den_lcm);
  content.canonicalize();
  if (content == 0) return;
  for (auto& c : p) c /= content;
}

inline std::vector<Poly> sturm_chain(Poly p) {
  poly_trim(p);
  std::vector<Poly> chain;
  if (p.empty()) return chain;
  poly_reduce_content(p);
  chain.push_back(p);
  Poly d = poly_derivative(p);
  poly_trim(d);
  while (!d.empty()) {
    poly_reduce_content(d);
    chain.push_back(d);
    Poly r = poly_rem(chain[chain.size() - 2], chain.back());
    for (auto& c : r) c = -c;
    d = std::move(r);
  }
  return chain;
}

inline int sign_variations(const std::vector<Poly>& chain, const Rational& t) {
  int variations = 0, last = 0;
  for (const auto& p : chain) {
    int s = sign_of(poly_eval(p, t));
    if (s == 0) continue;
    if (last != 0 && s != last) ++variations;
    last = s;
  }
  return variations;
}

// Number of distinct real roots in the open interval (a, b).  A root at
// either endpoint is reported as a boundary degeneracy instead of a count.
inline long count_roots_open(const Poly& p, const Rational& a, const Rational& b) {
  if (a >= b) throw DegenerateError("empty root-count interval");
  if (poly_eval(p, a) == 0 || poly_eval(p, b) == 0)
    throw SignError("root on the interval boundary");
  auto chain = sturm_chain(p);
  if (chain.empty()) throw DegenerateError("root count of the zero polynomial");
  return sign_variations(chain, a) - sign_variations(chain, b);
}

// Exact Newton interpolation through (xs[i], ys[i]); the xs must be distinct.
inline Poly newton_interpolate(const std::vector<Rational>& xs,
                               const std::vector<Rational>& ys) {
  if (xs.size() != ys.size()) throw DegenerateError("interpolation arity mismatch");
  const std::size_t n = xs.size();
  std::vector<Rational> dd = ys;  // divided differences, built in place
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i) {
      Rational dx = xs[i] - xs[i - level];
      if (dx == 0) throw DegenerateError("repeated interpolation node");
      dd[i] = (dd[i] - dd[i - 1]) / dx;
    }
  Poly out, basis{Rational(1)};
  for (std::size_t i = 0; i < n; ++i) {
    if (out.size() < basis.size()) out.resize(basis.size(), Rational(0));
    for (std::size_t j = 0; j < basis.size(); ++j) out[j] += dd[i] * basis[j];
    basis = poly_mul(basis, Poly{-xs[i], Rational(1)});
  }
  poly_trim(out);
  return out;
}

}  // namespace miracah
