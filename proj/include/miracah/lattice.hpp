#pragma once

// The undeformed finite system on x = 0..N: birth/death potentials,
// sinusoidal coordinate, eigenpolynomials (terminating hypergeometric
// series), ground weight, norms, and shift operators.
//
// All functions take the site coordinate u (see params.hpp) and are
// rational in u, so every identity can be tested off-grid as well.

#include <functional>
#include <vector>

#include "miracah/params.hpp"

namespace miracah {

using SiteFn = std::function<Rational(const Rational&)>;

// In both potentials a vanishing numerator wins over a vanishing
// denominator: at degenerate parameters (d=1 resp. d=q) the boundary
// sites x=0, x=N sit on cancelled zeros of the raw expression, and the
// factorized system needs D(0) = 0 = B(N) exactly.
inline Rational potential_B(const ParameterSet& p, const Rational& u) {
  Rational num, den;
  if (p.family == Family::racah) {
    num = -(u + p.a) * (u + p.b) * (u + p.c) * (u + p.d);
    den = (2 * u + p.d) * (2 * u + 1 + p.d);
  } else {
    Rational u2 = u * u;
    num = -(1 - p.a * u) * (1 - p.b * u) * (1 - p.c * u) * (1 - p.d * u);
    den = (1 - p.d * u2) * (1 - p.d * u2 * p.q);
  }
  if (num == 0) return num;
  if (den == 0) throw DegenerateError("potential B denominator vanished");
  return num / den;
}

inline Rational potential_D(const ParameterSet& p, const Rational& u) {
  Rational num, den;
  if (p.family == Family::racah) {
    num = -(u + p.d - p.a) * (u + p.d - p.b) * (u + p.d - p.c) * u;
    den = (2 * u - 1 + p.d) * (2 * u + p.d);
  } else {
    Rational u2 = u * u;
    num = -d_tilde(p) * (1 - p.d * u / p.a) * (1 - p.d * u / p.b) *
          (1 - p.d * u / p.c) * (1 - u);
    den = (1 - p.d * u2 / p.q) * (1 - p.d * u2);
  }
  if (num == 0) return num;
  if (den == 0) throw DegenerateError("potential D denominator vanished");
  return num / den;
}

// Sinusoidal coordinate: x(x+d), resp. (q^-x - 1)(1 - d q^x).
inline Rational eta(const ParameterSet& p, const Rational& u) {
  if (p.family == Family::racah) return u * (u + p.d);
  if (u == 0) throw DegenerateError("eta at zero site");
  return (1 / u - 1) * (1 - p.d * u);
}

// varphi(x) = (eta(x+1) - eta(x)) / eta(1).
inline Rational varphi(const ParameterSet& p, const Rational& u) {
  if (p.family == Family::racah) return (2 * u + p.d + 1) / (p.d + 1);
  if (u == 0) throw DegenerateError("varphi at zero site");
  return (1 / u - p.d * u * p.q) / (1 - p.d * p.q);
}

inline Rational energy(const ParameterSet& p, long n) {
  Rational dt = d_tilde(p);
  if (p.family == Family::racah) return Rational(n) * (n + dt);
  return (pow_int(p.q, -n) - 1) * (1 - dt * pow_int(p.q, n));
}

// Terminating hypergeometric series, normalized to 1 at x=0.
inline Rational racah_poly(const ParameterSet& p, long n, const Rational& u) {
  if (n < 0) throw DegenerateError("negative polynomial degree");
  Rational sum(1), term(1);
  if (p.family == Family::racah) {
    Rational dt = d_tilde(p);
    for (long k = 0; k < n; ++k) {
      Rational den = (p.a + k) * (p.b + k) * (p.c + k) * (k + 1);
      if (den == 0)
        throw DegenerateError("series denominator vanished before termination");
      term *= (k - n) * (n + dt + k) * (k - u) * (u + p.d + k) / den;
      sum += term;
    }
    return sum;
  }
  if (u == 0) throw DegenerateError("series at zero site");
  Rational dt = d_tilde(p), qk(1);
  for (long k = 0; k < n; ++k) {
    Rational den = (1 - p.a * qk) * (1 - p.b * qk) * (1 - p.c * qk) *
                   (1 - qk * p.q);
    if (den == 0)
      throw DegenerateError("series denominator vanished before termination");
    term *= (1 - pow_int(p.q, -n) * qk) * (1 - dt * pow_int(p.q, n) * qk) *
            (1 - qk / u) * (1 - p.d * u * qk) * p.q / den;
    sum += term;
    qk *= p.q;
  }
  return sum;
}

// Square-root-free action of the Hamiltonian on a scalar function:
// B(x)(f(x)-f(x+1)) + D(x)(f(x)-f(x-1)).
inline Rational apply_difference_op(const ParameterSet& p, const SiteFn& f,
                                    const Rational& u) {
  Rational fu = f(u);
  return potential_B(p, u) * (fu - f(shift_site(p, u, 1))) +
         potential_D(p, u) * (fu - f(shift_site(p, u, -1)));
}

inline Rational eigen_residual(const ParameterSet& p, long n, const Rational& u) {
  SiteFn f = [&](const Rational& w) { return racah_poly(p, n, w); };
  return apply_difference_op(p, f, u) - energy(p, n) * racah_poly(p, n, u);
}

// Squared ground weight by the telescoping product B(y)/D(y+1).
inline std::vector<Rational> ground_weight_sq_grid(const ParameterSet& p, long x_hi) {
  std::vector<Rational> w(x_hi + 1);
  w[0] = 1;
  for (long x = 0; x < x_hi; ++x) {
    Rational d_next = potential_D(p, site(p, x + 1));
    if (d_next == 0) throw DegenerateError("ground weight hit a vanishing D");
    w[x + 1] = w[x] * potential_B(p, site(p, x)) / d_next;
  }
  return w;
}

// Squared ground weight in closed form (shifted factorial ratio).
inline Rational ground_weight_sq_closed(const ParameterSet& p, long x) {
  if (p.family == Family::racah) {
    Rational num = pochhammer_multi({p.a, p.b, p.c, p.d}, x);
    Rational den =
        pochhammer_multi({1 + p.d - p.a, 1 + p.d - p.b, 1 + p.d - p.c, Rational(1)}, x);
    if (den == 0) throw DegenerateError("closed ground weight denominator vanished");
    return num / den * (2 * x + p.d) / p.d;
  }
  Rational num = q_pochhammer_multi({p.a, p.b, p.c, p.d}, p.q, x);
  Rational den = q_pochhammer_multi({p.d * p.q / p.a, p.d * p.q / p.b, p.d * p.q / p.c, p.q},
                                    p.q, x) *
                 pow_int(d_tilde(p), x);
  if (den == 0) throw DegenerateError("closed ground weight denominator vanished");
  return num / den * (1 - p.d * pow_int(p.q, 2 * x)) / (1 - p.d);
}

// Squared norm constant: sum_x w(x)^2 P_n(x) P_m(x) = delta_nm / norm_sq(n).
inline Rational norm_sq(const ParameterSet& p, long n) {
  long N = lattice_size(p);
  Rational dt = d_tilde(p);
  if (p.family == Family::racah) {
    Rational first = pochhammer_multi({p.a, p.b, p.c, dt}, n) /
                     pochhammer_multi({1 + dt - p.a, 1 + dt - p.b, 1 + dt - p.c, Rational(1)}, n) *
                     (2 * n + dt) / dt;
    Rational second = pochhammer_multi({1 + p.d - p.a, 1 + p.d - p.b, 1 + p.d - p.c}, N) /
                      (pochhammer(dt + 1, N) * pochhammer(p.d + 1, 2 * N));
    if (N % 2 != 0) second = -second;
    return first * second;
  }
  Rational first = q_pochhammer_multi({p.a, p.b, p.c, dt}, p.q, n) /
                   (q_pochhammer_multi({dt * p.q / p.a, dt * p.q / p.b, dt * p.q / p.c, p.q},
                                       p.q, n) *
                    pow_int(p.d, n)) *
                   (1 - dt * pow_int(p.q, 2 * n)) / (1 - dt);
  Rational second = q_pochhammer_multi({p.d * p.q / p.a, p.d * p.q / p.b, p.d * p.q / p.c},
                                       p.q, N) *
                    pow_int(dt, N) * pow_int(p.q, N * (N + 1) / 2) /
                    (q_pochhammer(dt * p.q, p.q, N) * q_pochhammer(p.d * p.q, p.q, 2 * N));
  if (N % 2 != 0) second = -second;
  return first * second;
}

// Forward shift: maps degree n at level lambda to degree n-1 at lambda+delta,
// with eigenvalue factor E_n.
inline Rational shift_forward_apply(const ParameterSet& p, const SiteFn& f,
                                    const Rational& u) {
  Rational b0 = potential_B(p, site(p, 0));
  return b0 / varphi(p, u) * (f(u) - f(shift_site(p, u, 1)));
}

inline Rational shift_backward_apply(const ParameterSet& p, const SiteFn& f,
                                     const Rational& u) {
  Rational b0 = potential_B(p, site(p, 0));
  Rational um = shift_site(p, u, -1);
  return (potential_B(p, u) * varphi(p, u) * f(u) -
          potential_D(p, u) * varphi(p, um) * f(um)) /
         b0;
}

// Exact tridiagonal data of H = A^dagger A in square-root-free form:
// diagonal B(x)+D(x), squared off-diagonal B(x)D(x+1).
inline Rational hamiltonian_diag(const ParameterSet& p, long x) {
  Rational u = site(p, x);
  return potential_B(p, u) + potential_D(p, u);
}

inline Rational hamiltonian_offdiag_sq(const ParameterSet& p, long x) {
  return potential_B(p, site(p, x)) * potential_D(p, site(p, x + 1));
}

// Table P[n][x] of eigenpolynomial values on the grid.
inline std::vector<std::vector<Rational>> poly_table(const ParameterSet& p) {
  long N = lattice_size(p);
  std::vector<std::vector<Rational>> t(N + 1, std::vector<Rational>(N + 1));
  for (long n = 0; n <= N; ++n)
    for (long x = 0; x <= N; ++x) t[n][x] = racah_poly(p, n, site(p, x));
  return t;
}

}  // namespace miracah
