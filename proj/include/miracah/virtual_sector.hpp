#pragma once

#include <map>
#include <string>
#include <vector>

#include "miracah/lattice.hpp"

namespace miracah {

// Companion system obtained by the parameter twist.  Its difference operator
// is linearly related to the original one, and its low-lying levels sit below
// the original ground state; they act as seeds for state deletion.

inline Rational twisted_B(const ParameterSet& p, const Rational& u) {
  return potential_B(twist(p), u);
}

inline Rational twisted_D(const ParameterSet& p, const Rational& u) {
  return potential_D(twist(p), u);
}

// Energy of level v in the twisted system.
inline Rational twisted_level_energy(const ParameterSet& p, long v) {
  return energy(twist(p), v);
}

// Energy the seed level contributes in the original system: alpha * E'_v + alpha'.
// Closed form, kept independent of the linear-relation route so the two can be
// compared exactly.
inline Rational virtual_energy(const ParameterSet& p, long v) {
  if (v < 0) throw RangeError("virtual level index must be non-negative");
  if (p.family == Family::racah) {
    Rational vv(v);
    return -(p.c + vv) * (p.a + p.b - p.d - 1 - vv);
  }
  Rational qv = pow_int(p.q, v);
  return -(1 - p.c * qv) * (1 - p.a * p.b / (p.d * p.q * qv));
}

// Terms of the terminating sum for the seed polynomial at site coordinate u.
// Spelled out explicitly (rather than routed through racah_poly on twisted
// parameters) so term-wise sign statements can be inspected and the two code
// paths stay independent.
inline std::vector<Rational> xi_terms(const ParameterSet& p, long v,
                                      const Rational& u) {
  if (v < 0) throw RangeError("virtual level index must be non-negative");
  std::vector<Rational> terms;
  terms.reserve(v + 1);
  Rational term(1);
  if (p.family == Family::racah) {
    const Rational& x = u;
    for (long k = 0; k <= v; ++k) {
      terms.push_back(term);
      if (k == v) break;
      Rational kk(k);
      Rational num = (-v + kk) * (v - p.a - p.b + p.c + p.d + 1 + kk) *
                     (-x + kk) * (x + p.d + kk);
      Rational den = (p.d - p.a + 1 + kk) * (p.d - p.b + 1 + kk) * (p.c + kk) *
                     (kk + 1);
      if (den == 0)
        throw DegenerateError("seed polynomial hit a vanishing denominator factor");
      term *= num / den;
    }
    return terms;
  }
  const Rational& q = p.q;
  Rational qmv = pow_int(q, -v);
  Rational head = p.c * p.d * pow_int(q, v + 1) / (p.a * p.b);
  Rational da = p.d * q / p.a, db = p.d * q / p.b;
  Rational qk(1);
  for (long k = 0; k <= v; ++k) {
    terms.push_back(term);
    if (k == v) break;
    Rational num = (1 - qmv * qk) * (1 - head * qk) * (1 - qk / u) *
                   (1 - p.d * u * qk);
    Rational den = (1 - da * qk) * (1 - db * qk) * (1 - p.c * qk) *
                   (1 - q * qk);
    if (den == 0)
      throw DegenerateError("seed polynomial hit a vanishing denominator factor");
    term *= q * num / den;
    qk *= q;
  }
  return terms;
}

inline Rational xi_poly(const ParameterSet& p, long v, const Rational& u) {
  Rational sum(0);
  for (const auto& t : xi_terms(p, v, u)) sum += t;
  return sum;
}

// Residuals of the linear relation between the two difference operators,
// compared without square roots: diagonal entries directly, off-diagonal
// entries as squares.  Both vanish identically in the site coordinate.
inline Rational twist_diag_residual(const ParameterSet& p, const Rational& u) {
  ParameterSet tp = twist(p);
  Rational lhs = potential_B(p, u) + potential_D(p, u);
  Rational rhs = alpha(p) * (potential_B(tp, u) + potential_D(tp, u)) +
                 alpha_prime(p);
  return lhs - rhs;
}

inline Rational twist_offdiag_sq_residual(const ParameterSet& p,
                                          const Rational& u) {
  ParameterSet tp = twist(p);
  Rational up = shift_site(p, u, 1);
  Rational lhs = potential_B(p, u) * potential_D(p, up);
  Rational rhs = alpha(p) * alpha(p) * potential_B(tp, u) * potential_D(tp, up);
  return lhs - rhs;
}

struct TwistedPotentials {
  std::vector<Rational> Bp;  // x = 0 .. N+M
  std::vector<Rational> Dp;  // x = 0 .. N+1
};

// Tabulates the twisted potentials on the extended grid and enforces the sign
// pattern the deletion construction relies on.
inline TwistedPotentials twisted_potentials(const ParameterSet& p, long M) {
  if (!m_range_ok(p, M))
    throw RangeError("deletion margin too large for these parameters");
  long N = lattice_size(p);
  ParameterSet tp = twist(p);
  TwistedPotentials t;
  t.Bp.reserve(N + M + 1);
  t.Dp.reserve(N + 2);
  for (long x = 0; x <= N + M; ++x) {
    Rational b = potential_B(tp, site(p, x));
    if (x <= N + M - 1 && !(b > 0))
      throw RangeError("need twisted B(x) > 0 for x = 0.." + std::to_string(N + M - 1));
    t.Bp.push_back(b);
  }
  for (long x = 0; x <= N + 1; ++x) {
    Rational d = potential_D(tp, site(p, x));
    if ((x == 0 || x == N + 1) && d != 0)
      throw RangeError("twisted D(x) must vanish at x = 0 and x = " + std::to_string(N + 1));
    if (x >= 1 && x <= N && !(d > 0))
      throw RangeError("need twisted D(x) > 0 for x = 1.." + std::to_string(N));
    t.Dp.push_back(d);
  }
  return t;
}

// Ratio of the original ground weight to the twisted one, extended over the
// grid by the forward recurrence nu(x+1) = B(x) / (alpha B'(x)) * nu(x).
// Once B(N) = 0 has been crossed the values stay exactly zero.
inline std::vector<Rational> nu_grid(const ParameterSet& p, long x_hi) {
  ParameterSet tp = twist(p);
  Rational al = alpha(p);
  std::vector<Rational> nu(x_hi + 1);
  nu[0] = 1;
  for (long x = 0; x < x_hi; ++x) {
    Rational bp = potential_B(tp, site(p, x));
    if (bp == 0)
      throw RangeError("deletion margin too large: twisted B vanished at x = " +
                       std::to_string(x));
    nu[x + 1] = potential_B(p, site(p, x)) / (al * bp) * nu[x];
  }
  return nu;
}

// Squared ground weight of the twisted system on 0..N, from the same
// telescoping product that defines the original one.
inline std::vector<Rational> twisted_ground_weight_sq(const ParameterSet& p) {
  long N = lattice_size(p);
  ParameterSet tp = twist(p);
  std::vector<Rational> w(N + 1);
  w[0] = 1;
  for (long x = 0; x < N; ++x) {
    Rational d = potential_D(tp, site(p, x + 1));
    if (d == 0) throw DegenerateError("twisted D vanished inside the bulk");
    w[x + 1] = w[x] * potential_B(tp, site(p, x)) / d;
  }
  return w;
}

struct VirtualEquationReport {
  long level = 0;
  std::vector<Rational> residuals;  // finite-matrix row residuals, x = 0..N
  Rational boundary_residual;       // residuals[N]; equals B'(N) * xi(N+1)
};

// The seed polynomial satisfies the twisted eigenvalue equation identically in
// the site coordinate, but the finite matrix truncates the coupling from row
// x = N to the absent site N+1, so that single row must fail.  Reports the
// row residuals and the exact boundary mismatch.
inline VirtualEquationReport verify_virtual_equation(const ParameterSet& p,
                                                     long v) {
  long N = lattice_size(p);
  ParameterSet tp = twist(p);
  Rational ev = energy(tp, v);
  std::vector<Rational> xi(N + 2);
  for (long x = 0; x <= N + 1; ++x) xi[x] = xi_poly(p, v, site(p, x));

  VirtualEquationReport rep;
  rep.level = v;
  for (long x = 0; x <= N; ++x) {
    Rational bp = potential_B(tp, site(p, x));
    Rational dp = potential_D(tp, site(p, x));
    Rational row = (x < N) ? Rational(bp * (xi[x] - xi[x + 1]))
                           : Rational(bp * xi[x]);
    if (dp != 0) row += dp * (xi[x] - xi[x - 1]);
    rep.residuals.push_back(row - ev * xi[x]);
  }
  rep.boundary_residual = rep.residuals.back();
  if (rep.boundary_residual == 0)
    throw DegenerateError("level " + std::to_string(v) +
                          " satisfies the truncated boundary row; parameters degenerate");
  return rep;
}

struct VirtualData {
  ParameterSet params;
  long deletions = 0;  // M, the extension of the grid beyond N
  Rational alpha_value;
  Rational alpha_prime_value;
  std::vector<long> v_set;
  std::map<long, std::vector<Rational>> xi_grids;  // v -> values on 0..N+1
  std::vector<Rational> nu;                        // 0..N+M
  std::vector<Rational> twisted_weight_sq;         // 0..N
};

inline VirtualData build_virtual_data(const ParameterSet& p, long M) {
  VirtualData data;
  data.params = p;
  data.deletions = M;
  data.alpha_value = alpha(p);
  data.alpha_prime_value = alpha_prime(p);
  if (!(data.alpha_value > 0)) throw SignError("need alpha > 0");
  if (!(data.alpha_prime_value < 0)) throw SignError("need alpha' < 0");
  if (virtual_energy(p, 0) != data.alpha_prime_value)
    throw SignError("lowest seed energy must equal alpha'");

  twisted_potentials(p, M);  // enforces the sign pattern on the extended grid

  long N = lattice_size(p);
  data.v_set = virtual_indices(p);
  std::vector<Rational> seen_energies;
  for (long v : data.v_set) {
    Rational ev = virtual_energy(p, v);
    if (!(ev < 0))
      throw SignError("need seed energy < 0 at level " + std::to_string(v));
    for (const auto& e : seen_energies)
      if (e == ev)
        throw DegenerateError("seed energies must be mutually distinct");
    seen_energies.push_back(ev);

    std::vector<Rational> grid(N + 2);
    for (long x = 0; x <= N + 1; ++x) {
      grid[x] = xi_poly(p, v, site(p, x));
      if (!(grid[x] > 0))
        throw SignError("need xi_" + std::to_string(v) + "(x) > 0 on 0.." +
                        std::to_string(N + 1));
    }
    data.xi_grids.emplace(v, std::move(grid));
  }
  data.nu = nu_grid(p, N + M);
  data.twisted_weight_sq = twisted_ground_weight_sq(p);
  return data;
}

}  // namespace miracah
