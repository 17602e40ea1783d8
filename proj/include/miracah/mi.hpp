#pragma once

// Multi-index layer: denominator polynomials, the deformed orthogonal
// polynomials, their normalisation constants, potentials and weights in
// denominator-polynomial form, shift operators, the similarity-transformed
// Hamiltonian, level reductions, the mirror map, and zero counting.
//
// Everything is rational in the site coordinate.  Polynomiality in the
// spectral variable eta is not assumed: it is proved at runtime by exact
// interpolation with hold-out nodes, and the fitted form is then used
// wherever the Casoratian quotient has a removable singularity.

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "miracah/crum.hpp"
#include "miracah/polynomial.hpp"

namespace miracah {

// Canonical off-grid evaluation points for identity testing: small-height
// rationals clear of the integer grid, fixed for reproducibility.
inline const std::vector<Rational>& off_grid_points() {
  static const std::vector<Rational> pts = {rat(1, 3), rat(1, 2), rat(5, 7),
                                            rat(9, 4), rat(11, 3)};
  return pts;
}

struct IndexSet {
  std::vector<long> d;  // sorted ascending, mutually distinct, each >= 1
  long ell = 0;         // sum d_j - M(M-1)/2

  long size() const { return static_cast<long>(d.size()); }
};

inline IndexSet make_index_set(const ParameterSet& p, std::vector<long> ds) {
  std::sort(ds.begin(), ds.end());
  auto window = virtual_indices(p);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (std::find(window.begin(), window.end(), ds[i]) == window.end())
      throw RangeError("deletion level " + std::to_string(ds[i]) +
                       " outside the virtual window");
    if (i > 0 && ds[i] == ds[i - 1])
      throw RangeError("deletion levels must be mutually distinct");
  }
  const long m = static_cast<long>(ds.size());
  if (m > 0 && !m_range_ok(p, m))
    throw RangeError(p.family == Family::racah
                         ? "deletion margin too large: need d + M < a + b"
                         : "deletion margin too large: need a b < d q^M");
  IndexSet out;
  out.ell = -m * (m - 1) / 2;
  for (long d : ds) out.ell += d;
  out.d = std::move(ds);
  return out;
}

// ---- normalisation constants --------------------------------------------

inline Rational mi_constant_cd(const ParameterSet& p,
                               const std::vector<long>& ds) {
  const long m = static_cast<long>(ds.size());
  Rational out = 1 / varphi_m(p, site(p, 0), m);
  for (long j = 0; j < m; ++j)
    for (long k = j + 1; k < m; ++k)
      out *= (virtual_energy(p, ds[j]) - virtual_energy(p, ds[k])) /
             (alpha(p) * twisted_B(p, site(p, j)));
  return out;
}

inline Rational mi_dtilde_sq(const ParameterSet& p,
                             const std::vector<long>& ds, long n) {
  const long m = static_cast<long>(ds.size());
  Rational out =
      varphi_m(p, site(p, 0), m) / varphi_m(p, site(p, 0), m + 1);
  for (long j = 0; j < m; ++j)
    out *= (energy(p, n) - virtual_energy(p, ds[j])) /
           (alpha(p) * twisted_B(p, site(p, j)));
  return out;
}

inline Rational mi_constant_cdn(const ParameterSet& p,
                                const std::vector<long>& ds, long n) {
  Rational sign = (ds.size() % 2 == 0) ? 1 : -1;
  return sign * mi_constant_cd(p, ds) * mi_dtilde_sq(p, ds, n);
}

// ---- pointwise evaluation ------------------------------------------------

// Denominator polynomial via the seed Casoratian, normalised to 1 at x = 0.
inline Rational denominator_poly(const ParameterSet& p,
                                 const std::vector<long>& ds,
                                 const Rational& u) {
  const long m = static_cast<long>(ds.size());
  Rational phi = varphi_m(p, u, m);
  if (phi == 0)
    throw DegenerateError(
        "removable singularity: varphi_M vanishes at the requested point");
  return w_xi_at(p, ds, u) / (mi_constant_cd(p, ds) * phi);
}

namespace detail {

// Row factor of the determinant form of the deformed polynomial: the ratio
// of ground-level twists that eliminates nu from the Casoratian definition.
// The row offset j counts steps above the base point, 0 <= j <= M.
inline Rational mi_row_factor(const ParameterSet& p, long m, const Rational& u,
                              long j) {
  if (p.family == Family::racah) {
    Rational num =
        pochhammer_multi({u + p.a, u + p.b}, j) *
        pochhammer_multi({u + p.d - p.a + j + 1, u + p.d - p.b + j + 1},
                         m - j);
    return num / pochhammer_multi({p.d - p.a + 1, p.d - p.b + 1}, m);
  }
  Rational qj1 = pow_int(p.q, j + 1);
  Rational num =
      q_pochhammer_multi({p.a * u, p.b * u}, p.q, j) *
      q_pochhammer_multi({p.d / p.a * qj1 * u, p.d / p.b * qj1 * u}, p.q,
                         m - j);
  Rational den = pow_int(p.a * p.b / (p.d * p.q), j) * pow_int(u, m) *
                 q_pochhammer_multi({p.d * p.q / p.a, p.d * p.q / p.b}, p.q, m);
  return num / den;
}

}  // namespace detail

// Deformed polynomial via the determinant form: seed columns plus a final
// column of row-factored original polynomials.  Works at any rational site
// value away from zeros of varphi_{M+1}, including beyond the grid.
inline Rational mi_poly(const ParameterSet& p, const std::vector<long>& ds,
                        long n, const Rational& u) {
  const long m = static_cast<long>(ds.size());
  Rational phi = varphi_m(p, u, m + 1);
  if (phi == 0)
    throw DegenerateError(
        "removable singularity: varphi_{M+1} vanishes at the requested point");
  Rational cdn = mi_constant_cdn(p, ds, n);
  if (cdn == 0)
    throw DegenerateError(
        "deleted level collides with an eigenlevel at these parameters");
  auto cols = xi_columns(p, ds, u);
  cols.push_back(Column{"r*P_n", [p, m, u, n](long j) -> Rational {
                          return detail::mi_row_factor(p, m, u, j) *
                                 racah_poly(p, n, shift_site(p, u, j));
                        }});
  return casoratian(cols) / (cdn * phi);
}

// Deformed polynomial on the grid via the Casoratian definition: the chain's
// ground-row determinant divided by the deformed ground level.  Only valid up
// to x = N since nu at the shifted parameters dies above the grid.
inline std::vector<Rational> mi_poly_grid_casoratian(const DeletionChain& c,
                                                     long n) {
  const ParameterSet& p = c.params;
  const long m = c.size();
  auto pm = shift_params(p, kDeltaTilde, m);
  auto num = nu_grid(pm, c.N);
  auto gn = transformed_poly_grid(c, n);
  Rational cdn = mi_constant_cdn(p, c.indices, n);
  if (cdn == 0)
    throw DegenerateError(
        "deleted level collides with an eigenlevel at these parameters");
  std::vector<Rational> out(c.N + 1);
  for (long x = 0; x <= c.N; ++x)
    out[x] = gn.at(x) / (cdn * varphi_m(p, site(p, x), m + 1) * num.at(x));
  return out;
}

// ---- polynomiality: exact fit with hold-out nodes -------------------------

struct EtaPolynomial {
  Poly coeffs;               // ascending powers of eta, trimmed
  long declared_degree = 0;  // generic degree claimed by the construction
};

inline Rational eta_poly_eval(const EtaPolynomial& f, const ParameterSet& p_eta,
                              const Rational& u) {
  return poly_eval(f.coeffs, eta(p_eta, u));
}

inline Rational eta_poly_leading(const EtaPolynomial& f) {
  return f.coeffs.empty() ? Rational(0) : f.coeffs.back();
}

// Fits a polynomial of the declared degree in eta(x; p_eta) through grid
// values at x = 0..K and demands every remaining node reproduce exactly:
// a nonzero hold-out residual disproves polynomiality and throws.
inline EtaPolynomial fit_eta_polynomial(const std::vector<Rational>& values,
                                        const ParameterSet& p_eta,
                                        long declared_degree) {
  const long count = static_cast<long>(values.size());
  if (count < declared_degree + 2)
    throw PolynomialFitError(
        "polynomial fit needs at least one hold-out node beyond the degree");
  std::vector<Rational> xs, ys;
  for (long x = 0; x <= declared_degree; ++x) {
    xs.push_back(eta(p_eta, site(p_eta, x)));
    ys.push_back(values[x]);
  }
  EtaPolynomial out{newton_interpolate(xs, ys), declared_degree};
  for (long x = 0; x < count; ++x)
    if (poly_eval(out.coeffs, eta(p_eta, site(p_eta, x))) != values[x])
      throw PolynomialFitError("hold-out residual nonzero at x = " +
                               std::to_string(x));
  return out;
}

namespace detail {

// Samples a rational-in-u expression at integer sites, skipping removable
// singularities and eta collisions, until degree + 3 usable nodes are found.
// Unvalidated parameter sets (the mirror image, for instance) need the
// skipping; validated ones never trigger it.
inline EtaPolynomial fit_from_samples(
    const std::function<Rational(long)>& value_at, const ParameterSet& p_eta,
    long degree) {
  std::vector<Rational> nodes, values;
  std::vector<long> xs;
  const long want = degree + 3;
  for (long x = 0; static_cast<long>(xs.size()) < want; ++x) {
    if (x > 8 * want + 16)
      throw PolynomialFitError("could not collect enough usable fit nodes");
    Rational node = eta(p_eta, site(p_eta, x));
    if (std::find(nodes.begin(), nodes.end(), node) != nodes.end()) continue;
    try {
      values.push_back(value_at(x));
    } catch (const DegenerateError&) {
      continue;
    }
    nodes.push_back(node);
    xs.push_back(x);
  }
  std::vector<Rational> head(nodes.begin(), nodes.begin() + degree + 1);
  std::vector<Rational> vals(values.begin(), values.begin() + degree + 1);
  EtaPolynomial out{newton_interpolate(head, vals), degree};
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (poly_eval(out.coeffs, nodes[i]) != values[i])
      throw PolynomialFitError("hold-out residual nonzero at x = " +
                               std::to_string(xs[i]));
  return out;
}

}  // namespace detail

inline EtaPolynomial fit_denominator_poly(const ParameterSet& p,
                                          const IndexSet& dset) {
  auto p_eta = shift_params(p, kDeltaTilde, dset.size() - 1);
  return detail::fit_from_samples(
      [&](long x) { return denominator_poly(p, dset.d, site(p, x)); }, p_eta,
      dset.ell);
}

inline EtaPolynomial fit_mi_poly(const ParameterSet& p, const IndexSet& dset,
                                 long n) {
  auto p_eta = shift_params(p, kDeltaTilde, dset.size());
  return detail::fit_from_samples(
      [&](long x) { return mi_poly(p, dset.d, n, site(p, x)); }, p_eta,
      dset.ell + n);
}

// ---- leading coefficients -------------------------------------------------

inline Rational leading_coeff_xi(const ParameterSet& p,
                                 const std::vector<long>& ds) {
  const long m = static_cast<long>(ds.size());
  Rational out(1);
  if (p.family == Family::racah) {
    Rational base = -p.a - p.b + p.c + p.d;
    for (long j = 0; j < m; ++j) {
      out *= pochhammer(base + ds[j] + 1, ds[j]);
      out *= pochhammer_multi({p.c, p.d - p.a + 1, p.d - p.b + 1}, j) /
             pochhammer_multi({p.c, p.d - p.a + 1, p.d - p.b + 1}, ds[j]);
    }
    for (long j = 0; j < m; ++j)
      for (long k = j + 1; k < m; ++k)
        out /= base + ds[j] + ds[k] + 1;
  } else {
    Rational base = p.c * p.d / (p.a * p.b);
    for (long j = 0; j < m; ++j) {
      out *= q_pochhammer(base * pow_int(p.q, ds[j] + 1), p.q, ds[j]);
      out *= q_pochhammer_multi(
                 {p.c, p.d * p.q / p.a, p.d * p.q / p.b}, p.q, j) /
             q_pochhammer_multi(
                 {p.c, p.d * p.q / p.a, p.d * p.q / p.b}, p.q, ds[j]);
    }
    for (long j = 0; j < m; ++j)
      for (long k = j + 1; k < m; ++k)
        out /= 1 - base * pow_int(p.q, ds[j] + ds[k] + 1);
  }
  return out;
}

inline Rational leading_coeff_p(const ParameterSet& p,
                                const std::vector<long>& ds, long n) {
  const long m = static_cast<long>(ds.size());
  Rational out = leading_coeff_xi(p, ds);
  if (p.family == Family::racah) {
    out *= pochhammer(p.a + p.b + p.c - p.d + n - 1, n) * pochhammer(p.c, m) /
           pochhammer_multi({p.a, p.b, p.c}, n);
    for (long j = 0; j < m; ++j) out /= p.c + n + ds[j];
  } else {
    out *= q_pochhammer(p.a * p.b * p.c / p.d * pow_int(p.q, n - 1), p.q, n) *
           q_pochhammer(p.c, p.q, m) /
           q_pochhammer_multi({p.a, p.b, p.c}, p.q, n);
    for (long j = 0; j < m; ++j)
      out /= 1 - p.c * pow_int(p.q, n + ds[j]);
  }
  return out;
}

// ---- assembled system ------------------------------------------------------

struct MiSystem {
  ParameterSet params;        // base parameters
  ParameterSet params_m;      // base shifted by M twisted steps
  ParameterSet params_delta;  // base shifted by delta
  IndexSet index_set;
  long N = 0;
  EtaPolynomial xi_fit;              // denominator polynomial at base params
  EtaPolynomial xi_delta_fit;        // and at the delta-shifted ones
  std::vector<Rational> xi;          // grid values, x = 0..x_hi
  std::vector<Rational> xi_delta;    // grid values, x = 0..x_hi
  std::vector<Rational> psi_sq;      // squared weight, x = 0..N
};

// Builds grids through the proven polynomial fits so that grid values stay
// defined even where the Casoratian quotient has a removable singularity.
// Positivity of the denominator polynomial is enforced only for validated
// parameter sets; everything else is a rational identity either way.
inline MiSystem make_mi_system(const ParameterSet& p, IndexSet dset,
                               long x_hi = -1) {
  MiSystem s;
  s.params = p;
  s.index_set = std::move(dset);
  const long m = s.index_set.size();
  s.params_m = shift_params(p, kDeltaTilde, m);
  s.params_delta = shift_params(p, kDelta, 1);
  s.N = lattice_size(p);
  if (x_hi < 0) x_hi = s.N + 1;
  s.xi_fit = fit_denominator_poly(p, s.index_set);
  s.xi_delta_fit = fit_denominator_poly(s.params_delta, s.index_set);
  auto p_eta = shift_params(p, kDeltaTilde, m - 1);
  auto p_eta_delta = shift_params(s.params_delta, kDeltaTilde, m - 1);
  s.xi.resize(x_hi + 1);
  s.xi_delta.resize(x_hi + 1);
  for (long x = 0; x <= x_hi; ++x) {
    s.xi[x] = eta_poly_eval(s.xi_fit, p_eta, site(p, x));
    s.xi_delta[x] = eta_poly_eval(s.xi_delta_fit, p_eta_delta, site(p, x));
  }
  if (s.xi.at(0) != 1)
    throw SignError("denominator polynomial is not 1 at x = 0");
  if (p.validated)
    for (long x = 0; x <= std::min(x_hi, s.N + 1); ++x)
      if (sign_of(s.xi.at(x)) <= 0)
        throw SignError("denominator polynomial not positive at x = " +
                        std::to_string(x));
  s.psi_sq.resize(s.N + 1);
  for (long x = 0; x <= s.N; ++x)
    s.psi_sq[x] = s.xi.at(1) * ground_weight_sq_closed(s.params_m, x) /
                  (s.xi.at(x) * s.xi.at(x + 1));
  return s;
}

inline Rational mi_poly_fit_eval(const MiSystem& s, const EtaPolynomial& fit,
                                 const Rational& u) {
  return eta_poly_eval(fit, s.params_m, u);
}

// ---- potentials and weight in denominator-polynomial form ------------------

inline Rational mi_potential_B(const MiSystem& s, long x) {
  Rational b = potential_B(s.params_m, site(s.params_m, x));
  if (b == 0) return Rational(0);
  return b * s.xi.at(x) / s.xi.at(x + 1) * s.xi_delta.at(x + 1) /
         s.xi_delta.at(x);
}

inline Rational mi_potential_D(const MiSystem& s, long x) {
  Rational dd = potential_D(s.params_m, site(s.params_m, x));
  if (dd == 0) return Rational(0);
  return dd * s.xi.at(x + 1) / s.xi.at(x) * s.xi_delta.at(x - 1) /
         s.xi_delta.at(x);
}

// Gram matrix of the deformed polynomials under the normalised weight;
// diagonal must be 1/(d_n^2 dtilde_{D,n}^2), off-diagonal zero.
inline RatMatrix mi_gram(const MiSystem& s, long n_hi) {
  std::vector<EtaPolynomial> fits;
  for (long n = 0; n <= n_hi; ++n)
    fits.push_back(fit_mi_poly(s.params, s.index_set, n));
  RatMatrix g(n_hi + 1, std::vector<Rational>(n_hi + 1, Rational(0)));
  for (long x = 0; x <= s.N; ++x) {
    Rational w = s.psi_sq.at(x) / s.xi.at(1);
    std::vector<Rational> vals;
    for (long n = 0; n <= n_hi; ++n)
      vals.push_back(mi_poly_fit_eval(s, fits[n], site(s.params, x)));
    for (long n = 0; n <= n_hi; ++n)
      for (long k = 0; k <= n_hi; ++k) g[n][k] += w * vals[n] * vals[k];
  }
  return g;
}

// ---- shift operators and the similarity-transformed Hamiltonian -----------

inline Rational mi_forward_shift_apply(const ParameterSet& p,
                                       const std::vector<long>& ds,
                                       const SiteFn& f, const Rational& u) {
  const long m = static_cast<long>(ds.size());
  auto pm = shift_params(p, kDeltaTilde, m);
  auto pd = shift_params(p, kDelta, 1);
  Rational b0 = potential_B(pm, site(pm, 0));
  Rational u1 = shift_site(p, u, 1);
  return b0 / (varphi(pm, u) * denominator_poly(p, ds, u1)) *
         (denominator_poly(pd, ds, u1) * f(u) -
          denominator_poly(pd, ds, u) * f(u1));
}

inline Rational mi_backward_shift_apply(const ParameterSet& p,
                                        const std::vector<long>& ds,
                                        const SiteFn& f, const Rational& u) {
  const long m = static_cast<long>(ds.size());
  auto pm = shift_params(p, kDeltaTilde, m);
  auto pd = shift_params(p, kDelta, 1);
  Rational b0 = potential_B(pm, site(pm, 0));
  Rational u0 = shift_site(p, u, -1);
  Rational out = potential_B(pm, u) * denominator_poly(p, ds, u) *
                 varphi(pm, u) * f(u);
  Rational dd = potential_D(pm, u);
  if (dd != 0)
    out -= dd * denominator_poly(p, ds, shift_site(p, u, 1)) *
           varphi(pm, u0) * f(u0);
  return out / (b0 * denominator_poly(pd, ds, u));
}

// Applies the similarity-transformed Hamiltonian at an arbitrary rational
// site value; boundary couplings vanish through the potential factors.
inline Rational mi_hamiltonian_apply(const ParameterSet& p,
                                     const std::vector<long>& ds,
                                     const SiteFn& f, const Rational& u) {
  auto pm = shift_params(p, kDeltaTilde, static_cast<long>(ds.size()));
  auto pd = shift_params(p, kDelta, 1);
  Rational out(0);
  Rational b = potential_B(pm, u);
  if (b != 0) {
    Rational u1 = shift_site(p, u, 1);
    Rational x0 = denominator_poly(p, ds, u);
    Rational x1 = denominator_poly(p, ds, u1);
    Rational y0 = denominator_poly(pd, ds, u);
    if (x1 == 0 || y0 == 0)
      throw DegenerateError("denominator polynomial vanishes at a point "
                            "needed by the Hamiltonian");
    out += b * x0 / x1 * (denominator_poly(pd, ds, u1) / y0 * f(u) - f(u1));
  }
  Rational dd = potential_D(pm, u);
  if (dd != 0) {
    Rational u0 = shift_site(p, u, -1);
    Rational x0 = denominator_poly(p, ds, u);
    Rational x1 = denominator_poly(p, ds, shift_site(p, u, 1));
    Rational y0 = denominator_poly(pd, ds, u);
    if (x0 == 0 || y0 == 0)
      throw DegenerateError("denominator polynomial vanishes at a point "
                            "needed by the Hamiltonian");
    out += dd * x1 / x0 * (denominator_poly(pd, ds, u0) / y0 * f(u) - f(u0));
  }
  return out;
}

// Exact matrix of the similarity-transformed Hamiltonian on the grid.
inline RatMatrix mi_hamiltonian_matrix(const MiSystem& s) {
  const long n = s.N;
  RatMatrix h(n + 1, std::vector<Rational>(n + 1, Rational(0)));
  for (long x = 0; x <= n; ++x) {
    h[x][x] = mi_potential_B(s, x) + mi_potential_D(s, x);
    Rational b = potential_B(s.params_m, site(s.params_m, x));
    if (x < n && b != 0) h[x][x + 1] = -b * s.xi.at(x) / s.xi.at(x + 1);
    Rational dd = potential_D(s.params_m, site(s.params_m, x));
    if (x > 0 && dd != 0) h[x][x - 1] = -dd * s.xi.at(x + 1) / s.xi.at(x);
  }
  return h;
}

inline Rational mi_charpoly_at_energy(const MiSystem& s, long n) {
  RatMatrix h = mi_hamiltonian_matrix(s);
  Rational e = energy(s.params, n);
  for (std::size_t i = 0; i < h.size(); ++i) h[i][i] -= e;
  return det_bareiss(h);
}

// ---- reductions ------------------------------------------------------------

// Inserting the hypothetical level-0 seed (identically one) must reproduce
// the one-step-shorter system at twiddle-shifted parameters.
inline Rational reduce_level0(const ParameterSet& p, std::vector<long> ds,
                              long n, const Rational& u) {
  std::sort(ds.begin(), ds.end());
  if (ds.empty() || ds.front() != 0)
    throw RangeError("level-0 reduction needs the level-0 seed");
  return mi_poly(p, ds, n, u);
}

inline Rational reduce_level0_target(const ParameterSet& p,
                                     std::vector<long> ds, long n,
                                     const Rational& u) {
  std::sort(ds.begin(), ds.end());
  if (ds.empty() || ds.front() != 0)
    throw RangeError("level-0 reduction needs the level-0 seed");
  std::vector<long> lowered;
  for (std::size_t i = 1; i < ds.size(); ++i) {
    if (ds[i] - 1 == 0)
      throw UnsupportedError("nested level-0 reduction is unsupported");
    lowered.push_back(ds[i] - 1);
  }
  return mi_poly(shift_params(p, kDeltaTilde, 1), lowered, n, u);
}

// Parameter point at which the single-index system reproduces the
// exceptional-polynomial objects of deletion level ell.
inline ParameterSet exceptional_shift(const ParameterSet& p, long ell) {
  return shift_params(shift_params(p, kDelta, ell), kDeltaTilde, -1);
}

// ---- mirror map -------------------------------------------------------------

inline Rational reflect_site(const ParameterSet& p, const Rational& u) {
  const long n = lattice_size(p);
  if (p.family == Family::racah) return Rational(n) - u;
  return site(p, n) / u;
}

// Closed-form proportionality constant of the classical mirror identity.
inline Rational mirror_constant(const ParameterSet& p, long n) {
  if (p.family == Family::racah)
    return pochhammer_multi({p.a + p.b - p.d, p.a + p.c - p.d}, n) /
           pochhammer_multi({p.b, p.c}, n);
  return pow_int(p.d / p.a, n) *
         q_pochhammer_multi({p.a * p.b / p.d, p.a * p.c / p.d}, p.q, n) /
         q_pochhammer_multi({p.b, p.c}, p.q, n);
}

// ---- zero counting -----------------------------------------------------------

// Number of distinct roots of the fitted deformed polynomial inside the open
// orthogonality interval in the spectral variable.
inline long mi_count_zeros(const ParameterSet& p, const IndexSet& dset,
                           long n) {
  EtaPolynomial fit = fit_mi_poly(p, dset, n);
  auto pm = shift_params(p, kDeltaTilde, dset.size());
  Rational hi = eta(pm, site(pm, lattice_size(p)));
  return count_roots_open(fit.coeffs, Rational(0), hi);
}

}  // namespace miracah
