#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "miracah/casoratian.hpp"
#include "miracah/virtual_sector.hpp"

namespace miracah {

// Stepwise deletion of seed levels.  Every quantity is kept square-root free:
// determinant grids, squared weights and ratios.  The square roots of the
// textbook presentation only pair up in the identities we verify, so they
// never need to be materialized.

inline std::vector<Column> xi_columns(const ParameterSet& p,
                                      const std::vector<long>& ds,
                                      const Rational& base) {
  std::vector<Column> cols;
  cols.reserve(ds.size());
  for (long d : ds)
    cols.push_back(poly_column(
        "xi" + std::to_string(d), p,
        [p, d](const Rational& u) { return xi_poly(p, d, u); }, base));
  return cols;
}

// W[xi_{d1},...,xi_{ds}] at an arbitrary site coordinate.
inline Rational w_xi_at(const ParameterSet& p, const std::vector<long>& ds,
                        const Rational& base) {
  return casoratian(xi_columns(p, ds, base));
}

// W[xi_{d1},...,xi_{ds}, xi_v] at an arbitrary site coordinate.
inline Rational w_xi_seed_at(const ParameterSet& p,
                             const std::vector<long>& ds, long v,
                             const Rational& base) {
  auto cols = xi_columns(p, ds, base);
  cols.push_back(poly_column(
      "xi" + std::to_string(v), p,
      [p, v](const Rational& u) { return xi_poly(p, v, u); }, base));
  return casoratian(cols);
}

struct DeletionChain {
  ParameterSet params;
  std::vector<long> indices;        // deletion order, mutually distinct
  long N = 0;
  std::vector<Rational> nu;         // weight ratio grid, 0..nu_top
  std::vector<Rational> tw_sq;      // twisted squared ground weight, 0..N
  std::vector<Rational> W_xi;       // W[xi_{d1},...,xi_{ds}](x), x = 0..N+1
  std::vector<Rational> W_xi_nu;    // W[xi_{d1},...,xi_{ds},nu](x), x = 0..N+1

  long size() const { return static_cast<long>(indices.size()); }
};

namespace detail {

inline void require_definite_sign(const std::vector<Rational>& values,
                                  long hi, const std::string& what) {
  int s = sign_of(values.at(0));
  if (s == 0) throw SignError(what + " vanished at x = 0");
  for (long x = 1; x <= hi; ++x) {
    if (sign_of(values.at(x)) != s)
      throw SignError(what + " changes sign before x = " + std::to_string(hi));
  }
}

}  // namespace detail

inline Rational hatted_B(const DeletionChain& c, long x);
inline Rational hatted_D(const DeletionChain& c, long x);

inline DeletionChain make_chain(const ParameterSet& p,
                                std::vector<long> indices) {
  const long s = static_cast<long>(indices.size());
  auto window = virtual_indices(p);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (std::find(window.begin(), window.end(), indices[i]) == window.end())
      throw RangeError("deletion index " + std::to_string(indices[i]) +
                       " lies outside the admissible seed window");
    for (std::size_t j = i + 1; j < indices.size(); ++j)
      if (indices[i] == indices[j])
        throw RangeError("deletion indices must be mutually distinct");
  }
  if (s > 0 && !m_range_ok(p, s))
    throw RangeError("deleting " + std::to_string(s) +
                     " levels exceeds the admissible margin");

  DeletionChain c;
  c.params = p;
  c.indices = std::move(indices);
  c.N = lattice_size(p);

  try {
    c.nu = nu_grid(p, c.N + s + 1);
  } catch (const RangeError&) {
    c.nu = nu_grid(p, c.N + s);
  }
  c.tw_sq = twisted_ground_weight_sq(p);

  c.W_xi.resize(c.N + 2);
  for (long x = 0; x <= c.N + 1; ++x)
    c.W_xi[x] = w_xi_at(p, c.indices, site(p, x));
  detail::require_definite_sign(c.W_xi, c.N + 1, "seed determinant grid");

  c.W_xi_nu.resize(c.N + 2);
  for (long x = 0; x <= c.N + 1; ++x) {
    auto cols = xi_columns(p, c.indices, site(p, x));
    cols.push_back(grid_column("nu", c.nu, x));
    c.W_xi_nu[x] = casoratian(cols);
  }
  detail::require_definite_sign(c.W_xi_nu, c.N, "ground determinant grid");

  if (s >= 1) {
    for (long x = 0; x <= c.N; ++x)
      if (!(hatted_B(c, x) > 0))
        throw SignError("need hatted B(x) > 0 for x = 0.." + std::to_string(c.N));
    if (hatted_D(c, 0) != 0 || hatted_D(c, c.N + 1) != 0)
      throw SignError("hatted D must vanish at x = 0 and x = " +
                      std::to_string(c.N + 1));
    for (long x = 1; x <= c.N; ++x)
      if (!(hatted_D(c, x) > 0))
        throw SignError("need hatted D(x) > 0 for x = 1.." + std::to_string(c.N));
  }
  return c;
}

inline DeletionChain extend_chain(const DeletionChain& c, long d_next) {
  auto indices = c.indices;
  indices.push_back(d_next);
  return make_chain(c.params, std::move(indices));
}

// Potentials of the rewritten operator after s deletions.  The grids of the
// shorter chain enter through ratios, so they are recomputed on demand.
inline Rational hatted_B(const DeletionChain& c, long x) {
  const long s = c.size();
  if (s < 1) throw RangeError("hatted potentials need at least one deletion");
  std::vector<long> parent(c.indices.begin(), c.indices.end() - 1);
  const ParameterSet& p = c.params;
  Rational wp0 = w_xi_at(p, parent, site(p, x));
  Rational wp1 = w_xi_at(p, parent, site(p, x + 1));
  return alpha(p) * twisted_B(p, site(p, x + s - 1)) * wp0 / wp1 *
         c.W_xi.at(x + 1) / c.W_xi.at(x);
}

inline Rational hatted_D(const DeletionChain& c, long x) {
  const long s = c.size();
  if (s < 1) throw RangeError("hatted potentials need at least one deletion");
  Rational dp = twisted_D(c.params, site(c.params, x));
  if (dp == 0) return Rational(0);
  std::vector<long> parent(c.indices.begin(), c.indices.end() - 1);
  const ParameterSet& p = c.params;
  Rational wp0 = w_xi_at(p, parent, site(p, x));
  Rational wp1 = w_xi_at(p, parent, site(p, x + 1));
  return alpha(p) * dp * wp1 / wp0 * c.W_xi.at(x - 1) / c.W_xi.at(x);
}

// Standard-form potentials of the deformed operator.  For an empty chain they
// collapse to the original potentials through the weight-ratio recurrences.
inline Rational standard_B(const DeletionChain& c, long x) {
  const long s = c.size();
  const ParameterSet& p = c.params;
  return alpha(p) * twisted_B(p, site(p, x + s)) * c.W_xi.at(x) /
         c.W_xi.at(x + 1) * c.W_xi_nu.at(x + 1) / c.W_xi_nu.at(x);
}

inline Rational standard_D(const DeletionChain& c, long x) {
  const ParameterSet& p = c.params;
  Rational dp = twisted_D(p, site(p, x));
  if (dp == 0) return Rational(0);
  return alpha(p) * dp * c.W_xi.at(x + 1) / c.W_xi.at(x) *
         c.W_xi_nu.at(x - 1) / c.W_xi_nu.at(x);
}

// Squared prefactor of the transformed vectors; the content left after the
// determinant factor is divided out.  Positive on the whole grid.
inline Rational eigen_weight(const DeletionChain& c, long x) {
  const ParameterSet& p = c.params;
  Rational prod(1);
  for (long j = 1; j <= c.size(); ++j)
    prod *= alpha(p) * twisted_B(p, site(p, x + j - 1));
  return prod * c.tw_sq.at(x) / (c.W_xi.at(x) * c.W_xi.at(x + 1));
}

inline std::vector<Rational> eigen_weight_grid(const DeletionChain& c) {
  std::vector<Rational> w(c.N + 1);
  for (long x = 0; x <= c.N; ++x) w[x] = eigen_weight(c, x);
  return w;
}

// Determinant content of the transformed eigenvector for level n, on 0..N+1.
// The top entry vanishes because the weight-ratio column dies above the grid.
inline std::vector<Rational> transformed_poly_grid(const DeletionChain& c,
                                                   long n) {
  const ParameterSet& p = c.params;
  std::vector<Rational> pn(c.nu.size());
  for (std::size_t i = 0; i < c.nu.size(); ++i)
    pn[i] = c.nu[i] * racah_poly(p, n, site(p, static_cast<long>(i)));
  std::vector<Rational> grid(c.N + 2);
  for (long x = 0; x <= c.N + 1; ++x) {
    auto cols = xi_columns(p, c.indices, site(p, x));
    cols.push_back(grid_column("nu*P" + std::to_string(n), pn, x));
    grid[x] = casoratian(cols);
  }
  return grid;
}

// Determinant content of the transformed seed vector for level v, on 0..N+1.
inline std::vector<Rational> transformed_seed_grid(const DeletionChain& c,
                                                   long v) {
  std::vector<Rational> grid(c.N + 2);
  for (long x = 0; x <= c.N + 1; ++x)
    grid[x] = w_xi_seed_at(c.params, c.indices, v, site(c.params, x));
  return grid;
}

// Expected squared norm of the transformed eigenvector for level n.
inline Rational norm_product(const DeletionChain& c, long n) {
  Rational prod(1);
  for (long d : c.indices)
    prod *= energy(c.params, n) - virtual_energy(c.params, d);
  return prod / norm_sq(c.params, n);
}

// One row of the deformed eigenvalue problem in determinant form, with every
// coupling kept, evaluated at an arbitrary site coordinate.  Vanishes
// identically in the site coordinate for any remaining seed level.
inline Rational deformed_seed_row_residual(const ParameterSet& p,
                                           const std::vector<long>& ds, long v,
                                           const Rational& u) {
  const long s = static_cast<long>(ds.size());
  if (s < 1) throw RangeError("row residual needs at least one deletion");
  std::vector<long> parent(ds.begin(), ds.end() - 1);
  Rational al = alpha(p);
  auto W = [&](long k) { return w_xi_at(p, ds, shift_site(p, u, k)); };
  auto Wp = [&](long k) { return w_xi_at(p, parent, shift_site(p, u, k)); };
  auto G = [&](long k) { return w_xi_seed_at(p, ds, v, shift_site(p, u, k)); };

  Rational hat_b = al * twisted_B(p, shift_site(p, u, s - 1)) * Wp(0) / Wp(1) *
                   W(1) / W(0);
  Rational hat_d_up = al * twisted_D(p, shift_site(p, u, 1)) * Wp(2) / Wp(1) *
                      W(0) / W(1);
  Rational diag = hat_b + hat_d_up + virtual_energy(p, ds.back()) -
                  virtual_energy(p, v);
  Rational down = al * twisted_D(p, u) * W(1) / W(0);
  Rational up = al * twisted_B(p, shift_site(p, u, s)) * W(0) / W(1);
  return diag * G(0) - down * G(-1) - up * G(1);
}

struct DeformedEquationReport {
  long level = 0;
  std::vector<Rational> residuals;  // finite-matrix rows, x = 0..N
  Rational boundary_residual;       // residuals[N]
};

// Rows of the deformed eigenvalue problem for the finite matrix, applied to
// the determinant content of a surviving seed vector.  The coupling from row
// N to the absent site N+1 is what the matrix drops, so that row must fail;
// for eigenvector content (eigen_rows below) the same coupling dies on its
// own because the determinant vanishes at N+1.
inline DeformedEquationReport verify_deformed_equation(const DeletionChain& c,
                                                       long v) {
  const ParameterSet& p = c.params;
  const long s = c.size();
  Rational al = alpha(p);
  Rational es = virtual_energy(p, c.indices.back());
  Rational ev = virtual_energy(p, v);
  auto grid = transformed_seed_grid(c, v);

  DeformedEquationReport rep;
  rep.level = v;
  for (long x = 0; x <= c.N; ++x) {
    Rational row = (hatted_B(c, x) + hatted_D(c, x + 1) + es - ev) * grid[x];
    Rational dp = twisted_D(p, site(p, x));
    if (dp != 0) row -= al * dp * c.W_xi[x + 1] / c.W_xi[x] * grid[x - 1];
    if (x < c.N)
      row -= al * twisted_B(p, site(p, x + s)) * c.W_xi[x] / c.W_xi[x + 1] *
             grid[x + 1];
    rep.residuals.push_back(row);
  }
  rep.boundary_residual = rep.residuals.back();
  if (rep.boundary_residual == 0)
    throw DegenerateError("seed level " + std::to_string(v) +
                          " satisfies the truncated boundary row");
  return rep;
}

// Same rows applied to eigenvector content; these must vanish for all
// x = 0..N, boundary included.
inline std::vector<Rational> eigen_rows(const DeletionChain& c, long n) {
  const ParameterSet& p = c.params;
  const long s = c.size();
  Rational al = alpha(p);
  Rational es = virtual_energy(p, c.indices.back());
  Rational en = energy(p, n);
  auto grid = transformed_poly_grid(c, n);

  std::vector<Rational> rows;
  for (long x = 0; x <= c.N; ++x) {
    Rational row = (hatted_B(c, x) + hatted_D(c, x + 1) + es - en) * grid[x];
    Rational dp = twisted_D(p, site(p, x));
    if (dp != 0) row -= al * dp * c.W_xi[x + 1] / c.W_xi[x] * grid[x - 1];
    if (x < c.N)
      row -= al * twisted_B(p, site(p, x + s)) * c.W_xi[x] / c.W_xi[x + 1] *
             grid[x + 1];
    rows.push_back(row);
  }
  return rows;
}

struct OrderIndependenceReport {
  bool potentials_match = true;
  bool norms_match = true;
  // deletion order paired with the global sign of its transformed vector
  // relative to the sorted order
  std::vector<std::pair<std::vector<long>, int>> signs;
};

inline OrderIndependenceReport order_independence_check(const ParameterSet& p,
                                                        std::vector<long> D_set,
                                                        long n) {
  std::sort(D_set.begin(), D_set.end());
  auto ref = make_chain(p, D_set);
  auto ref_grid = transformed_poly_grid(ref, n);
  Rational ref_norm = norm_product(ref, n);

  OrderIndependenceReport rep;
  std::vector<long> perm = D_set;
  do {
    auto c = make_chain(p, perm);
    for (long x = 0; x <= ref.N; ++x) {
      if (standard_B(c, x) != standard_B(ref, x) ||
          standard_D(c, x) != standard_D(ref, x))
        rep.potentials_match = false;
    }
    if (norm_product(c, n) != ref_norm) rep.norms_match = false;

    auto grid = transformed_poly_grid(c, n);
    int sign = 0;
    for (long x = 0; x <= ref.N + 1; ++x) {
      if (ref_grid[x] == 0 && grid[x] == 0) continue;
      int here = (grid[x] == ref_grid[x]) ? 1 : (grid[x] == -ref_grid[x]) ? -1 : 0;
      if (here == 0 || (sign != 0 && here != sign)) {
        sign = 0;
        break;
      }
      sign = here;
    }
    rep.signs.emplace_back(perm, sign);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return rep;
}

}  // namespace miracah
