#pragma once

// Casoratians (discrete Wronskians): determinants of columns shifted down
// the lattice.  A column is an evaluator bound to a base point; entry (j,k)
// is column k advanced by j steps.  Columns may be closed-form functions of
// the site coordinate or grid-backed vectors, so mixed determinants (for
// example polynomials against a recurrence-defined weight ratio) are exact.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "miracah/lattice.hpp"
#include "miracah/matrix.hpp"

namespace miracah {

struct Column {
  std::string label;
  std::function<Rational(long)> at;  // value j steps above the base point
};

inline Column poly_column(std::string label, const ParameterSet& p, SiteFn f,
                          Rational base) {
  auto eval = [p, f = std::move(f), base](long j) {
    return f(shift_site(p, base, j));
  };
  return {std::move(label), std::move(eval)};
}

inline Column grid_column(std::string label, std::vector<Rational> values,
                          long base) {
  auto eval = [values = std::move(values), base, label](long j) {
    long idx = base + j;
    if (idx < 0 || idx >= static_cast<long>(values.size()))
      throw DegenerateError("grid column '" + label + "' indexed outside its range");
    return values[idx];
  };
  return {label, std::move(eval)};
}

inline Column shifted_column(const Column& c, long offset) {
  auto eval = [at = c.at, offset](long j) { return at(j + offset); };
  return {c.label, std::move(eval)};
}

inline Rational casoratian(const std::vector<Column>& cols) {
  const std::size_t n = cols.size();
  if (n == 0) return Rational(1);
  RatMatrix m(n, std::vector<Rational>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) m[j][k] = cols[k].at(static_cast<long>(j));
  return det_bareiss(m);
}

// Vandermonde-like normalizer in the sinusoidal coordinate:
// product over pairs j<k of (eta(x+k-1)-eta(x+j-1)) / eta(k-j).
inline Rational varphi_m(const ParameterSet& p, const Rational& u, long M) {
  if (M < 0) throw DegenerateError("negative block size");
  Rational out(1);
  for (long j = 1; j < M; ++j)
    for (long k = j + 1; k <= M; ++k) {
      Rational num = eta(p, shift_site(p, u, k - 1)) - eta(p, shift_site(p, u, j - 1));
      Rational den = eta(p, site(p, k - j));
      out *= num / den;
    }
  return out;
}

// Same quantity as a product of the single-step varphi at shifted levels;
// kept as an independent route for cross-checks.
inline Rational varphi_m_product(const ParameterSet& p, const Rational& u, long M) {
  Rational out(1);
  for (long j = 1; j < M; ++j)
    for (long k = j + 1; k <= M; ++k)
      out *= varphi(shift_params(p, kDelta, k - j - 1), shift_site(p, u, j - 1));
  return out;
}

}  // namespace miracah
