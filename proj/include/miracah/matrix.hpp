#pragma once

// Dense exact-rational matrices and fraction-free determinants.
// Denominators are cleared row-wise, the integer core runs one-step
// Bareiss elimination (exact divisions only), and the row scales are
// divided back out at the end.

#include <vector>

#include "miracah/rational.hpp"

namespace miracah {

using RatMatrix = std::vector<std::vector<Rational>>;

inline RatMatrix identity_matrix(std::size_t n) {
  RatMatrix m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline Rational det_bareiss(const RatMatrix& input) {
  const std::size_t n = input.size();
  if (n == 0) return Rational(1);
  std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
  Rational scale(1);
  for (std::size_t i = 0; i < n; ++i) {
    if (input[i].size() != n) throw DegenerateError("determinant of non-square matrix");
    mpz_class row_lcm(1);
    for (const auto& e : input[i]) mpz_lcm(row_lcm.get_mpz_t(), row_lcm.get_mpz_t(), e.get_den_mpz_t());
    for (std::size_t j = 0; j < n; ++j) {
      mpz_class f = row_lcm / input[i][j].get_den();
      a[i][j] = input[i][j].get_num() * f;
    }
    scale *= Rational(row_lcm);
  }
  int sign = 1;
  mpz_class prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return Rational(0);
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class t = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = a[k][k];
  }
  Rational det(a[n - 1][n - 1]);
  if (sign < 0) det = -det;
  return det / scale;
}

// Expansion along the first row; independent slow route for cross-checks.
inline Rational det_cofactor(const RatMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return Rational(1);
  if (n == 1) return m[0][0];
  Rational det(0);
  for (std::size_t k = 0; k < n; ++k) {
    if (m[0][k] == 0) continue;
    RatMatrix minor(n - 1, std::vector<Rational>(n - 1));
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t jj = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k) continue;
        minor[i - 1][jj++] = m[i][j];
      }
    }
    Rational term = m[0][k] * det_cofactor(minor);
    det += (k % 2 == 0) ? term : -term;
  }
  return det;
}

}  // namespace miracah
