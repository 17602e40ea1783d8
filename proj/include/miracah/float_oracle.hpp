#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>

#include "miracah/mi.hpp"

namespace miracah {

// Square roots enter only here: every exact identity lives in the rational
// layer, and this oracle re-derives the spectrum numerically as an
// independent confirmation route.
using Real =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                  boost::multiprecision::et_off>;

inline unsigned digits10_from_bits(long bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.3010299956639812)) + 4;
}

// Scoped default precision for freshly constructed Real values.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(long bits) : saved_(Real::default_precision()) {
    Real::default_precision(digits10_from_bits(bits));
  }
  ~PrecisionGuard() { Real::default_precision(saved_); }

  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

inline Real to_real(const Rational& r) {
  return Real(r.get_num().get_str()) / Real(r.get_den().get_str());
}

inline Real pow_of_ten(long e) { return pow(Real(10), static_cast<int>(e)); }

struct TridiagonalMatrix {
  std::vector<Real> diagonal;      // length N+1
  std::vector<Real> off_diagonal;  // length N, entry x couples x and x+1
  long precision_bits = 256;
};

using RealMatrix = std::vector<std::vector<Real>>;

// Symmetric Hamiltonian of the original system: diagonal B+D, off-diagonal
// -sqrt(B(x) D(x+1)).
inline TridiagonalMatrix hamiltonian_matrix_float(const ParameterSet& p,
                                                  long bits) {
  PrecisionGuard guard(bits);
  const long n = lattice_size(p);
  TridiagonalMatrix t;
  t.precision_bits = bits;
  for (long x = 0; x <= n; ++x) {
    Rational b = potential_B(p, site(p, x));
    Rational d = potential_D(p, site(p, x));
    t.diagonal.push_back(to_real(b + d));
    if (x < n) {
      Rational prod = b * potential_D(p, site(p, x + 1));
      t.off_diagonal.push_back(-sqrt(to_real(prod)));
    }
  }
  return t;
}

// Same construction from the deformed potentials of an assembled system.
inline TridiagonalMatrix mi_hamiltonian_matrix_float(const MiSystem& s,
                                                     long bits) {
  PrecisionGuard guard(bits);
  TridiagonalMatrix t;
  t.precision_bits = bits;
  for (long x = 0; x <= s.N; ++x) {
    Rational b = mi_potential_B(s, x);
    Rational d = mi_potential_D(s, x);
    t.diagonal.push_back(to_real(b + d));
    if (x < s.N)
      t.off_diagonal.push_back(-sqrt(to_real(b * mi_potential_D(s, x + 1))));
  }
  return t;
}

inline RealMatrix dense_from_tridiagonal(const TridiagonalMatrix& t) {
  const std::size_t n = t.diagonal.size();
  RealMatrix a(n, std::vector<Real>(n, Real(0)));
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] = t.diagonal[i];
    if (i + 1 < n) {
      a[i][i + 1] = t.off_diagonal[i];
      a[i + 1][i] = t.off_diagonal[i];
    }
  }
  return a;
}

// Cyclic Jacobi sweeps; converges quadratically, and at desk sizes the cost
// is negligible even at hundreds of digits.
inline std::vector<Real> jacobi_eigenvalues(RealMatrix a, long bits) {
  PrecisionGuard guard(bits);
  const std::size_t n = a.size();
  const Real stop =
      pow_of_ten(8 - static_cast<long>(Real::default_precision()));
  for (int sweep = 0; sweep < 200; ++sweep) {
    Real off(0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < stop * stop) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0) continue;
        Real theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        Real t = 1 / (abs(theta) + sqrt(theta * theta + 1));
        if (theta < 0) t = -t;
        Real c = 1 / sqrt(t * t + 1);
        Real s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          Real akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          Real apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<Real> ev;
  for (std::size_t i = 0; i < n; ++i) ev.push_back(a[i][i]);
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Absolute gaps between the numerically recovered spectrum and the closed
// form, paired in ascending order.
inline std::vector<Real> spectrum_residuals(const TridiagonalMatrix& t,
                                            const ParameterSet& p) {
  PrecisionGuard guard(t.precision_bits);
  auto ev = jacobi_eigenvalues(dense_from_tridiagonal(t), t.precision_bits);
  std::vector<Real> want;
  for (long n = 0; n < static_cast<long>(ev.size()); ++n)
    want.push_back(to_real(energy(p, n)));
  std::sort(want.begin(), want.end());
  std::vector<Real> out;
  for (std::size_t i = 0; i < ev.size(); ++i)
    out.push_back(abs(ev[i] - want[i]));
  return out;
}

// Relative residual of the zero mode: H sqrt(w) with w the squared ground
// weight of the system the matrix was built from.
inline Real zero_mode_residual(const TridiagonalMatrix& t,
                               const std::vector<Rational>& weight_sq) {
  PrecisionGuard guard(t.precision_bits);
  const std::size_t n = t.diagonal.size();
  std::vector<Real> phi(n);
  Real norm(0);
  for (std::size_t x = 0; x < n; ++x) {
    phi[x] = sqrt(to_real(weight_sq.at(x)));
    norm += phi[x] * phi[x];
  }
  norm = sqrt(norm);
  Real worst(0);
  for (std::size_t x = 0; x < n; ++x) {
    Real r = t.diagonal[x] * phi[x];
    if (x + 1 < n) r += t.off_diagonal[x] * phi[x + 1];
    if (x > 0) r += t.off_diagonal[x - 1] * phi[x - 1];
    worst = std::max(worst, abs(r));
  }
  return worst / norm;
}

// Entrywise gap between the factorised form A^T A and the assembled matrix,
// with A phi(x) = sqrt(B(x)) phi(x) - sqrt(D(x+1)) phi(x+1).
inline Real factorization_residual(const ParameterSet& p, long bits) {
  PrecisionGuard guard(bits);
  const long n = lattice_size(p);
  std::vector<Real> rb(n + 1), rd(n + 1);
  for (long x = 0; x <= n; ++x) {
    rb[x] = sqrt(to_real(potential_B(p, site(p, x))));
    rd[x] = sqrt(to_real(potential_D(p, site(p, x))));
  }
  RealMatrix a(n + 1, std::vector<Real>(n + 1, Real(0)));
  for (long x = 0; x <= n; ++x) {
    a[x][x] = rb[x];
    if (x < n) a[x][x + 1] = -rd[x + 1];
  }
  auto h = dense_from_tridiagonal(hamiltonian_matrix_float(p, bits));
  Real worst(0);
  for (long i = 0; i <= n; ++i)
    for (long j = 0; j <= n; ++j) {
      Real ata(0);
      for (long k = 0; k <= n; ++k) ata += a[k][i] * a[k][j];
      worst = std::max(worst, abs(ata - h[i][j]));
    }
  return worst;
}

// Off-diagonal completeness sums sum_n d_n^2 phi0(x) phi0(y) P_n(x) P_n(y);
// the square roots of the two weights make this the float half of the dual
// orthogonality check (the diagonal half is exact and lives in the rational
// layer).
inline Real completeness_offdiag_max(const ParameterSet& p, long bits) {
  PrecisionGuard guard(bits);
  const long n = lattice_size(p);
  std::vector<Real> phi(n + 1);
  for (long x = 0; x <= n; ++x)
    phi[x] = sqrt(to_real(ground_weight_sq_closed(p, x)));
  Real worst(0);
  for (long x = 0; x <= n; ++x)
    for (long y = x + 1; y <= n; ++y) {
      Real sum(0);
      for (long k = 0; k <= n; ++k)
        sum += to_real(norm_sq(p, k) * racah_poly(p, k, site(p, x)) *
                       racah_poly(p, k, site(p, y)));
      worst = std::max(worst, abs(sum * phi[x] * phi[y]));
    }
  return worst;
}

}  // namespace miracah
