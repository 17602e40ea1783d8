#include <catch2/catch_amalgamated.hpp>

#include "miracah/float_oracle.hpp"

using namespace miracah;

namespace {

ParameterSet desk_racah() { return validate(make_racah(3, 12, rat(1, 2), 1)); }

ParameterSet desk_qracah() {
  return validate(make_qracah(3, rat(1, 2), rat(1, 1024), rat(1, 2), rat(1, 2)));
}

std::vector<std::vector<long>> desk_sets(const ParameterSet& p) {
  if (p.family == Family::racah)
    return {{1}, {2}, {3}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}};
  return {{1}, {2}, {1, 2}};
}

}  // namespace

TEST_CASE("spectrum of the original matrix is recovered numerically") {
  for (auto p : {desk_racah(), desk_qracah()}) {
    auto t = hamiltonian_matrix_float(p, 256);
    REQUIRE(t.diagonal.size() == 4);
    REQUIRE(t.off_diagonal.size() == 3);
    PrecisionGuard guard(256);
    Real tol = pow_of_ten(-40);
    for (const auto& r : spectrum_residuals(t, p)) {
      CHECK(r >= 0);
      CHECK(r <= tol);
    }
  }
}

TEST_CASE("ground weight is the numerical zero mode") {
  for (auto p : {desk_racah(), desk_qracah()}) {
    auto t = hamiltonian_matrix_float(p, 256);
    auto w = ground_weight_sq_grid(p, lattice_size(p));
    PrecisionGuard guard(256);
    CHECK(zero_mode_residual(t, w) <= pow_of_ten(-64));
  }
}

TEST_CASE("factorised operator reassembles the matrix") {
  for (auto p : {desk_racah(), desk_qracah()}) {
    PrecisionGuard guard(256);
    CHECK(factorization_residual(p, 256) <= pow_of_ten(-70));
  }
}

TEST_CASE("dual orthogonality holds off the diagonal numerically") {
  for (auto p : {desk_racah(), desk_qracah()}) {
    PrecisionGuard guard(256);
    CHECK(completeness_offdiag_max(p, 256) <= pow_of_ten(-40));
  }
}

TEST_CASE("every deformed system is isospectral numerically") {
  for (auto p : {desk_racah(), desk_qracah()}) {
    for (const auto& ds : desk_sets(p)) {
      auto s = make_mi_system(p, make_index_set(p, ds));
      auto t = mi_hamiltonian_matrix_float(s, 256);
      PrecisionGuard guard(256);
      Real tol = pow_of_ten(-40);
      for (const auto& r : spectrum_residuals(t, p)) CHECK(r <= tol);
    }
  }
}

TEST_CASE("residuals shrink as the requested precision grows") {
  auto p = desk_racah();
  auto coarse = hamiltonian_matrix_float(p, 128);
  auto fine = hamiltonian_matrix_float(p, 512);
  {
    PrecisionGuard guard(128);
    for (const auto& r : spectrum_residuals(coarse, p))
      CHECK(r <= pow_of_ten(-20));
  }
  {
    PrecisionGuard guard(512);
    for (const auto& r : spectrum_residuals(fine, p))
      CHECK(r <= pow_of_ten(-100));
  }
}
