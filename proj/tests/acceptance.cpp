// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Everything exact is compared as a rational; float cross-checks run at 256
// bits against 1e-40.

#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "miracah/casoratian.hpp"
#include "miracah/runner.hpp"

using namespace miracah;

namespace {

int failures = 0;

void criterion(int idx, bool ok, const std::string& text) {
  std::cout << (ok ? "PASS" : "FAIL") << "  " << (idx < 10 ? " " : "") << idx
            << "  " << text << std::endl;
  if (!ok) ++failures;
}

RunConfig racah_config() {
  RunConfig cfg;
  cfg.family = Family::racah;
  cfg.N = 3;
  cfg.b = 12;
  cfg.c = rat(1, 2);
  cfg.d = 1;
  cfg.index_set = {1, 2};
  return cfg;
}

RunConfig qracah_config() {
  RunConfig cfg;
  cfg.family = Family::qracah;
  cfg.N = 3;
  cfg.q = rat(1, 2);
  cfg.b = rat(1, 1024);
  cfg.c = rat(1, 2);
  cfg.d = rat(1, 2);
  cfg.index_set = {1, 2};
  return cfg;
}

bool record_passes(const Report& rep, const std::string& prefix) {
  bool seen = false;
  for (const auto& c : rep.checks)
    if (c.name.rfind(prefix, 0) == 0) {
      seen = true;
      if (c.status != "pass") return false;
    }
  return seen;
}

std::vector<std::vector<long>> nonempty_subsets(const std::vector<long>& w) {
  std::vector<std::vector<long>> out;
  for (unsigned mask = 1; mask < (1u << w.size()); ++mask) {
    std::vector<long> s;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (mask & (1u << i)) s.push_back(w[i]);
    out.push_back(s);
  }
  return out;
}

Rational small_rational(std::mt19937& rng) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 4);
  return rat(num(rng), den(rng));
}

Poly random_poly(std::mt19937& rng, long max_deg = 3) {
  std::uniform_int_distribution<long> deg(0, max_deg);
  Poly f(deg(rng) + 1);
  for (auto& c : f) c = small_rational(rng);
  if (f.back() == 0) f.back() = 1;
  return f;
}

Rational random_base(std::mt19937& rng) {
  std::uniform_int_distribution<long> num(1, 30), den(2, 7);
  return rat(num(rng), den(rng));
}

Column column_of(const ParameterSet& p, const Poly& f, const Rational& base) {
  return poly_column(
      "f", p, [f](const Rational& u) { return poly_eval(f, u); }, base);
}

}  // namespace

int main() {
  const auto p_r = validate(make_racah(3, 12, rat(1, 2), 1));
  const auto p_q =
      validate(make_qracah(3, rat(1, 2), rat(1, 1024), rat(1, 2), rat(1, 2)));
  const long N = 3;
  const std::vector<ParameterSet> families = {p_r, p_q};
  std::vector<std::vector<std::vector<long>>> family_subsets;
  for (const auto& p : families)
    family_subsets.push_back(nonempty_subsets(virtual_indices(p)));

  const auto cfg_r = racah_config();
  const auto cfg_q = qracah_config();
  const Report rep_r = run_verify(cfg_r);
  const Report rep_q = run_verify(cfg_q);
  const std::vector<const Report*> reports = {&rep_r, &rep_q};

  auto both_pass = [&](const std::string& name) {
    return record_passes(rep_r, name) && record_passes(rep_q, name);
  };

  criterion(1, both_pass("original-eigen"),
            "difference equation holds exactly for every eigenpolynomial, on "
            "and off the grid");

  criterion(2, both_pass("orthogonality"),
            "weighted Gram matrix equals the closed-form inverse norms "
            "exactly");

  {
    bool ok = both_pass("completeness");
    for (const auto& p : families) {
      PrecisionGuard guard(256);
      ok = ok && completeness_offdiag_max(p, 256) <= pow_of_ten(-40);
    }
    criterion(3, ok,
              "dual orthogonality is exact; the 256-bit off-diagonal "
              "cross-check stays below 1e-40");
  }

  criterion(4, both_pass("twist-relation"),
            "parameter-twist linear relation holds exactly across the grid");

  {
    bool ok = both_pass("virtual-equation");
    ok = ok && virtual_indices(p_r).size() == 3 &&
         virtual_indices(p_q).size() == 2;
    for (const auto& p : families)
      for (long v : virtual_indices(p)) {
        auto vr = verify_virtual_equation(p, v);
        for (long x = 0; x < N; ++x) ok = ok && vr.residuals.at(x) == 0;
        ok = ok && vr.boundary_residual != 0;
      }
    criterion(5, ok,
              "virtual seeds solve the interior equation exactly and break "
              "only at the boundary row");
  }

  criterion(6, both_pass("xi-positivity"),
            "virtual energies are negative and seed polynomials positive "
            "across the extended grid");

  {
    bool ok = true;
    for (std::size_t fi = 0; fi < families.size(); ++fi) {
      const auto& p = families[fi];
      PrecisionGuard guard(256);
      const Real tol = pow_of_ten(-40);
      for (const auto& ds : family_subsets[fi]) {
        auto dset = make_index_set(p, ds);
        auto s = make_mi_system(p, dset);
        for (long n = 0; n <= N; ++n) {
          auto f = detail::deformed_poly_fn(p, ds, n);
          for (long x = 0; x <= N; ++x) {
            Rational u = site(p, x);
            Rational want = energy(p, n) * f(u);
            ok = ok && mi_hamiltonian_apply(p, ds, f, u) == want;
          }
          for (int i = 0; i < 3; ++i) {
            const Rational& u = off_grid_points()[i];
            Rational want = energy(p, n) * f(u);
            ok = ok && mi_hamiltonian_apply(p, ds, f, u) == want;
          }
          ok = ok && mi_charpoly_at_energy(s, n) == 0;
        }
        auto t = mi_hamiltonian_matrix_float(s, 256);
        for (const auto& resid : spectrum_residuals(t, p))
          ok = ok && resid <= tol;
      }
    }
    criterion(7, ok,
              "every admissible deletion subset is exactly isospectral: eigen "
              "relation, fraction-free determinant, 256-bit eigensolver");
  }

  {
    bool ok = true;
    for (std::size_t fi = 0; fi < families.size(); ++fi) {
      const auto& p = families[fi];
      for (const auto& ds : family_subsets[fi]) {
        auto dset = make_index_set(p, ds);
        auto s = make_mi_system(p, dset);
        auto gram = mi_gram(s, N);
        for (long n = 0; n <= N; ++n)
          for (long k = 0; k <= N; ++k) {
            Rational want =
                (n == k)
                    ? Rational(1 / (norm_sq(p, n) * mi_dtilde_sq(p, ds, n)))
                    : Rational(0);
            ok = ok && gram[n][k] == want;
          }
        auto c = make_chain(p, ds);
        auto w = eigen_weight_grid(c);
        std::vector<std::vector<Rational>> grids;
        for (long n = 0; n <= N; ++n)
          grids.push_back(transformed_poly_grid(c, n));
        for (long n = 0; n <= N; ++n)
          for (long k = n; k <= N; ++k) {
            Rational sum(0);
            for (long x = 0; x <= N; ++x)
              sum += w[x] * grids[n][x] * grids[k][x];
            Rational want = (n == k) ? norm_product(c, n) : Rational(0);
            ok = ok && sum == want;
          }
      }
    }
    criterion(8, ok,
              "deformed norms and orthogonality hold exactly along both "
              "evaluation routes for every subset");
  }

  {
    bool ok = leading_coeff_xi(p_r, {1}) == rat(11, 50);
    for (std::size_t fi = 0; fi < families.size(); ++fi) {
      const auto& p = families[fi];
      for (const auto& ds : family_subsets[fi]) {
        auto dset = make_index_set(p, ds);
        auto fx = fit_denominator_poly(p, dset);
        ok = ok && poly_degree(fx.coeffs) == dset.ell;
        ok = ok && eta_poly_leading(fx) == leading_coeff_xi(p, ds);
        for (long n = 0; n <= N; ++n) {
          auto fit = fit_mi_poly(p, dset, n);
          ok = ok && poly_degree(fit.coeffs) == dset.ell + n;
          ok = ok && eta_poly_leading(fit) == leading_coeff_p(p, ds, n);
        }
      }
    }
    criterion(9, ok,
              "fitted degrees and leading coefficients equal the closed forms "
              "for every subset (spot value 11/50)");
  }

  {
    bool ok = true;
    for (const char* name :
         {"pd0-identity", "shape-invariance", "shifts", "order-independence",
          "reduction-m1", "reduction-level0", "mirror"})
      ok = ok && both_pass(name);
    auto cfg3 = racah_config();
    cfg3.index_set = {1, 2, 3};
    cfg3.checks = {"pd0-identity", "shape-invariance", "shifts",
                   "order-independence", "reduction-m1", "reduction-level0",
                   "mirror"};
    auto rep3 = run_verify(cfg3);
    for (const auto& c : rep3.checks) ok = ok && c.status == "pass";
    criterion(10, ok,
              "normalization, shape invariance, shift operators, order "
              "independence, reductions, and the mirror identity are exact");
  }

  {
    bool ok = true;
    for (std::size_t fi = 0; fi < families.size(); ++fi) {
      const auto& p = families[fi];
      auto with_empty = family_subsets[fi];
      with_empty.push_back({});
      for (const auto& ds : with_empty) {
        auto dset = make_index_set(p, ds);
        for (long n = 0; n <= N; ++n)
          ok = ok && mi_count_zeros(p, dset, n) == n;
      }
    }
    criterion(11, ok,
              "Sturm counts find exactly n roots inside the spectral window "
              "for every subset and level");
  }

  {
    bool ok = true;
    long trials = 0;
    std::mt19937 rng(20260814);
    for (const auto& p : families) {
      for (int trial = 0; trial < 30; ++trial) {
        // product rule: multiplying every column by g(u) scales the
        // determinant by the product of g over the shifted sites
        std::size_t n = 1 + trial % 4;
        Rational base = random_base(rng);
        Poly gnum = random_poly(rng);
        Rational shift = rat(std::uniform_int_distribution<long>(1, 6)(rng));
        auto g = [gnum, shift](const Rational& u) -> Rational {
          return poly_eval(gnum, u) / (u * u + shift);
        };
        std::vector<Column> plain, multiplied;
        for (std::size_t k = 0; k < n; ++k) {
          Poly f = random_poly(rng);
          plain.push_back(column_of(p, f, base));
          multiplied.push_back(poly_column(
              "gf", p,
              [f, g](const Rational& u) -> Rational {
                return poly_eval(f, u) * g(u);
              },
              base));
        }
        Rational gprod(1);
        for (std::size_t k = 0; k < n; ++k)
          gprod *= g(shift_site(p, base, k));
        ok = ok && casoratian(multiplied) == gprod * casoratian(plain);
        ++trials;
      }
      for (int trial = 0; trial < 30; ++trial) {
        // two-column expansion: W[W[F,g], W[F,h]](x) = W[F](x+1) W[F,g,h](x)
        std::size_t nf = 1 + trial % 2;
        Rational base = random_base(rng);
        std::vector<Poly> fs;
        for (std::size_t k = 0; k < nf; ++k) fs.push_back(random_poly(rng));
        Poly g = random_poly(rng), h = random_poly(rng);
        auto cols_at = [&](long offset, const std::vector<Poly>& extra) {
          std::vector<Column> cols;
          for (const auto& f : fs)
            cols.push_back(column_of(p, f, shift_site(p, base, offset)));
          for (const auto& e : extra)
            cols.push_back(column_of(p, e, shift_site(p, base, offset)));
          return cols;
        };
        Column wg{"W[F,g]", [&](long j) { return casoratian(cols_at(j, {g})); }};
        Column wh{"W[F,h]", [&](long j) { return casoratian(cols_at(j, {h})); }};
        Rational lhs = casoratian({wg, wh});
        Rational rhs =
            casoratian(cols_at(1, {})) * casoratian(cols_at(0, {g, h}));
        ok = ok && lhs == rhs;
        ++trials;
      }
    }
    criterion(12, ok && trials >= 100,
              "casoratian product and expansion identities hold over " +
                  std::to_string(trials) + " random column sets");
  }

  {
    bool ok = true;
    const std::vector<const RunConfig*> cfgs = {&cfg_r, &cfg_q};
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
      auto again = run_verify(*cfgs[i]);
      ok = ok && report_to_json(*reports[i]).dump(2) ==
                     report_to_json(again).dump(2);
      auto t1 = run_table(*cfgs[i]);
      auto t2 = run_table(*cfgs[i]);
      ok = ok && t1.doc.dump(2) == t2.doc.dump(2) &&
           t1.csv_files == t2.csv_files;
    }
    criterion(13, ok,
              "repeated runs serialize to byte-identical reports and tables");
  }

  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) +
                                    " criterion(s) failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
