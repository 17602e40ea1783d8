#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "miracah/params.hpp"

using namespace miracah;

namespace {

ParameterSet desk_racah() { return validate(make_racah(3, 12, rat(1, 2), 1)); }

ParameterSet desk_qracah() {
  return validate(make_qracah(3, rat(1, 2), rat(1, 1024), rat(1, 2), rat(1, 2)));
}

Rational random_rational(std::mt19937& rng) {
  std::uniform_int_distribution<long> num(-12, 12), den(1, 9);
  return rat(num(rng), den(rng));
}

}  // namespace

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("12") == 12);
  CHECK(parse_rational("-3/6") == rat(-1, 2));
  CHECK(format_rational(rat(4, 8)) == "1/2");
  CHECK(format_rational(rat(-7)) == "-7");
  CHECK_THROWS_AS(parse_rational("1/0"), std::exception);
  CHECK_THROWS_AS(parse_rational("x"), ParseError);
  CHECK_THROWS_AS(parse_rational("1/-2"), ParseError);
}

TEST_CASE("rational helpers") {
  CHECK(pow_int(rat(2, 3), 3) == rat(8, 27));
  CHECK(pow_int(rat(2, 3), -2) == rat(9, 4));
  CHECK(pow_int(rat(5), 0) == 1);
  CHECK_THROWS_AS(pow_int(rat(0), -1), DegenerateError);

  CHECK(floor_long(rat(15, 4)) == 3);
  CHECK(floor_long(rat(-3, 2)) == -2);
  CHECK(strict_floor_long(rat(7)) == 6);
  CHECK(strict_floor_long(rat(15, 4)) == 3);
  CHECK(strict_floor_long(rat(5)) == 4);
  CHECK(strict_floor_long(rat(-2)) == -3);

  CHECK(exact_sqrt(rat(49, 9)).value() == rat(7, 3));
  CHECK(exact_sqrt(rat(0)).value() == 0);
  CHECK(!exact_sqrt(rat(2)).has_value());
  CHECK(!exact_sqrt(rat(-4)).has_value());
}

TEST_CASE("shifted factorials") {
  // (1)_k equals k!
  Rational fact(1);
  for (long k = 1; k <= 8; ++k) {
    fact *= k;
    CHECK(pochhammer(1, k) == fact);
  }
  // splitting identity (x)_{m+n} = (x)_m (x+m)_n
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Rational x = random_rational(rng);
    long m = trial % 4, n = (trial / 4) % 4;
    CHECK(pochhammer(x, m + n) == pochhammer(x, m) * pochhammer(x + m, n));
  }
  // q-analog splitting (a;q)_{m+n} = (a;q)_m (a q^m;q)_n
  Rational q = rat(2, 5);
  for (int trial = 0; trial < 50; ++trial) {
    Rational a = random_rational(rng);
    long m = trial % 4, n = (trial / 4) % 4;
    CHECK(q_pochhammer(a, q, m + n) ==
          q_pochhammer(a, q, m) * q_pochhammer(a * pow_int(q, m), q, n));
  }
  CHECK(pochhammer_multi({rat(2), rat(3)}, 2) == pochhammer(2, 2) * pochhammer(3, 2));
}

TEST_CASE("q exponent detection") {
  Rational q = rat(1, 2);
  CHECK(q_exponent(rat(1, 1024), q).value() == 10);
  CHECK(q_exponent(rat(8), q).value() == -3);
  CHECK(q_exponent(rat(1), q).value() == 0);
  CHECK(!q_exponent(rat(1, 3), q).has_value());
  CHECK(!q_exponent(rat(-2), q).has_value());
}

TEST_CASE("desk parameter sets validate") {
  auto pr = desk_racah();
  CHECK(pr.validated);
  CHECK(pr.a == -3);
  CHECK(lattice_size(pr) == 3);
  CHECK(d_tilde(pr) == rat(15, 2));
  CHECK(kappa(pr) == 1);
  CHECK(alpha(pr) == 1);
  CHECK(alpha_prime(pr) == rat(-7, 2));

  auto pq = desk_qracah();
  CHECK(pq.validated);
  CHECK(pq.a == 8);
  CHECK(pq.ea.value() == -3);
  CHECK(pq.eb.value() == 10);
  CHECK(pq.ec.value() == 1);
  CHECK(pq.ed.value() == 1);
  CHECK(lattice_size(pq) == 3);
  CHECK(d_tilde(pq) == rat(1, 64));
  CHECK(kappa(pq) == 2);
  CHECK(alpha(pq) == rat(1, 32));
  CHECK(alpha_prime(pq) == rat(-31, 64));
}

TEST_CASE("range diagnostics") {
  auto bad = make_racah(3, 12, 3, 1);  // c < 1+d violated
  auto diag = validate_ranges(bad);
  REQUIRE(diag.size() == 1);
  CHECK(diag[0] == "need c < 1+d");
  CHECK_THROWS_AS(validate(bad), RangeError);

  auto bad_q = make_qracah(3, rat(1, 2), rat(1, 4), rat(1, 2), rat(1, 2));
  // ab = 2 > d
  CHECK(!validate_ranges(bad_q).empty());
}

TEST_CASE("virtual window") {
  CHECK(v_max(desk_racah()) == 3);
  CHECK(virtual_indices(desk_racah()) == std::vector<long>{1, 2, 3});
  CHECK(v_max(desk_qracah()) == 2);
  CHECK(virtual_indices(desk_qracah()) == std::vector<long>{1, 2});

  // first bound binding with the strict floor
  auto tight = make_racah(3, 6, rat(1, 2), 1);  // l1+l2-l4-1 = 1, [1]' = 0
  CHECK(v_max(tight) == 0);
  CHECK(virtual_indices(tight).empty());

  // non-representable exponent rejects level arithmetic
  auto odd = make_qracah(3, rat(1, 2), rat(1, 3), rat(1, 2), rat(1, 2));
  CHECK_THROWS_AS(v_max(odd), UnsupportedError);
}

TEST_CASE("deletion count bound") {
  CHECK(m_range_ok(desk_racah(), 7));
  CHECK(!m_range_ok(desk_racah(), 8));
  CHECK(m_range_ok(desk_qracah(), 5));
  CHECK(!m_range_ok(desk_qracah(), 6));
}

TEST_CASE("twist is an involution with the expected values") {
  auto pr = desk_racah();
  auto tr = twist(pr);
  CHECK(tr.a == 5);
  CHECK(tr.b == -10);
  CHECK(tr.c == rat(1, 2));
  CHECK(tr.d == 1);
  CHECK(!tr.validated);
  CHECK(twist(tr) == pr);
  CHECK_THROWS_AS(lattice_size(tr), RangeError);

  auto pq = desk_qracah();
  auto tq = twist(pq);
  CHECK(tq.a == rat(1, 32));
  CHECK(tq.b == 256);
  CHECK(tq.c == rat(1, 2));
  CHECK(tq.d == rat(1, 2));
  CHECK(tq.ea.value() == 5);
  CHECK(tq.eb.value() == -8);
  CHECK(twist(tq) == pq);
}

TEST_CASE("twist commutes with the partial shift") {
  for (auto p : {desk_racah(), desk_qracah()}) {
    for (long beta = 1; beta <= 3; ++beta) {
      auto left = shift_params(twist(p), kDelta, beta);
      auto right = twist(shift_params(p, kDeltaTilde, beta));
      CHECK(left == right);
    }
  }
}

TEST_CASE("shift arithmetic") {
  auto pr = desk_racah();
  auto up = shift_params(pr, kDelta);
  CHECK(up.a == -2);
  CHECK(up.b == 13);
  CHECK(up.c == rat(3, 2));
  CHECK(up.d == 2);
  CHECK(lattice_size(up) == 2);
  auto part = shift_params(pr, kDeltaTilde, 2);
  CHECK(part.a == -3);
  CHECK(part.b == 12);
  CHECK(part.c == rat(5, 2));
  CHECK(part.d == 3);

  auto pq = desk_qracah();
  auto upq = shift_params(pq, kDelta);
  CHECK(upq.a == 4);
  CHECK(upq.ea.value() == -2);
  CHECK(upq.b == rat(1, 2048));
  CHECK(lattice_size(upq) == 2);
}

TEST_CASE("mirror companion") {
  auto pr = desk_racah();
  auto mr = mirror_params(pr);
  CHECK(mr.a == -3);
  CHECK(mr.b == rat(-7, 2));
  CHECK(mr.c == 8);
  CHECK(mr.d == -7);
  CHECK(mirror_params(mr) == pr);

  auto pq = desk_qracah();
  auto mq = mirror_params(pq);
  CHECK(mq.a == 8);
  CHECK(mq.b == 8 * rat(1, 2) / rat(1, 2));
  CHECK(mq.c == 8 * rat(1, 1024) / rat(1, 2));
  CHECK(mq.d == 64 / rat(1, 2));
  CHECK(mirror_params(mq) == pq);

  auto odd = make_qracah(3, rat(1, 2), rat(1, 3), rat(1, 2), rat(1, 2));
  CHECK_THROWS_AS(mirror_params(odd), UnsupportedError);
}

TEST_CASE("site coordinates") {
  auto pr = desk_racah();
  CHECK(site(pr, 2) == 2);
  CHECK(shift_site(pr, rat(1, 3), 2) == rat(7, 3));
  CHECK(involution_site(pr, involution_site(pr, rat(5, 7))) == rat(5, 7));

  auto pq = desk_qracah();
  CHECK(site(pq, 2) == rat(1, 4));
  CHECK(shift_site(pq, rat(1, 3), -1) == rat(2, 3));
  CHECK(involution_site(pq, involution_site(pq, rat(5, 7))) == rat(5, 7));
}
