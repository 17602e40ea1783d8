#include <catch2/catch_amalgamated.hpp>

#include "miracah/runner.hpp"

using namespace miracah;
using nlohmann::json;

namespace {

RunConfig desk_racah_config() {
  RunConfig cfg;
  cfg.family = Family::racah;
  cfg.N = 3;
  cfg.b = 12;
  cfg.c = rat(1, 2);
  cfg.d = 1;
  cfg.index_set = {1, 2};
  return cfg;
}

RunConfig desk_qracah_config() {
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

const CheckRecord& find_record(const Report& rep, const std::string& name) {
  for (const auto& c : rep.checks)
    if (c.name == name) return c;
  FAIL("no record named " + name);
  return rep.checks.front();
}

}  // namespace

TEST_CASE("rational literals parse exactly and reject anything inexact") {
  CHECK(parse_rational("12") == 12);
  CHECK(parse_rational("-7/2") == rat(-7, 2));
  CHECK(parse_rational("3/6") == rat(1, 2));
  CHECK(parse_rational("0") == 0);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational("5/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("1.5"), ParseError);
  CHECK_THROWS_AS(parse_rational("2e3"), ParseError);
  CHECK(rational_str(rat(-48, 7)) == "-48/7");
  json bad_literal = {{"family", "racah"}, {"N", 3},  {"b", "1.5"},
                      {"c", "1/2"},        {"d", 1}};
  CHECK_THROWS_AS(config_from_json(bad_literal), ConfigError);
}

TEST_CASE("deletion lists parse sorted and check lists keep their names") {
  CHECK(parse_index_list("2,1") == std::vector<long>{1, 2});
  CHECK(parse_index_list("3") == std::vector<long>{3});
  CHECK(parse_index_list("").empty());
  CHECK(parse_check_list("zeros,range") ==
        std::vector<std::string>{"zeros", "range"});
}

TEST_CASE("check selection resolves to the fixed report order") {
  auto all = resolve_checks({"all"});
  CHECK(all == all_check_names());
  CHECK(all.size() == 22);
  CHECK(all.front() == "range");
  CHECK(all.back() == "float-oracle");
  CHECK(resolve_checks({"zeros", "range"}) ==
        std::vector<std::string>{"range", "zeros"});
  CHECK_THROWS_AS(resolve_checks({"bogus"}), ConfigError);
}

TEST_CASE("config JSON must name a family and its exact parameters") {
  json good = {{"family", "racah"}, {"N", 3},       {"b", "12"},
               {"c", "1/2"},        {"d", 1},       {"D", {1, 2}}};
  auto cfg = config_from_json(good);
  CHECK(cfg.family == Family::racah);
  CHECK(cfg.N == 3);
  CHECK(cfg.c == rat(1, 2));
  CHECK(cfg.index_set == std::vector<long>{1, 2});
  CHECK(cfg.checks == std::vector<std::string>{"all"});
  CHECK(cfg.precision_bits == 256);

  json no_b = good;
  no_b.erase("b");
  CHECK_THROWS_AS(config_from_json(no_b), ConfigError);

  json stray_q = good;
  stray_q["q"] = "1/2";
  CHECK_THROWS_AS(config_from_json(stray_q), ConfigError);

  json qfam = good;
  qfam["family"] = "qracah";
  CHECK_THROWS_AS(config_from_json(qfam), ConfigError);
  qfam["q"] = "1/2";
  CHECK(config_from_json(qfam).q == rat(1, 2));

  json d_string = good;
  d_string["D"] = "2,1";
  CHECK(config_from_json(d_string).index_set == std::vector<long>{1, 2});

  json checks_str = good;
  checks_str["checks"] = "zeros,range";
  CHECK(config_from_json(checks_str).checks ==
        std::vector<std::string>{"zeros", "range"});

  json bad_fmt = good;
  bad_fmt["format"] = "xml";
  CHECK_THROWS_AS(config_from_json(bad_fmt), ConfigError);

  json bad_bits = good;
  bad_bits["precision_bits"] = 32;
  CHECK_THROWS_AS(config_from_json(bad_bits), ConfigError);
}

TEST_CASE("a verify run over a desk subset passes every selected check") {
  auto cfg = desk_racah_config();
  cfg.checks = {"range",  "orthogonality", "chain",
                "degrees", "zeros",        "float-oracle"};
  auto rep = run_verify(cfg);
  std::vector<std::string> names;
  for (const auto& c : rep.checks) names.push_back(c.name);
  CHECK(names == std::vector<std::string>{"range", "orthogonality", "chain",
                                          "degrees", "zeros[n=1]",
                                          "zeros[n=2]", "zeros[n=3]",
                                          "float-oracle"});
  for (const auto& c : rep.checks) {
    INFO(c.name);
    CHECK(c.status == "pass");
    CHECK((!c.exact_residuals.empty() || !c.float_residuals.empty()));
  }
  CHECK(rep.all_passed());
}

TEST_CASE("an empty virtual window fails the range check and parks the rest") {
  RunConfig cfg;
  cfg.family = Family::racah;
  cfg.N = 3;
  cfg.b = 5;
  cfg.c = rat(1, 2);
  cfg.d = 1;
  cfg.index_set = {1};
  auto rep = run_verify(cfg);
  CHECK_FALSE(rep.all_passed());
  const auto& range = find_record(rep, "range");
  CHECK(range.status == "fail");
  REQUIRE_FALSE(range.exact_residuals.empty());
  CHECK(range.exact_residuals.front() != 0);
  REQUIRE_FALSE(range.details.empty());
  CHECK(range.details.front().find("virtual window") != std::string::npos);
  for (const auto& c : rep.checks) {
    if (c.name == "range") continue;
    INFO(c.name);
    CHECK(c.status == "skip");
    REQUIRE_FALSE(c.details.empty());
    CHECK(c.details.front().find("allow_unvalidated") != std::string::npos);
  }
}

TEST_CASE("a deletion level beyond the window is a range finding too") {
  auto cfg = desk_racah_config();
  cfg.index_set = {5};
  cfg.checks = {"range", "original-eigen", "zeros"};
  auto rep = run_verify(cfg);
  CHECK_FALSE(rep.all_passed());
  CHECK(find_record(rep, "range").status == "fail");
  CHECK(find_record(rep, "original-eigen").status == "skip");
  CHECK(find_record(rep, "zeros").status == "skip");
}

TEST_CASE("selecting zeros yields one record per excited level with counts") {
  for (auto cfg : {desk_racah_config(), desk_qracah_config()}) {
    cfg.checks = {"zeros"};
    auto rep = run_verify(cfg);
    REQUIRE(rep.checks.size() == 3);
    for (long n = 1; n <= 3; ++n) {
      const auto& c = rep.checks[n - 1];
      CHECK(c.name == "zeros[n=" + std::to_string(n) + "]");
      CHECK(c.status == "pass");
      REQUIRE(c.exact_residuals.size() == 2);
      CHECK(c.exact_residuals[0] == 0);
      CHECK(c.exact_residuals[1] == n);
    }
  }
}

TEST_CASE("identical configs serialize to byte-identical reports") {
  auto cfg = desk_qracah_config();
  cfg.checks = {"range", "degrees", "zeros"};
  auto first = report_to_json(run_verify(cfg)).dump(2);
  auto second = report_to_json(run_verify(cfg)).dump(2);
  CHECK(first == second);
  CHECK(first.find("\"schema\": \"mi-racah/1\"") != std::string::npos);
}

TEST_CASE("allow_unvalidated evaluates identities despite range failures") {
  RunConfig cfg;
  cfg.family = Family::racah;
  cfg.N = 3;
  cfg.b = rat(-7, 2);
  cfg.c = 8;
  cfg.d = rat(-48, 7);
  cfg.index_set = {1};
  cfg.allow_unvalidated = true;
  cfg.checks = {"range", "norms", "xi-positivity", "degrees"};
  auto rep = run_verify(cfg);
  const auto& range = find_record(rep, "range");
  CHECK(range.status == "fail");
  CHECK(range.exact_residuals.size() == range.details.size());
  CHECK(find_record(rep, "norms").status == "pass");
  CHECK(find_record(rep, "degrees").status == "pass");
  CHECK(find_record(rep, "xi-positivity").status == "skip");
  CHECK_FALSE(rep.all_passed());
}

TEST_CASE("an undeformed table reproduces the classical family") {
  auto cfg = desk_racah_config();
  cfg.index_set = {};
  auto t = run_table(cfg);
  auto p = validate(make_racah(3, 12, rat(1, 2), 1));
  CHECK(t.doc["xi"]["degree"] == 0);
  REQUIRE(t.doc["xi"]["coefficients"].size() == 1);
  CHECK(t.doc["xi"]["coefficients"][0] == "1");
  REQUIRE(t.doc["values"].size() == 4);
  for (long n = 0; n <= 3; ++n) {
    const auto& row = t.doc["values"][n];
    CHECK(row["P"][0] == "1");
    for (long x = 0; x <= 3; ++x)
      CHECK(row["P"][x].get<std::string>() ==
            rational_str(racah_poly(p, n, site(p, x))));
    CHECK(t.doc["spectrum"][n]["E"].get<std::string>() ==
          rational_str(energy(p, n)));
  }
}

TEST_CASE("a deformed table carries ell+1 denominator coefficients") {
  for (auto cfg : {desk_racah_config(), desk_qracah_config()}) {
    auto t = run_table(cfg);
    CHECK(t.doc["xi"]["degree"] == 2);
    CHECK(t.doc["xi"]["coefficients"].size() == 3);
    REQUIRE(t.doc["polynomials"].size() == 4);
    for (long n = 0; n <= 3; ++n) {
      CHECK(t.doc["polynomials"][n]["degree"] == 2 + n);
      CHECK(t.doc["polynomials"][n]["coefficients"].size() ==
            static_cast<std::size_t>(3 + n));
      CHECK(t.doc["values"][n]["P"][0] == "1");
    }
    REQUIRE(t.csv_files.size() == 4);
    CHECK(t.csv_files[0].first == "coeffs");
    CHECK(t.csv_files[1].first == "grid");
    CHECK(t.csv_files[2].first == "values");
    CHECK(t.csv_files[3].first == "spectrum");
    CHECK(t.csv_files[0].second.rfind("poly,k,coefficient\n", 0) == 0);
    CHECK(t.csv_files[1].second.rfind("x,B,D,psi_sq\n", 0) == 0);
    CHECK(t.csv_files[2].second.rfind("n,x0,x1,x2,x3\n", 0) == 0);
    CHECK(t.csv_files[3].second.rfind("n,E\n", 0) == 0);
  }
}

TEST_CASE("tables refuse unusable configurations") {
  RunConfig bad = desk_racah_config();
  bad.b = 5;
  bad.index_set = {1};
  CHECK_THROWS_AS(run_table(bad), ConfigError);
  RunConfig wide = desk_racah_config();
  wide.index_set = {5};
  CHECK_THROWS_AS(run_table(wide), ConfigError);
}

TEST_CASE("table serialization is deterministic") {
  auto cfg = desk_qracah_config();
  auto a = run_table(cfg);
  auto b = run_table(cfg);
  CHECK(a.doc.dump(2) == b.doc.dump(2));
  CHECK(a.csv_files == b.csv_files);
}

TEST_CASE("report CSV quotes embedded separators") {
  Report rep;
  rep.command = "verify";
  CheckRecord rec;
  rec.name = "demo";
  rec.status = "fail";
  rec.exact_residuals = {rat(1, 3), rat(-2, 7)};
  rec.details = {"left, right", "say \"why\""};
  rep.checks.push_back(rec);
  auto csv = report_to_csv(rep);
  CHECK(csv.rfind("name,status,exact_residuals,float_residuals,details,"
                  "runtime_ms\n",
                  0) == 0);
  CHECK(csv.find("demo,fail,1/3;-2/7,") != std::string::npos);
  CHECK(csv.find("\"left, right;say \"\"why\"\"\"") != std::string::npos);
}

TEST_CASE("float residual strings carry 45 significant digits") {
  PrecisionGuard guard(256);
  auto s = float_str(to_real(rat(1, 3)));
  CHECK(s.find("3.333") == 0);
  long digits = 0;
  for (char ch : s) {
    if (ch == 'e') break;
    if (std::isdigit(static_cast<unsigned char>(ch))) ++digits;
  }
  CHECK(digits == 45);
}
