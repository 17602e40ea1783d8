#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "miracah/config.hpp"
#include "miracah/float_oracle.hpp"

namespace miracah {

inline constexpr const char* kSchemaVersion = "mi-racah/1";
inline constexpr int kFloatDigits = 45;

// str(n, scientific) counts digits after the point, so n+1 significant
// digits come out; kFloatDigits is the significant count.
inline std::string float_str(const Real& r) {
  return r.str(kFloatDigits - 1, std::ios_base::scientific);
}

struct CheckRecord {
  std::string name;
  std::string status = "pass";  // pass | fail | skip
  std::vector<Rational> exact_residuals;
  std::vector<std::string> float_residuals;  // preformatted decimal strings
  std::vector<std::string> details;          // named inequalities, skip reasons
  long runtime_ms = 0;

  // Folds one exact residual into the record.  Nonzero residuals fail the
  // check and are kept with a note saying where they came from, so a failing
  // exact check always carries a nonzero rational residual.  Vanishing
  // residuals are dropped to keep reports small; seal() restores a single
  // zero for checks that recorded nothing.
  void expect_zero(const Rational& residual, const std::string& where = "") {
    if (residual == 0) return;
    status = "fail";
    exact_residuals.push_back(residual);
    if (!where.empty()) details.push_back(where);
  }

  void expect_true(bool ok, const Rational& witness,
                   const std::string& note = "") {
    if (ok) return;
    status = "fail";
    exact_residuals.push_back(witness == 0 ? Rational(1) : witness);
    if (!note.empty()) details.push_back(note);
  }

  void skip(const std::string& reason) {
    status = "skip";
    exact_residuals.clear();
    float_residuals.clear();
    details.assign(1, reason);
  }

  // A passing check that kept nothing reports one exact zero, the worst
  // residual over everything it evaluated.
  void seal() {
    if (status == "pass" && exact_residuals.empty() && float_residuals.empty())
      exact_residuals.push_back(Rational(0));
  }
};

struct Report {
  std::string command = "verify";
  nlohmann::ordered_json config;
  std::vector<CheckRecord> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (c.status == "fail") return false;
    return true;
  }
};

inline nlohmann::ordered_json report_to_json(const Report& rep) {
  nlohmann::ordered_json j;
  j["schema"] = kSchemaVersion;
  j["command"] = rep.command;
  j["config"] = rep.config;
  long pass = 0, fail = 0, skip = 0;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : rep.checks) {
    nlohmann::ordered_json r;
    r["name"] = c.name;
    r["status"] = c.status;
    nlohmann::ordered_json ex = nlohmann::ordered_json::array();
    for (const auto& e : c.exact_residuals) ex.push_back(rational_str(e));
    r["exact_residuals"] = ex;
    r["float_residuals"] = c.float_residuals;
    if (!c.details.empty()) r["details"] = c.details;
    r["runtime_ms"] = c.runtime_ms;
    arr.push_back(r);
    (c.status == "pass" ? pass : c.status == "fail" ? fail : skip) += 1;
  }
  j["checks"] = arr;
  j["summary"] = {{"pass", pass}, {"fail", fail}, {"skip", skip}};
  return j;
}

namespace detail {

inline std::string csv_cell(const std::string& raw) {
  if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
  std::string out = "\"";
  for (char ch : raw) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline std::string csv_join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ';';
    out += items[i];
  }
  return csv_cell(out);
}

}  // namespace detail

inline std::string report_to_csv(const Report& rep) {
  std::string out = "name,status,exact_residuals,float_residuals,details,runtime_ms\n";
  for (const auto& c : rep.checks) {
    std::vector<std::string> ex;
    for (const auto& e : c.exact_residuals) ex.push_back(rational_str(e));
    out += c.name + ',' + c.status + ',' + detail::csv_join(ex) + ',' +
           detail::csv_join(c.float_residuals) + ',' +
           detail::csv_join(c.details) + ',' + std::to_string(c.runtime_ms) +
           '\n';
  }
  return out;
}

}  // namespace miracah
