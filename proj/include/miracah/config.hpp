#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "miracah/params.hpp"

namespace miracah {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& all_check_names() {
  static const std::vector<std::string> names = {
      "range",          "original-eigen",  "orthogonality",
      "completeness",   "twist-relation",  "virtual-equation",
      "chain",          "norms",           "xi-positivity",
      "degrees",        "leading-coeffs",  "pd0-identity",
      "shape-invariance", "shifts",        "similarity-eigen",
      "charpoly",       "order-independence", "reduction-m1",
      "reduction-level0", "mirror",        "zeros",
      "float-oracle"};
  return names;
}

struct RunConfig {
  Family family = Family::racah;
  long N = 0;
  Rational b, c, d;
  Rational q;                    // qracah only
  std::vector<long> index_set;   // D, sorted ascending after parse
  std::vector<std::string> checks = {"all"};
  long precision_bits = 256;
  std::string out_path;
  std::string format = "json";
  bool allow_unvalidated = false;
  bool timings = false;
};

inline std::string rational_str(const Rational& r) {
  return format_rational(r);
}

inline std::vector<long> parse_index_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stol(item));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::string> parse_check_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Resolved check selection in the fixed report order.
inline std::vector<std::string> resolve_checks(
    const std::vector<std::string>& requested) {
  const auto& names = all_check_names();
  for (const auto& r : requested)
    if (r == "all") return names;
  for (const auto& r : requested)
    if (std::find(names.begin(), names.end(), r) == names.end())
      throw ConfigError("unknown check name: " + r);
  std::vector<std::string> out;
  for (const auto& name : names)
    if (std::find(requested.begin(), requested.end(), name) !=
        requested.end())
      out.push_back(name);
  return out;
}

inline void check_config(const RunConfig& cfg) {
  if (cfg.format != "json" && cfg.format != "csv")
    throw ConfigError("format must be 'json' or 'csv'");
  if (cfg.precision_bits < 64 || cfg.precision_bits > 65536)
    throw ConfigError("precision_bits must lie in [64, 65536]");
  resolve_checks(cfg.checks);
}

namespace detail {

inline Rational json_rational(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const ParseError& e) {
      throw ConfigError("field '" + key + "': " + e.what());
    }
  }
  if (v.is_number_integer())
    return Rational(static_cast<long>(v.get<long long>()));
  throw ConfigError("field '" + key + "' must be an integer or a 'p/q' string");
}

}  // namespace detail

inline RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig cfg;
  if (!j.contains("family")) throw ConfigError("config needs a 'family' field");
  std::string fam = j.at("family").get<std::string>();
  if (fam == "racah") {
    cfg.family = Family::racah;
  } else if (fam == "qracah") {
    cfg.family = Family::qracah;
  } else {
    throw ConfigError("family must be 'racah' or 'qracah'");
  }
  if (!j.contains("N")) throw ConfigError("config needs an 'N' field");
  cfg.N = j.at("N").get<long>();
  for (const char* key : {"b", "c", "d"})
    if (!j.contains(key))
      throw ConfigError(std::string("config needs a '") + key + "' field");
  cfg.b = detail::json_rational(j.at("b"), "b");
  cfg.c = detail::json_rational(j.at("c"), "c");
  cfg.d = detail::json_rational(j.at("d"), "d");
  if (cfg.family == Family::qracah) {
    if (!j.contains("q")) throw ConfigError("qracah configs need a 'q' field");
    cfg.q = detail::json_rational(j.at("q"), "q");
  } else if (j.contains("q")) {
    throw ConfigError("'q' is only meaningful for the qracah family");
  }
  if (j.contains("D")) {
    const auto& dv = j.at("D");
    if (dv.is_string()) {
      cfg.index_set = parse_index_list(dv.get<std::string>());
    } else if (dv.is_array()) {
      for (const auto& e : dv) cfg.index_set.push_back(e.get<long>());
      std::sort(cfg.index_set.begin(), cfg.index_set.end());
    } else {
      throw ConfigError("'D' must be an array of levels or a '1,2' string");
    }
  }
  if (j.contains("checks")) {
    const auto& cv = j.at("checks");
    cfg.checks.clear();
    if (cv.is_string()) {
      cfg.checks = parse_check_list(cv.get<std::string>());
    } else if (cv.is_array()) {
      for (const auto& e : cv) cfg.checks.push_back(e.get<std::string>());
    } else {
      throw ConfigError("'checks' must be an array of names or 'all'");
    }
  }
  if (j.contains("precision_bits"))
    cfg.precision_bits = j.at("precision_bits").get<long>();
  if (j.contains("out")) cfg.out_path = j.at("out").get<std::string>();
  if (j.contains("format")) cfg.format = j.at("format").get<std::string>();
  if (j.contains("allow_unvalidated"))
    cfg.allow_unvalidated = j.at("allow_unvalidated").get<bool>();
  if (j.contains("timings")) cfg.timings = j.at("timings").get<bool>();
  check_config(cfg);
  return cfg;
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

inline ParameterSet build_parameters(const RunConfig& cfg) {
  if (cfg.family == Family::racah)
    return make_racah(cfg.N, cfg.b, cfg.c, cfg.d);
  return make_qracah(cfg.N, cfg.q, cfg.b, cfg.c, cfg.d);
}

// Echo of the resolved configuration, used verbatim inside every report so
// that a report is self-describing.
inline nlohmann::ordered_json config_echo(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["family"] = cfg.family == Family::racah ? "racah" : "qracah";
  j["N"] = cfg.N;
  j["b"] = rational_str(cfg.b);
  j["c"] = rational_str(cfg.c);
  j["d"] = rational_str(cfg.d);
  if (cfg.family == Family::qracah) j["q"] = rational_str(cfg.q);
  j["D"] = cfg.index_set;
  j["checks"] = resolve_checks(cfg.checks);
  j["precision_bits"] = cfg.precision_bits;
  j["format"] = cfg.format;
  j["allow_unvalidated"] = cfg.allow_unvalidated;
  return j;
}

}  // namespace miracah
