#include <fstream>
#include <iostream>
#include <string>

#include <boost/program_options.hpp>

#include "miracah/runner.hpp"

namespace po = boost::program_options;
using namespace miracah;

namespace {

po::options_description cli_options() {
  po::options_description opts("options");
  opts.add_options()
      ("help,h", "show this help")
      ("config", po::value<std::string>(),
       "JSON config file; explicit flags override its fields")
      ("family", po::value<std::string>(), "racah | qracah")
      ("N", po::value<long>(), "number of excited levels (grid runs 0..N)")
      ("q", po::value<std::string>(), "base with 0 < q < 1 (qracah only)")
      ("b", po::value<std::string>(),
       "parameter b as an exact rational, e.g. 12 or 1/1024")
      ("c", po::value<std::string>(), "parameter c as an exact rational")
      ("d", po::value<std::string>(), "parameter d as an exact rational")
      ("D", po::value<std::string>(),
       "deletion levels, comma separated, e.g. 1,2")
      ("checks", po::value<std::string>(),
       "comma separated check names, or all")
      ("precision-bits", po::value<long>(),
       "working precision of the float oracle (default 256)")
      ("out", po::value<std::string>(), "output path (stdout when absent)")
      ("format", po::value<std::string>(), "json | csv")
      ("allow-unvalidated", po::bool_switch(),
       "evaluate the identities outside the validated parameter region")
      ("timings", po::bool_switch(),
       "record wall-clock runtimes in the report");
  return opts;
}

void usage(std::ostream& os, const po::options_description& opts) {
  os << "usage: mi-racah <verify|table> [options]\n\n"
     << "  verify   run identity checks and emit a machine-readable report\n"
     << "  table    emit coefficient, grid, value and spectrum tables\n\n"
     << opts << "\n"
     << "verify exits 0 when every non-skipped check passes, 1 when any\n"
     << "check fails, and 2 on configuration or usage errors.\n";
}

RunConfig assemble_config(const po::variables_map& vm) {
  RunConfig cfg;
  if (vm.count("config"))
    cfg = load_config_file(vm["config"].as<std::string>());
  bool have_file = vm.count("config") > 0;
  if (vm.count("family")) {
    std::string fam = vm["family"].as<std::string>();
    if (fam == "racah")
      cfg.family = Family::racah;
    else if (fam == "qracah")
      cfg.family = Family::qracah;
    else
      throw ConfigError("family must be 'racah' or 'qracah'");
  } else if (!have_file) {
    throw ConfigError("missing --family (or provide --config)");
  }
  if (vm.count("N"))
    cfg.N = vm["N"].as<long>();
  else if (!have_file)
    throw ConfigError("missing --N");
  for (const char* key : {"b", "c", "d"}) {
    if (vm.count(key)) continue;
    if (!have_file) throw ConfigError(std::string("missing --") + key);
  }
  if (vm.count("b")) cfg.b = parse_rational(vm["b"].as<std::string>());
  if (vm.count("c")) cfg.c = parse_rational(vm["c"].as<std::string>());
  if (vm.count("d")) cfg.d = parse_rational(vm["d"].as<std::string>());
  if (vm.count("q")) {
    if (cfg.family != Family::qracah)
      throw ConfigError("'q' is only meaningful for the qracah family");
    cfg.q = parse_rational(vm["q"].as<std::string>());
  } else if (cfg.family == Family::qracah && !have_file) {
    throw ConfigError("qracah runs need --q");
  }
  if (vm.count("D")) cfg.index_set = parse_index_list(vm["D"].as<std::string>());
  if (vm.count("checks"))
    cfg.checks = parse_check_list(vm["checks"].as<std::string>());
  if (vm.count("precision-bits"))
    cfg.precision_bits = vm["precision-bits"].as<long>();
  if (vm.count("out")) cfg.out_path = vm["out"].as<std::string>();
  if (vm.count("format")) cfg.format = vm["format"].as<std::string>();
  if (vm["allow-unvalidated"].as<bool>()) cfg.allow_unvalidated = true;
  if (vm["timings"].as<bool>()) cfg.timings = true;
  check_config(cfg);
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write to " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  auto opts = cli_options();
  try {
    if (argc < 2) {
      usage(std::cerr, opts);
      return 2;
    }
    std::string cmd = argv[1];
    if (cmd == "-h" || cmd == "--help" || cmd == "help") {
      usage(std::cout, opts);
      return 0;
    }
    if (cmd != "verify" && cmd != "table") {
      std::cerr << "mi-racah: unknown command '" << cmd << "'\n";
      usage(std::cerr, opts);
      return 2;
    }
    po::variables_map vm;
    po::store(po::parse_command_line(argc - 1, argv + 1, opts), vm);
    po::notify(vm);
    if (vm.count("help")) {
      usage(std::cout, opts);
      return 0;
    }
    RunConfig cfg = assemble_config(vm);

    if (cmd == "verify") {
      Report rep = run_verify(cfg);
      std::string text = cfg.format == "csv"
                             ? report_to_csv(rep)
                             : report_to_json(rep).dump(2) + "\n";
      write_text(cfg.out_path, text);
      return rep.all_passed() ? 0 : 1;
    }

    TableBundle t = run_table(cfg);
    if (cfg.format == "json") {
      write_text(cfg.out_path, t.doc.dump(2) + "\n");
      return 0;
    }
    if (cfg.out_path.empty()) {
      for (const auto& [name, content] : t.csv_files)
        std::cout << "# table: " << name << "\n" << content << "\n";
      return 0;
    }
    for (const auto& [name, content] : t.csv_files)
      write_text(cfg.out_path + "." + name + ".csv", content);
    return 0;
  } catch (const Error& e) {
    std::cerr << "mi-racah: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mi-racah: " << e.what() << "\n";
    return 2;
  }
}
