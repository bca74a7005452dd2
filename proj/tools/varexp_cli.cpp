#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "varexp/error.hpp"
#include "varexp/harness.hpp"

namespace {

std::set<std::string> split_formats(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(item);
  }
  return out;
}

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("VAREXP_SEED");
  if (!v || !*v) return std::nullopt;
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw varexp::Error(std::string("VAREXP_SEED is not an unsigned integer: ") + v);
  }
}

void print_summary(const varexp::SweepReport& r) {
  const auto& a = r.aggregate;
  std::cout << (r.pass ? "PASS " : "FAIL ") << r.scenario.name << " [" << r.scenario.check
            << "] rows=" << a.rows << " errors=" << a.errors << " max=" << a.max_ratio
            << " min=" << a.min_ratio << " drift=" << a.drift
            << " seed_drift=" << a.max_seed_drift << "\n";
  for (const auto& w : r.warnings) std::cout << "  warning: " << w << "\n";
  for (const auto& f : r.failures) std::cout << "  failure: " << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"varexp: seeded inequality sweeps for variable-exponent operators"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "varexp_out", formats = "json,csv,svg";
  std::size_t threads = 1;
  bool bit_reproducible = false;

  auto* run = app.add_subcommand("run", "Run one scenario file");
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required()->check(
      CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--formats", formats, "Comma-separated subset of json,csv,svg");
  run->add_option("--threads", threads, "Concurrent trials")->check(CLI::PositiveNumber);
  run->add_flag("--bit-reproducible", bit_reproducible, "Record deterministic-ordering mode");

  auto* suite = app.add_subcommand("suite", "Run the built-in acceptance scenarios");
  std::vector<int> only;
  suite->add_option("--out", out_dir, "Output directory");
  suite->add_option("--formats", formats, "Comma-separated subset of json,csv,svg");
  suite->add_option("--threads", threads, "Concurrent trials")->check(CLI::PositiveNumber);
  suite->add_option("--criterion", only, "Restrict to these criterion numbers");
  suite->add_flag("--bit-reproducible", bit_reproducible, "Record deterministic-ordering mode");

  auto* list = app.add_subcommand("list", "Print the built-in scenarios as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    varexp::RunOptions opt;
    opt.threads = threads;
    opt.bit_reproducible = bit_reproducible;
    opt.seed_override = env_seed();
    const auto fmts = split_formats(formats);

    if (*list) {
      varexp::Json all = varexp::Json::array();
      for (const auto& s : varexp::builtin_suite()) all.push_back(varexp::to_json(s));
      std::cout << all.dump(2) << "\n";
      return 0;
    }

    std::vector<varexp::Scenario> scenarios;
    if (*run) {
      std::ifstream in(scenario_path);
      if (!in) throw varexp::Error("cannot open " + scenario_path);
      scenarios.push_back(varexp::scenario_from_json(varexp::Json::parse(in)));
    } else {
      for (auto& s : varexp::builtin_suite()) {
        if (only.empty() || std::find(only.begin(), only.end(), s.criterion) != only.end()) {
          scenarios.push_back(std::move(s));
        }
      }
    }

    bool all_pass = true;
    for (const auto& s : scenarios) {
      const auto report = varexp::run(s, opt);
      if (!fmts.empty()) varexp::emit(report, out_dir, fmts);
      print_summary(report);
      all_pass = all_pass && report.pass;
    }
    return all_pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
