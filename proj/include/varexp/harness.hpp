#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace varexp {

using Json = nlohmann::json;

/// A sweep description: which check, its parameters, and pass thresholds.
struct Scenario {
  std::string name;
  std::string check;
  int criterion = 0;
  std::uint64_t seed = 0;
  Json params = Json::object();
  Json thresholds = Json::object();
};

Scenario scenario_from_json(const Json& j);
Json to_json(const Scenario& s);

/// Names accepted in Scenario::check.
const std::vector<std::string>& known_checks();

/// One trial. `group` identifies the configuration (re-runnable from seed),
/// `variant` the scale/resolution/translation it was evaluated at, and
/// `family` separates sub-sweeps whose constants are compared independently.
struct TrialRow {
  std::size_t trial = 0;
  std::size_t group = 0;
  std::string family;
  std::string variant;
  std::uint64_t seed = 0;
  double scale = 1.0;
  double resolution = 0.0;
  double translation = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool ok = true;
  std::string error;
  Json extra = Json::object();
};

struct Aggregate {
  std::size_t rows = 0;
  std::size_t errors = 0;
  std::size_t failed_rows = 0;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  /// max over families of (largest / smallest per-variant maximum ratio).
  double drift = 1.0;
  /// max over groups of (largest / smallest ratio across that group's variants).
  double max_seed_drift = 1.0;
};

struct SweepReport {
  Scenario scenario;
  std::vector<TrialRow> rows;
  Aggregate aggregate;
  bool pass = false;
  bool vacuous = false;
  std::vector<std::string> warnings;
  std::vector<std::string> failures;
  bool bit_reproducible = false;
};

struct RunOptions {
  std::size_t threads = 1;
  bool bit_reproducible = false;
  std::optional<std::uint64_t> seed_override;
};

/// Aggregate statistics over the rows (errored rows excluded from ratios).
Aggregate aggregate_rows(const std::vector<TrialRow>& rows);

/// Applies the scenario thresholds to the aggregate; sets pass, vacuous,
/// warnings and failures. Recognised thresholds: max_ratio, min_ratio,
/// max_drift, max_seed_drift, rows_ok, allow_errors.
void evaluate(SweepReport& report);

/// Executes every trial of the scenario, concurrently up to opt.threads, and
/// merges rows in trial order. A throwing trial yields an error row.
SweepReport run(const Scenario& scenario, const RunOptions& opt = {});

/// The acceptance scenarios, one or more per criterion.
std::vector<Scenario> builtin_suite();

Json to_json(const SweepReport& r);
SweepReport sweep_from_json(const Json& j);

/// Writes <dir>/<name>.{json,csv,svg} for the requested formats and returns the paths.
std::vector<std::filesystem::path> emit(const SweepReport& r, const std::filesystem::path& dir,
                                        const std::set<std::string>& formats);

std::string to_csv(const SweepReport& r);
std::string to_svg(const SweepReport& r);

}  // namespace varexp
