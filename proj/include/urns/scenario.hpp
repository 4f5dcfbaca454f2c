#pragma once

// JSON scenario runner. The scenario schema and report layout are documented
// in docs/scenarios.md.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace urns::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,          // I/O problems, internal residual mismatch, failed suite
  kNonConvergence = 2,   // solver flagged non-convergence or a failed check
  kInconsistent = 3,     // cocycle inconsistency, invariance violation, no exact witness
  kSchemaError = 4,
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::filesystem::path> trace_dir;
};

struct Report {
  nlohmann::json scenario;  // echo of the input after overrides
  nlohmann::json result;    // deterministic given (scenario, seed)
  int exit_code = kOk;
  std::string message;
  std::vector<std::string> warnings;
  double elapsed_ms = 0.0;  // kept out of the deterministic block

  /// {"scenario", "result", "status"}: the byte-comparable part.
  nlohmann::json deterministic() const;
  /// deterministic() plus {"timing"}.
  nlohmann::json to_json() const;
};

/// Runs a parsed scenario. `stem` names trace files.
Report run_scenario(const nlohmann::json& scenario, const RunOptions& options = {}, const std::string& stem = "scenario");

/// Parses and runs a scenario file; unreadable or malformed JSON gives exit 4.
Report run_scenario_file(const std::filesystem::path& path, const RunOptions& options = {});

struct SuiteEntry {
  std::string name;
  int expected_exit = kOk;
  Report report;
  bool passed() const noexcept { return report.exit_code == expected_exit; }
};

struct SuiteSummary {
  std::vector<SuiteEntry> entries;  // sorted by file name
  int exit_code() const noexcept;
  nlohmann::json to_json() const;
};

/// Runs every *.json in `directory` (non-recursive), in parallel; the result
/// does not depend on execution order.
SuiteSummary run_suite(const std::filesystem::path& directory, const RunOptions& options = {});

}  // namespace urns::cli
