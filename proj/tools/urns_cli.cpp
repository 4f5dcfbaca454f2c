// Command-line front end: `urns_cli run <scenario.json>` and
// `urns_cli suite <dir>`. Exit codes are listed in urns/scenario.hpp.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "urns/scenario.hpp"

namespace {

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed points of bounded isometric actions and derivation witnesses"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  double tol = 0.0;
  std::string trace_dir;
  std::string json_out;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "override the scenario seed");
    sub->add_option("--tol", tol, "override the scenario tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--trace-dir", trace_dir, "directory for iteration traces (CSV)");
    sub->add_option("--json-out", json_out, "write reports here (file for run, directory for suite)");
  };

  std::string scenario_path;
  auto* run = app.add_subcommand("run", "run one scenario and print its report");
  run->add_option("scenario", scenario_path, "scenario JSON file")->required();
  add_common(run);

  std::string suite_dir;
  auto* suite = app.add_subcommand("suite", "run every scenario in a directory");
  suite->add_option("dir", suite_dir, "directory of scenario JSON files")->required();
  add_common(suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : urns::cli::kSchemaError;
  }

  urns::cli::RunOptions options;
  if (app.get_subcommands().front()->count("--seed")) options.seed = seed;
  if (app.get_subcommands().front()->count("--tol")) options.tol = tol;
  if (!trace_dir.empty()) options.trace_dir = trace_dir;

  try {
    if (*run) {
      const auto report = urns::cli::run_scenario_file(scenario_path, options);
      std::cout << report.to_json().dump(2) << '\n';
      if (!report.message.empty()) std::cerr << report.message << '\n';
      if (!json_out.empty()) write_json(json_out, report.to_json());
      return report.exit_code;
    }
    const auto summary = urns::cli::run_suite(suite_dir, options);
    for (const auto& e : summary.entries) {
      std::printf("%-40s exit %d (expected %d) %s\n", e.name.c_str(), e.report.exit_code, e.expected_exit,
                  e.passed() ? "ok" : "MISMATCH");
    }
    if (!json_out.empty()) {
      std::filesystem::create_directories(json_out);
      for (const auto& e : summary.entries) {
        write_json(std::filesystem::path(json_out) / (std::filesystem::path(e.name).stem().string() + ".report.json"),
                   e.report.to_json());
      }
      write_json(std::filesystem::path(json_out) / "summary.json", summary.to_json());
    }
    return summary.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return urns::cli::kFailure;
  }
}
