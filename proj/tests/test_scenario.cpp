#include <doctest.h>

#include <fstream>
#include <random>

#include "urns/random.hpp"
#include "urns/scenario.hpp"

using namespace urns::cli;
using nlohmann::json;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("urns_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

const json kSwap = {{"kind", "box_fixed_point"},
                    {"n", 2},
                    {"generators", {{{"perm", {1, 0}}, {"signs", {1, 1}}, {"translation", {0, 0}}}}},
                    {"x0", {1, 0}},
                    {"method", "both"}};

}  // namespace

TEST_CASE("rng conversions follow the documented formulas") {
  urns::StableRng rng(123);
  std::mt19937_64 ref(123);
  CHECK(rng.uniform() == static_cast<double>(ref() >> 11) * 0x1p-53);
  CHECK(rng.next_word() == ref());
  urns::StableRng a(9), b(9);
  for (int i = 0; i < 10; ++i) CHECK(a.normal() == b.normal());
  CHECK(a.fork(3).next_word() == b.fork(3).next_word());
}

TEST_CASE("swap scenario") {
  const Report r = run_scenario(kSwap);
  CHECK(r.exit_code == kOk);
  CHECK(r.result["iterate_box"]["point"] == json({0.5, 0.5}));
  CHECK(r.result["orbit_center"]["residual"] == 0.0);
}

TEST_CASE("trace file is written on request") {
  const auto dir = temp_dir("trace");
  RunOptions opt;
  opt.trace_dir = dir;
  const Report r = run_scenario(kSwap, opt, "swap");
  CHECK(r.result["trace_file"] == "swap.trace.csv");
  CHECK(std::filesystem::exists(dir / "swap.trace.csv"));
}

TEST_CASE("inverted box is a schema error") {
  const json s = {{"kind", "urns_certificate"}, {"space", "box"}, {"box", {{"lo", {1, 0}}, {"hi", {0, 1}}}}};
  CHECK(run_scenario(s).exit_code == kSchemaError);
}

TEST_CASE("malformed scenarios are schema errors") {
  CHECK(run_scenario(json{{"kind", "nonsense"}}).exit_code == kSchemaError);
  CHECK(run_scenario(json::array()).exit_code == kSchemaError);
  json missing = kSwap;
  missing.erase("x0");
  CHECK(run_scenario(missing).exit_code == kSchemaError);
  const auto dir = temp_dir("badjson");
  std::ofstream(dir / "bad.json") << "{ not json";
  CHECK(run_scenario_file(dir / "bad.json").exit_code == kSchemaError);
}

TEST_CASE("corrupted derivation exits inconsistent and names the pair") {
  const json s = {{"kind", "matrix_derivation"},
                  {"group", {{"named", "Q8"}}},
                  {"derivation", {{"inner", {{1, 0}, {0, 2}, {0.5, -1}, {3, 0}}}}},
                  {"corrupt", {{"generator", "j"}, {"entry", {1, 0}}, {"delta", 0.01}}}};
  const Report r = run_scenario(s);
  CHECK(r.exit_code == kInconsistent);
  CHECK(r.result["violating_pair"].size() == 2);

  json unchecked = s;
  unchecked["check_cocycle"] = false;
  const Report u = run_scenario(unchecked);
  CHECK(u.exit_code == kInconsistent);
  CHECK(u.result["methods"]["least_squares"]["no_exact_witness"] == true);
}

TEST_CASE("explicit derivation values and generator matrices") {
  // Z2 generated by the swap on C^2; delta(w) = diag(1, -1) anticommutes with w.
  const json s = {{"kind", "matrix_derivation"},
                  {"group", {{"generators", {{{"label", "w"}, {"matrix", {{0, 0}, {1, 0}, {1, 0}, {0, 0}}}}}}}},
                  {"derivation", {{"values", {{"w", {{1, 0}, {0, 0}, {0, 0}, {-1, 0}}}}}}}};
  const Report r = run_scenario(s);
  CHECK(r.exit_code == kOk);
  CHECK(r.result["group_order"] == 2);
  for (const auto& [name, m] : r.result["methods"].items()) CHECK(m["residual"].get<double>() <= 1e-8);
  CHECK(r.result["similarity"]["ok"] == true);
}

TEST_CASE("group algebra scenario with an explicit inner derivation") {
  const json s = {{"kind", "group_algebra_derivation"},
                  {"group", {{"permutations", {{1, 0, 2}, {1, 2, 0}}}}},
                  {"scalars", "complex"},
                  {"method", "both"},
                  {"derivation", {{"inner", {0, {1, 1}, 0, 2, 0, -1}}}}};
  const Report r = run_scenario(s);
  CHECK(r.exit_code == kOk);
  CHECK(r.result["group_order"] == 6);
  CHECK(r.result["methods"]["averaging"]["residual"].get<double>() <= 1e-8);
  CHECK(r.result["methods"]["orbit_center"]["residual"].get<double>() <= 1e-8);
}

TEST_CASE("seed override changes random instances deterministically") {
  const json s = {{"kind", "urns_certificate"},
                  {"space", "fiber"},
                  {"random", {{"instances", 20}}}};
  RunOptions a;
  a.seed = 5;
  CHECK(run_scenario(s, a).deterministic() == run_scenario(s, a).deterministic());
  RunOptions b;
  b.seed = 6;
  CHECK(run_scenario(s, a).result != run_scenario(s, b).result);
}

TEST_CASE("empty suite directory passes") {
  const auto dir = temp_dir("empty");
  const SuiteSummary sum = run_suite(dir);
  CHECK(sum.entries.empty());
  CHECK(sum.exit_code() == kOk);
}

TEST_CASE("suite honours expect_exit and is deterministic") {
  const auto dir = temp_dir("suite");
  std::ofstream(dir / "a_swap.json") << kSwap.dump();
  json bad = {{"kind", "urns_certificate"}, {"space", "box"}, {"box", {{"lo", {1}}, {"hi", {0}}}}, {"expect_exit", 4}};
  std::ofstream(dir / "b_bad.json") << bad.dump();
  const SuiteSummary first = run_suite(dir);
  CHECK(first.exit_code() == kOk);
  REQUIRE(first.entries.size() == 2);
  CHECK(first.entries[0].name == "a_swap.json");
  const SuiteSummary second = run_suite(dir);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(first.entries[i].report.deterministic().dump() == second.entries[i].report.deterministic().dump());
  }
  bad["expect_exit"] = 0;
  std::ofstream(dir / "b_bad.json") << bad.dump();
  CHECK(run_suite(dir).exit_code() == kFailure);
}
