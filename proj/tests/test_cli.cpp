#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "bh/cli.hpp"

using namespace bh;
using io::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json base_config(const std::string& task, const std::string& name, const std::string& dir) {
  json cfg;
  cfg["task"] = task;
  cfg["model"] = {{"gallery", name}};
  cfg["params"] = json::object();
  cfg["output"] = {{"dir", dir}, {"csv", true}, {"svg", false}};
  return cfg;
}

}  // namespace

TEST_CASE("csv formatting primitives") {
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(1.0 / 3.0) == "0.3333333333333333");
  // shortest round-trip: parse back exactly
  for (double v : {3.141592653589793, 1e-300, -2.5e17, 0.1}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::csv_escape("plain") == "plain");
  CHECK(io::csv_escape("a,b") == "\"a,b\"");
  CHECK(io::csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");

  io::CsvTable t;
  t.header = {"x", "note"};
  t.rows = {{"1", "a,b"}};
  std::string csv = io::to_csv(t);
  CHECK(csv == "x,note\r\n1,\"a,b\"\r\n");
}

TEST_CASE("svg chart is well formed") {
  io::SvgSeries s;
  s.label = "eta";
  s.x = {0.1, 0.01, 0.001};
  s.y = {0.2, 0.02, 0.002};
  std::string svg = io::loglog_svg("decay", {s});
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("decay") != std::string::npos);
}

TEST_CASE("unknown config keys are rejected with exit 2") {
  json cfg = base_config("effective", "scalar_1d", "/tmp/bh_cli_unknown");
  cfg["typo_key"] = 1;
  cli::RunResult rr = cli::run_config(cfg);
  CHECK(rr.exit_code == cli::kValidationFailure);

  json cfg2 = base_config("effective", "scalar_1d", "/tmp/bh_cli_unknown");
  cfg2["params"]["no_such_param"] = 3;
  CHECK(cli::run_config(cfg2).exit_code == cli::kValidationFailure);
}

TEST_CASE("invalid model is rejected with exit 2") {
  json cfg = base_config("effective", "no_such_gallery_entry", "/tmp/bh_cli_badmodel");
  CHECK(cli::run_config(cfg).exit_code == cli::kValidationFailure);

  // explicit model with m < n: symbol rows shorter than columns
  json cfg2 = base_config("effective", "scalar_1d", "/tmp/bh_cli_badmodel");
  json g_field = {{"rows", 1},
                  {"cols", 1},
                  {"grid_shape", {8, 8}},
                  {"fourier", {{{"kappa", {0, 0}}, {"coeff", {{{1.0, 0.0}}}}}}}};
  cfg2["model"] = {
      {"lattice", {{"basis", {{6.283185307179586, 0.0}, {0.0, 6.283185307179586}}}}},
      // one 1x2 coefficient per direction: m = 1 < n = 2
      {"symbol", {{"coeff", {{{{1.0, 0.0}, {0.0, 0.0}}}, {{{0.0, 1.0}, {0.0, 0.0}}}}}}},
      {"fields", {{"g", g_field}}}};
  CHECK(cli::run_config(cfg2).exit_code == cli::kValidationFailure);
}

TEST_CASE("gallery task writes a summary with the effective matrix") {
  const std::string dir = "/tmp/bh_cli_gallery";
  std::filesystem::remove_all(dir);
  json cfg = base_config("gallery", "scalar_1d", dir);
  cli::RunResult rr = cli::run_config(cfg);
  REQUIRE(rr.exit_code == cli::kOk);

  json summary = json::parse(read_file(dir + "/summary.json"));
  CHECK(summary["task"] == "gallery");
  // audit trail: the resolved config is embedded
  CHECK(summary.contains("config"));
  CHECK(summary["config"]["model"]["gallery"] == "scalar_1d");
  double g0 = summary["g0"][0][0][0].get<double>();
  CHECK(g0 == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));
}

TEST_CASE("error sweep artifacts are deterministic") {
  const std::string dir = "/tmp/bh_cli_sweep";
  json cfg = base_config("error-sweep", "scalar_1d", dir);
  cfg["params"]["s"] = 3.0;
  cfg["params"]["tau"] = 1.0;
  cfg["params"]["K"] = 8;
  cfg["params"]["N_k"] = 8;
  cfg["params"]["eps"] = {0.125, 0.0625, 0.03125};
  cfg["output"]["svg"] = true;

  std::filesystem::remove_all(dir);
  REQUIRE(cli::run_config(cfg).exit_code == cli::kOk);
  std::string first = read_file(dir + "/error_sweep.csv");
  std::string svg = read_file(dir + "/error_sweep.svg");
  CHECK(svg.find("<svg") != std::string::npos);

  std::filesystem::remove_all(dir);
  REQUIRE(cli::run_config(cfg).exit_code == cli::kOk);
  CHECK(read_file(dir + "/error_sweep.csv") == first);  // byte-identical rerun
}

TEST_CASE("argv front end") {
  // gallery list
  const char* list_argv[] = {"bhomog", "gallery", "list"};
  CHECK(cli::run(3, list_argv) == 0);

  // emit a config, then run it with overrides
  const std::string cfg_path = "/tmp/bh_cli_emitted.json";
  std::filesystem::remove(cfg_path);
  const char* emit_argv[] = {"bhomog", "gallery", "scalar_1d", "--emit-config", cfg_path.c_str()};
  REQUIRE(cli::run(5, emit_argv) == 0);
  REQUIRE(std::filesystem::exists(cfg_path));

  const std::string dir = "/tmp/bh_cli_argv_out";
  std::filesystem::remove_all(dir);
  const char* run_argv[] = {"bhomog",   "run",     cfg_path.c_str(), "--task", "effective",
                            "--out",    dir.c_str()};
  CHECK(cli::run(7, run_argv) == 0);
  CHECK(std::filesystem::exists(dir + "/summary.json"));

  // --set override with a bad value type fails validation
  const char* bad_argv[] = {"bhomog", "run", cfg_path.c_str(), "--set",
                            "params.cutoff=\"eight\""};
  CHECK(cli::run(5, bad_argv) == 2);

  // malformed config file: parse error, exit 2
  io::write_text("/tmp/bh_cli_broken.json", "{ \"task\": ");
  const char* broken_argv[] = {"bhomog", "run", "/tmp/bh_cli_broken.json"};
  CHECK(cli::run(3, broken_argv) == 2);
}
