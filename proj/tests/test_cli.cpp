#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "mglab/cli.hpp"
#include "mglab/format.hpp"
#include "mglab/harness.hpp"
#include "mglab/series.hpp"
#include "test_util.hpp"

using namespace mglab;

namespace {

int run_cli(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"mglab"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

void write_spec(const std::filesystem::path& p, const std::string& model) {
  write_text_file(p, R"({"name":"cli","dataset":{"tau":17,"split":{"init_len":50,"train_len":400,"test_len":40}},)"
                     R"("seeds":[0,1],"model":)" + model + "}");
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("generate writes the series and a sidecar") {
  auto d = test::scratch_dir("cli_gen");
  CHECK(run_cli({"generate", "--tau", "17", "--samples", "2386", "--out", d.string()}) == 0);
  auto s = read_series_csv(d / "mg_tau17.csv");
  CHECK(s.sample_count() == 2386);
  auto side = nlohmann::json::parse(read_text_file(d / "mg_tau17.json"));
  CHECK(side.at("samples") == 2386);
  CHECK(side.at("checksum").at("value") == fnv1a_hex(read_text_file(d / "mg_tau17.csv")));
}

TEST_CASE("run and sweep") {
  auto d = test::scratch_dir("cli_run");
  write_spec(d / "single.json", R"({"tcrc":{"delay":6,"layers":2}})");
  write_spec(d / "grid.json", R"({"tcrc":{"delay":[4,6]},"esn":{"reservoir_size":20,"ridge_beta":[1e-6,1e-4]}})");

  CHECK(run_cli({"run", "--spec", (d / "single.json").string(), "--out", (d / "r").string()}) == 0);
  CHECK(std::filesystem::exists(d / "r" / "results.csv"));
  CHECK(run_cli({"run", "--spec", (d / "grid.json").string(), "--out", (d / "x").string()}) == 1);

  CHECK(run_cli({"sweep", "--spec", (d / "grid.json").string(), "--out", (d / "j4").string(), "--jobs", "4"}) == 0);
  CHECK(run_cli({"sweep", "--spec", (d / "grid.json").string(), "--out", (d / "j1").string(), "--jobs", "1"}) == 0);
  CHECK(read_text_file(d / "j4" / "results.csv") == read_text_file(d / "j1" / "results.csv"));
  CHECK(read_text_file(d / "j4" / "summary.json") == read_text_file(d / "j1" / "summary.json"));
  auto report = parse_results_csv(read_text_file(d / "j1" / "results.csv"));
  CHECK(report.rows.size() == 2 + 4);

  // summary.json is rebuilt exactly from results.csv alone
  std::filesystem::create_directories(d / "resumed");
  std::filesystem::copy_file(d / "j1" / "results.csv", d / "resumed" / "results.csv");
  CHECK(run_cli({"report", "--results", (d / "resumed" / "results.csv").string()}) == 0);
  CHECK(read_text_file(d / "resumed" / "summary.json") == read_text_file(d / "j1" / "summary.json"));
}

TEST_CASE("output directory from the environment") {
  auto d = test::scratch_dir("cli_env");
  write_spec(d / "single.json", R"({"ngrc":{"delay":2}})");
  ::setenv("MG_LAB_OUT", (d / "env_out").string().c_str(), 1);
  const int rc = run_cli({"run", "--spec", (d / "single.json").string()});
  ::unsetenv("MG_LAB_OUT");
  CHECK(rc == 0);
  CHECK(std::filesystem::exists(d / "env_out" / "results.csv"));
}

TEST_CASE("exit codes") {
  auto d = test::scratch_dir("cli_err");
  CHECK(run_cli({"run", "--spec", (d / "missing.json").string()}) == 1);
  write_text_file(d / "broken.json", "{not json");
  CHECK(run_cli({"sweep", "--spec", (d / "broken.json").string()}) == 1);
  CHECK(run_cli({"bogus"}) == 1);
  CHECK(run_cli({"report", "--results", (d / "none.csv").string()}) == 2);
  write_text_file(d / "bad.csv", "a,b\n1,2\n");
  CHECK(run_cli({"report", "--results", (d / "bad.csv").string()}) == 2);
  // a file where the output directory should go
  write_spec(d / "ok.json", R"({"ngrc":{"delay":2}})");
  write_text_file(d / "blocker", "x");
  CHECK(run_cli({"run", "--spec", (d / "ok.json").string(), "--out", (d / "blocker" / "sub").string()}) == 2);
}

}  // TEST_SUITE
