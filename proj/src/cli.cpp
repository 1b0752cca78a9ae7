#include "mglab/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "mglab/error.hpp"
#include "mglab/format.hpp"
#include "mglab/harness.hpp"

namespace mglab {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSpec = 1;
constexpr int kExitIo = 2;

std::filesystem::path default_out(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv("MG_LAB_OUT"); env && *env) return env;
  return fallback;
}

int run_generate(double tau, std::size_t samples, const IntegratorConfig& integ, std::filesystem::path out) {
  const auto params = MackeyGlassParams::standard(tau);
  const SeriesFrame series = generate(params, integ, samples);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + out.string() + ": " + ec.message());

  const std::string tag = dataset_tag(tau);
  const std::string csv = series_csv(series);
  write_text_file(out / (tag + ".csv"), csv);
  DatasetSpec d;
  d.params = params;
  d.integrator = integ;
  nlohmann::json side = to_json(d);
  side.erase("split");
  side["samples"] = samples;
  side["csv"] = tag + ".csv";
  side["checksum"] = {{"algorithm", "fnv1a64"}, {"value", fnv1a_hex(csv)}};
  write_text_file(out / (tag + ".json"), side.dump(2) + "\n");
  std::cout << "wrote " << (out / (tag + ".csv")).string() << " (" << samples << " samples)\n";
  return kExitOk;
}

int run_spec(const std::filesystem::path& spec_path, std::optional<std::filesystem::path> out, std::size_t jobs,
             std::uint64_t seed_base, bool allow_axes) {
  if (!std::filesystem::exists(spec_path)) {
    throw Error(ErrorCode::SpecInvalid, "spec file not found: " + spec_path.string());
  }
  const ExperimentSpec spec = load_experiment_spec(spec_path, seed_base);
  if (!allow_axes && has_sweep_axes(spec)) {
    throw Error(ErrorCode::SpecInvalid, "spec has sweep axes (list-valued fields); use 'sweep'");
  }
  const std::filesystem::path dir =
      out ? *out : (!spec.output_dir.empty() ? spec.output_dir : default_out("mglab_out"));
  const ExperimentReport report = run_experiment(spec, RunOptions{jobs});
  emit_report(report, dir);

  const nlohmann::json summary = summarize(report);
  std::cout << report.rows.size() << " cells, " << summary["point_count"].get<std::size_t>()
            << " config points -> " << dir.string() << "\n";
  for (const auto& [kind, b] : summary["best"].items()) {
    std::cout << "  best " << kind << ": point " << b["point"] << " mean mse " << b["mean_mse"] << "\n";
  }
  return kExitOk;
}

int run_report(const std::filesystem::path& results, std::optional<std::filesystem::path> out,
               const std::string& baseline) {
  const ExperimentReport report = parse_results_csv(read_text_file(results), baseline);
  const std::filesystem::path dir = out ? *out : results.parent_path();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  write_text_file(dir / "summary.json", summary_text(report));
  std::cout << "wrote " << (dir / "summary.json").string() << "\n";
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Reservoir computing benchmarks on Mackey-Glass series"};
  app.require_subcommand(1);

  double tau = 17.0;
  std::size_t samples = 2386;
  IntegratorConfig integ;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Integrate Mackey-Glass and write CSV plus sidecar JSON");
  gen->add_option("--tau", tau, "Delay")->required();
  gen->add_option("--samples", samples, "Number of samples");
  gen->add_option("--out", gen_out, "Output directory");
  gen->add_option("--dt", integ.internal_dt, "Internal integration step");
  gen->add_option("--sample-dt", integ.sample_dt, "Sampling interval");
  gen->add_option("--warmup", integ.warmup_samples, "Discarded leading samples");
  gen->add_option("--history", integ.history_value, "Constant pre-history value");

  std::string spec_path;
  std::string out;
  std::size_t jobs = 1;
  std::uint64_t seed_base = 0;
  auto* run = app.add_subcommand("run", "Run a single experiment spec");
  auto* sweep = app.add_subcommand("sweep", "Run an experiment spec with sweep axes");
  for (auto* sub : {run, sweep}) {
    sub->add_option("--spec", spec_path, "Experiment spec (JSON)")->required();
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--jobs", jobs, "Parallel cells")->check(CLI::PositiveNumber);
    sub->add_option("--seed-base", seed_base, "First of the default consecutive seeds");
  }

  std::string results;
  std::string baseline = "esn";
  auto* rep = app.add_subcommand("report", "Re-summarize an existing results.csv");
  rep->add_option("--results", results, "results.csv path")->required();
  rep->add_option("--out", out, "Output directory (default: next to results.csv)");
  rep->add_option("--baseline", baseline, "Kind used as the relative-improvement baseline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitSpec;
  }

  const auto out_opt = out.empty() ? std::nullopt : std::optional<std::filesystem::path>(out);
  try {
    if (*gen) return run_generate(tau, samples, integ, gen_out.empty() ? default_out(".") : std::filesystem::path(gen_out));
    if (*run) return run_spec(spec_path, out_opt, jobs, seed_base, false);
    if (*sweep) return run_spec(spec_path, out_opt, jobs, seed_base, true);
    if (*rep) return run_report(results, out_opt, baseline);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::IoFailure ? kExitIo : kExitSpec;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpec;
  }
  return kExitSpec;
}

}  // namespace mglab
