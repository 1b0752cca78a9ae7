#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "mglab/mackey_glass.hpp"
#include "mglab/runner.hpp"

namespace mglab {

struct DatasetSpec {
  MackeyGlassParams params = MackeyGlassParams::standard(17.0);
  IntegratorConfig integrator;
  SplitSpec split{100, 2000, 286};
};

/// One experiment file. Model blocks keep their raw JSON: any field given
/// as a list is a sweep axis.
struct ExperimentSpec {
  std::string name = "experiment";
  DatasetSpec dataset;
  std::vector<nlohmann::json> model_blocks;
  std::vector<std::uint64_t> seeds;
  std::string baseline = "esn";
  std::size_t sweep_cap = 10000;
  std::filesystem::path output_dir;
};

inline constexpr std::size_t kDefaultSeedCount = 15;

/// Accepts `model` as {kind: block | [blocks]} or as a list of blocks with
/// a `kind` field. Without `seeds`, 15 consecutive seeds from `seed_base`
/// (or the spec's own `seed_base`). Throws SpecInvalid.
ExperimentSpec parse_experiment_spec(const nlohmann::json& j, std::uint64_t seed_base = 0);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path, std::uint64_t seed_base = 0);

nlohmann::json to_json(const DatasetSpec& d);

struct ConfigPoint {
  std::size_t index = 0;
  ModelKind kind;
};

/// Cartesian product of every list-valued field, block by block. Throws
/// SpecInvalid when the product exceeds spec.sweep_cap.
std::vector<ConfigPoint> expand_sweep(const ExperimentSpec& spec);

/// True when some model field is a list.
bool has_sweep_axes(const ExperimentSpec& spec);

struct ResultRow {
  std::size_t cell = 0;
  std::size_t point = 0;
  std::string kind;
  std::uint64_t seed = 0;
  bool seed_invariant = false;
  bool diverged = false;
  double mse = 0.0;
  double open_loop_mse = 0.0;
  double train_mse = 0.0;
  std::string error;        // empty unless the cell failed
  std::string dataset;      // compact JSON
  std::string config;       // compact JSON of the resolved model config
  double wall_ms = 0.0;     // not part of results.csv
  std::optional<PredictionResult> prediction;
};

struct ExperimentReport {
  std::string name;
  std::string baseline = "esn";
  std::vector<ResultRow> rows;  // ordered by cell
};

struct RunOptions {
  std::size_t jobs = 1;
};

/// Runs every (config point, seed) cell. Seed-invariant kinds run once per
/// point. Cells differing only in ridge_beta share one state collection.
/// Cell failures are recorded on the row and never abort the sweep.
ExperimentReport run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

/// Dataset for an experiment: long enough for the deepest history of any
/// config point, with that history carved out of the warmup.
SeriesFrame experiment_dataset(const ExperimentSpec& spec, const std::vector<ConfigPoint>& points);

/// Aggregates per config point, best point per kind and relative
/// improvement (candidate - baseline) / baseline of each kind's best mean
/// against the baseline kind's best mean. Depends only on persisted fields.
nlohmann::json summarize(const ExperimentReport& report);

std::string results_csv(const ExperimentReport& report);
/// Inverse of results_csv; predictions and timings are not restored.
ExperimentReport parse_results_csv(std::string_view text, std::string baseline = "esn");

/// Writes results.csv, summary.json, timings.csv and one predictions_<kind>.csv
/// per best point whose prediction is available. Throws IoFailure.
void emit_report(const ExperimentReport& report, const std::filesystem::path& dir);

/// `summary.json` text exactly as emit_report writes it.
std::string summary_text(const ExperimentReport& report);

}  // namespace mglab
