#include <omp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "mglab/error.hpp"
#include "mglab/harness.hpp"

namespace mglab {

namespace {

struct Cell {
  std::size_t index;
  const ConfigPoint* point;
  std::uint64_t seed;
  bool seed_invariant;
};

struct Group {
  std::vector<std::size_t> cells;
};

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

ResultRow blank_row(const Cell& c, const std::string& dataset) {
  ResultRow r;
  r.cell = c.index;
  r.point = c.point->index;
  r.kind = std::string(kind_name(c.point->kind));
  r.seed = c.seed;
  r.seed_invariant = c.seed_invariant;
  r.dataset = dataset;
  r.config = to_json(with_seed(c.point->kind, c.seed)).dump();
  return r;
}

void mark_failed(ResultRow& r, const std::string& what) {
  r.error = what;
  r.mse = std::numeric_limits<double>::infinity();
  r.open_loop_mse = std::numeric_limits<double>::infinity();
  r.train_mse = std::numeric_limits<double>::infinity();
}

}  // namespace

SeriesFrame experiment_dataset(const ExperimentSpec& spec, const std::vector<ConfigPoint>& points) {
  const SplitSpec& split = spec.dataset.split;
  std::size_t n = split.total() + 1;
  for (const auto& p : points) n = std::max(n, required_samples(p.kind, split));
  IntegratorConfig integ = spec.dataset.integrator;
  const std::size_t extra = n - split.total();
  integ.warmup_samples -= std::min(integ.warmup_samples, extra);
  return generate(spec.dataset.params, integ, n);
}

ExperimentReport run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  const std::vector<ConfigPoint> points = expand_sweep(spec);
  ExperimentReport report;
  report.name = spec.name;
  report.baseline = spec.baseline;
  if (points.empty()) return report;

  const SeriesFrame series = experiment_dataset(spec, points);
  const std::string dataset = to_json(spec.dataset).dump();

  std::vector<Cell> cells;
  for (const auto& p : points) {
    const bool invariant = is_seed_invariant(p.kind);
    for (std::size_t s = 0; s < (invariant ? 1 : spec.seeds.size()); ++s) {
      cells.push_back({cells.size(), &p, spec.seeds[s], invariant});
    }
  }

  // Cells that differ only in ridge_beta share their collected states.
  std::vector<Group> groups;
  std::map<std::string, std::size_t> group_of;
  for (const auto& c : cells) {
    const std::string key = to_json(with_seed(with_ridge_beta(c.point->kind, 0.0), c.seed)).dump() + "|" +
                            std::to_string(c.seed);
    auto [it, fresh] = group_of.try_emplace(key, groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].cells.push_back(c.index);
  }

  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, groups.size()));
  const auto backend = jobs > 1 ? kernels::Backend::Serial : kernels::Backend::OpenMP;
  std::vector<ResultRow> rows;
  rows.reserve(cells.size());
  std::mutex collector;
  std::atomic<std::size_t> next{0};

  const auto work = [&] {
    if (jobs > 1) omp_set_num_threads(1);
    for (std::size_t g = next++; g < groups.size(); g = next++) {
      const auto& group = groups[g];
      const Cell& first = cells[group.cells.front()];
      std::vector<ResultRow> done;
      const auto t0 = Clock::now();
      std::optional<TrainingSession> session;
      std::string group_error;
      try {
        session.emplace(series, spec.dataset.split, with_seed(first.point->kind, first.seed), first.seed,
                        backend);
      } catch (const std::exception& e) {
        group_error = e.what();
      }
      const double shared_ms = elapsed_ms(t0) / static_cast<double>(group.cells.size());
      for (std::size_t ci : group.cells) {
        const Cell& c = cells[ci];
        ResultRow row = blank_row(c, dataset);
        const auto t1 = Clock::now();
        if (!group_error.empty()) {
          mark_failed(row, group_error);
        } else {
          try {
            const TrainedModel model = session->fit(ridge_beta_of(c.point->kind));
            PredictionResult closed = predict_closed_loop(model, series, spec.dataset.split);
            const PredictionResult open = predict_open_loop(model, series, spec.dataset.split);
            row.mse = closed.mse;
            row.diverged = closed.diverged;
            row.open_loop_mse = open.mse;
            row.train_mse = model.train_mse;
            row.prediction = std::move(closed);
          } catch (const std::exception& e) {
            mark_failed(row, e.what());
          }
        }
        row.wall_ms = shared_ms + elapsed_ms(t1);
        done.push_back(std::move(row));
      }
      std::lock_guard lock(collector);
      for (auto& r : done) rows.push_back(std::move(r));
    }
  };

  if (jobs == 1) {
    work();
  } else {
    std::vector<std::jthread> workers;
    for (std::size_t i = 0; i < jobs; ++i) workers.emplace_back(work);
  }

  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) { return a.cell < b.cell; });
  report.rows = std::move(rows);
  return report;
}

}  // namespace mglab
