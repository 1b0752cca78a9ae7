#include <cmath>
#include <limits>
#include <map>

#include "mglab/error.hpp"
#include "mglab/format.hpp"
#include "mglab/harness.hpp"

namespace mglab {

namespace {

constexpr const char* kResultsHeader =
    "cell,point,kind,seed,seed_invariant,diverged,mse,open_loop_mse,train_mse,error,dataset,config";

// JSON has no infinity; non-finite values are written as strings.
nlohmann::json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

struct PointAgg {
  std::string kind;
  nlohmann::json config;
  std::size_t runs = 0;
  std::size_t diverged = 0;
  std::size_t failed = 0;
  bool seed_invariant = false;
  double sum = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  double mean() const { return runs ? sum / static_cast<double>(runs) : std::numeric_limits<double>::infinity(); }
};

std::map<std::size_t, PointAgg> aggregate(const ExperimentReport& report) {
  std::map<std::size_t, PointAgg> points;
  for (const auto& r : report.rows) {
    auto& p = points[r.point];
    if (p.runs == 0) {
      p.kind = r.kind;
      p.config = nlohmann::json::parse(r.config);
      p.config.erase("seed");
      p.seed_invariant = r.seed_invariant;
    }
    ++p.runs;
    if (r.diverged) ++p.diverged;
    if (!r.error.empty()) ++p.failed;
    const double v = (r.diverged || !r.error.empty()) ? std::numeric_limits<double>::infinity() : r.mse;
    p.sum += v;
    p.min = std::min(p.min, v);
    p.max = std::max(p.max, v);
  }
  return points;
}

std::map<std::string, std::size_t> best_points(const std::map<std::size_t, PointAgg>& points) {
  std::map<std::string, std::size_t> best;
  for (const auto& [idx, p] : points) {
    auto it = best.find(p.kind);
    if (it == best.end() || p.mean() < points.at(it->second).mean()) best[p.kind] = idx;
  }
  return best;
}

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw Error(ErrorCode::IoFailure, "expected true/false, got '" + s + "'");
}

std::uint64_t parse_u64(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::IoFailure, "expected an unsigned integer, got '" + s + "'");
  }
}

}  // namespace

nlohmann::json summarize(const ExperimentReport& report) {
  const auto points = aggregate(report);
  const auto best = best_points(points);

  nlohmann::json j;
  j["baseline"] = report.baseline;
  j["row_count"] = report.rows.size();
  j["point_count"] = points.size();
  j["points"] = nlohmann::json::array();
  for (const auto& [idx, p] : points) {
    j["points"].push_back({{"point", idx},
                           {"kind", p.kind},
                           {"config", p.config},
                           {"runs", p.runs},
                           {"diverged", p.diverged},
                           {"failed", p.failed},
                           {"seed_invariant", p.seed_invariant},
                           {"mean_mse", num(p.mean())},
                           {"min_mse", num(p.min)},
                           {"max_mse", num(p.max)}});
  }
  j["best"] = nlohmann::json::object();
  for (const auto& [kind, idx] : best) {
    const auto& p = points.at(idx);
    j["best"][kind] = {{"point", idx}, {"config", p.config}, {"mean_mse", num(p.mean())}};
  }
  j["relative_improvement"] = nlohmann::json::object();
  if (auto b = best.find(report.baseline); b != best.end()) {
    const double base = points.at(b->second).mean();
    for (const auto& [kind, idx] : best) {
      if (kind == report.baseline) continue;
      const double cand = points.at(idx).mean();
      if (std::isfinite(base) && base > 0.0 && std::isfinite(cand)) {
        const double rel = (cand - base) / base;
        j["relative_improvement"][kind] = {{"fraction", rel}, {"percent", 100.0 * rel}};
      } else {
        j["relative_improvement"][kind] = nullptr;
      }
    }
  }
  return j;
}

std::string summary_text(const ExperimentReport& report) { return summarize(report).dump(2) + "\n"; }

std::string results_csv(const ExperimentReport& report) {
  std::string out = kResultsHeader;
  out += '\n';
  for (const auto& r : report.rows) {
    out += std::to_string(r.cell) + ',' + std::to_string(r.point) + ',' + csv_escape(r.kind) + ',' +
           std::to_string(r.seed) + ',' + (r.seed_invariant ? "true" : "false") + ',' +
           (r.diverged ? "true" : "false") + ',' + format_double(r.mse) + ',' + format_double(r.open_loop_mse) +
           ',' + format_double(r.train_mse) + ',' + csv_escape(r.error) + ',' + csv_escape(r.dataset) + ',' +
           csv_escape(r.config) + '\n';
  }
  return out;
}

ExperimentReport parse_results_csv(std::string_view text, std::string baseline) {
  const auto records = csv_parse(text);
  if (records.empty()) throw Error(ErrorCode::IoFailure, "results.csv is empty");
  std::string header;
  for (std::size_t i = 0; i < records[0].size(); ++i) header += (i ? "," : "") + records[0][i];
  if (header != kResultsHeader) throw Error(ErrorCode::IoFailure, "unexpected results.csv header");
  ExperimentReport report;
  report.baseline = std::move(baseline);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i];
    if (f.size() != 12) throw Error(ErrorCode::IoFailure, "results.csv row " + std::to_string(i) + " has " +
                                                              std::to_string(f.size()) + " fields");
    ResultRow r;
    r.cell = parse_u64(f[0]);
    r.point = parse_u64(f[1]);
    r.kind = f[2];
    r.seed = parse_u64(f[3]);
    r.seed_invariant = parse_bool(f[4]);
    r.diverged = parse_bool(f[5]);
    r.mse = parse_double(f[6]);
    r.open_loop_mse = parse_double(f[7]);
    r.train_mse = parse_double(f[8]);
    r.error = f[9];
    r.dataset = f[10];
    r.config = f[11];
    report.rows.push_back(std::move(r));
  }
  return report;
}

void emit_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());

  write_text_file(dir / "results.csv", results_csv(report));
  write_text_file(dir / "summary.json", summary_text(report));

  std::string timings = "cell,wall_ms\n";
  for (const auto& r : report.rows) timings += std::to_string(r.cell) + ',' + format_double(r.wall_ms) + '\n';
  write_text_file(dir / "timings.csv", timings);

  const auto points = aggregate(report);
  for (const auto& [kind, idx] : best_points(points)) {
    for (const auto& r : report.rows) {
      if (r.point == idx && r.prediction) {
        write_text_file(dir / ("predictions_" + kind + ".csv"), prediction_csv(*r.prediction));
        break;
      }
    }
  }
}

}  // namespace mglab
