#include "mglab/series.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mglab/error.hpp"
#include "mglab/format.hpp"

namespace mglab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::ConfigMisaligned: return "ConfigMisaligned";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroSpectralRadius: return "ZeroSpectralRadius";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::TooManyLayers: return "TooManyLayers";
    case ErrorCode::InsufficientHistory: return "InsufficientHistory";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::SpecInvalid: return "SpecInvalid";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

SeriesFrame::SeriesFrame(std::vector<double> values, std::string tag)
    : values_(std::move(values)), tag_(std::move(tag)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::NonFiniteInput, "series sample " + std::to_string(i) + " is not finite");
    }
  }
}

SeriesFrame SeriesFrame::slice(std::size_t first, std::size_t count) const {
  if (first + count > values_.size()) {
    throw Error(ErrorCode::OutOfRange, "slice exceeds series length");
  }
  return SeriesFrame({values_.begin() + first, values_.begin() + first + count}, tag_);
}

NormStats zscore_fit(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::InsufficientData, "cannot normalize an empty series");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);
  if (!(sd >= 1e-12)) throw Error(ErrorCode::ConstantSeries, "standard deviation below 1e-12");
  return {mean, sd};
}

NormStats zscore_fit(const SeriesFrame& series) { return zscore_fit(series.values()); }

SeriesFrame zscore_apply(const SeriesFrame& series, const NormStats& stats) {
  std::vector<double> out(series.sample_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (series[i] - stats.mean) / stats.std;
  return SeriesFrame(std::move(out), series.tag());
}

SeriesFrame zscore_invert(const SeriesFrame& series, const NormStats& stats) {
  std::vector<double> out(series.sample_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = series[i] * stats.std + stats.mean;
  return SeriesFrame(std::move(out), series.tag());
}

double mse(std::span<const double> target, std::span<const double> predicted) {
  if (target.size() != predicted.size() || target.empty()) {
    throw Error(ErrorCode::LengthMismatch, "mse needs equal, nonempty lengths (" +
                                               std::to_string(target.size()) + " vs " +
                                               std::to_string(predicted.size()) + ")");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double d = target[i] - predicted[i];
    acc += d * d;
  }
  return acc / static_cast<double>(target.size());
}

double mse(const SeriesFrame& target, const SeriesFrame& predicted) {
  return mse(target.values(), predicted.values());
}

std::vector<double> delay_window(const SeriesFrame& series, std::size_t t, std::size_t depth) {
  if (depth == 0 || t >= series.sample_count() || t + 1 < depth) {
    throw Error(ErrorCode::OutOfRange, "window of depth " + std::to_string(depth) + " at t=" +
                                           std::to_string(t) + " exceeds available history");
  }
  std::vector<double> w(depth);
  for (std::size_t k = 0; k < depth; ++k) w[k] = series[t - k];
  return w;
}

SplitLayout SplitLayout::make(std::size_t n, const SplitSpec& split, std::size_t history) {
  if (split.train_len == 0 || split.test_len == 0) {
    throw Error(ErrorCode::InsufficientData, "train_len and test_len must be positive");
  }
  const std::size_t needed = history + split.init_len + split.train_len + 1 + split.test_len;
  if (n < needed) {
    throw Error(ErrorCode::InsufficientData, "series has " + std::to_string(n) + " samples, split needs " +
                                                 std::to_string(needed));
  }
  SplitLayout l;
  l.test_begin = n - split.test_len;
  l.test_len = split.test_len;
  l.train_len = split.train_len;
  l.first_input = l.test_begin - split.train_len - 1;
  l.washout_begin = l.first_input - split.init_len;
  return l;
}

std::string series_csv(const SeriesFrame& series) {
  std::string out = "step,value\n";
  for (std::size_t i = 0; i < series.sample_count(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(series[i]);
    out += '\n';
  }
  return out;
}

void write_series_csv(const SeriesFrame& series, const std::filesystem::path& path) {
  write_text_file(path, series_csv(series));
}

SeriesFrame read_series_csv(const std::filesystem::path& path, std::string tag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "step,value") {
    throw Error(ErrorCode::IoFailure, path.string() + ": expected header 'step,value'");
  }
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::IoFailure, path.string() + ": malformed row");
    values.push_back(parse_double(std::string_view(line).substr(comma + 1)));
  }
  return SeriesFrame(std::move(values), std::move(tag));
}

}  // namespace mglab
