#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mglab {

/// A univariate sampled time series. Values are validated finite on
/// construction and never change afterwards.
class SeriesFrame {
 public:
  SeriesFrame() = default;
  explicit SeriesFrame(std::vector<double> values, std::string tag = {});

  std::span<const double> values() const noexcept { return values_; }
  std::size_t sample_count() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  const std::string& tag() const noexcept { return tag_; }

  /// Copy of samples [first, first + count).
  SeriesFrame slice(std::size_t first, std::size_t count) const;

  bool operator==(const SeriesFrame&) const = default;

 private:
  std::vector<double> values_;
  std::string tag_;
};

struct NormStats {
  double mean = 0.0;
  double std = 1.0;
};

/// Lengths of the washout, training and held-out prediction phases.
struct SplitSpec {
  std::size_t init_len = 0;
  std::size_t train_len = 0;
  std::size_t test_len = 0;

  std::size_t total() const noexcept { return init_len + train_len + test_len; }
};

/// Population mean and standard deviation. Throws ConstantSeries when the
/// deviation falls below 1e-12.
NormStats zscore_fit(const SeriesFrame& series);
NormStats zscore_fit(std::span<const double> values);

SeriesFrame zscore_apply(const SeriesFrame& series, const NormStats& stats);
SeriesFrame zscore_invert(const SeriesFrame& series, const NormStats& stats);

double mse(const SeriesFrame& target, const SeriesFrame& predicted);
double mse(std::span<const double> target, std::span<const double> predicted);

/// [x(t), x(t-1), ..., x(t-depth+1)], newest first.
std::vector<double> delay_window(const SeriesFrame& series, std::size_t t, std::size_t depth);

/// `step,value` CSV with LF line endings; values printed round-trip exact.
void write_series_csv(const SeriesFrame& series, const std::filesystem::path& path);
std::string series_csv(const SeriesFrame& series);
SeriesFrame read_series_csv(const std::filesystem::path& path, std::string tag = {});

}  // namespace mglab

namespace mglab {

/// Where each phase of a split sits inside a series of n samples. The split
/// is aligned to the end: the last test_len samples are held out, the
/// train_len samples before them are the training targets, and each target
/// x(t+1) is paired with input step t. Washout inputs precede the first
/// training input; anything earlier is history for delayed windows.
struct SplitLayout {
  std::size_t washout_begin = 0;  // first washout input step
  std::size_t first_input = 0;    // input step of the first training column
  std::size_t train_len = 0;
  std::size_t test_begin = 0;     // index of the first held-out sample
  std::size_t test_len = 0;

  /// Throws InsufficientData unless washout and `history` earlier samples fit.
  static SplitLayout make(std::size_t n_samples, const SplitSpec& split, std::size_t history = 0);
};

}  // namespace mglab
