#include "mglab/tcrc.hpp"

#include <cmath>

#include "mglab/error.hpp"
#include "mglab/kernels.hpp"
#include "mglab/rng.hpp"

namespace mglab {

void validate(const TcrcConfig& c) {
  if (c.delay < 2) throw Error(ErrorCode::SpecInvalid, "TCRC delay must be at least 2");
  if (c.layers == 0) throw Error(ErrorCode::SpecInvalid, "TCRC needs at least one layer");
  if (c.layers > c.delay) {
    throw Error(ErrorCode::TooManyLayers, std::to_string(c.layers) + " layers exceed delay " +
                                              std::to_string(c.delay));
  }
  if (!(c.noise_std >= 0.0) || !(c.ridge_beta >= 0.0)) {
    throw Error(ErrorCode::SpecInvalid, "noise_std and ridge_beta must be nonnegative");
  }
}

void validate(const TcrcElmConfig& c) {
  validate(c.base);
  if (c.expansion_factor == 0) throw Error(ErrorCode::SpecInvalid, "expansion_factor must be at least 1");
}

LayerTokens tcrc_tokens(std::span<const double> window, std::size_t layers) {
  if (window.size() < 2) throw Error(ErrorCode::WindowTooShort, "TCRC window needs at least 2 samples");
  const std::size_t delay = window.size() - 1;
  if (layers > delay) {
    throw Error(ErrorCode::TooManyLayers, std::to_string(layers) + " layers exceed delay " +
                                              std::to_string(delay));
  }
  LayerTokens tokens;
  tokens.per_layer.reserve(layers);
  std::vector<double> prev(window.begin(), window.end());
  for (std::size_t j = 0; j < layers; ++j) {
    std::vector<double> cur(prev.size() - 1);
    for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = prev[i] * prev[i + 1];
    tokens.per_layer.push_back(cur);
    prev = std::move(cur);
  }
  return tokens;
}

std::size_t tcrc_state_length(const TcrcConfig& c) {
  return c.delay + c.layers * c.delay - c.layers * (c.layers - 1) / 2 + c.zero_pad;
}

namespace {

// Writes the preactivation into out[0, N_r) without allocating; `scratch`
// must hold delay + 1 values.
void write_preactivation(std::span<const double> window, const TcrcConfig& c, double* scratch,
                         Eigen::Ref<Vector> out) {
  Eigen::Index p = 0;
  for (std::size_t i = 0; i < c.delay; ++i) out[p++] = window[i];
  for (std::size_t i = 0; i <= c.delay; ++i) scratch[i] = window[i];
  std::size_t width = c.delay + 1;
  for (std::size_t j = 0; j < c.layers; ++j) {
    for (std::size_t i = 0; i + 1 < width; ++i) {
      scratch[i] = scratch[i] * scratch[i + 1];
      out[p++] = scratch[i];
    }
    --width;
  }
  for (std::size_t i = 0; i < c.zero_pad; ++i) out[p++] = 0.0;
}

void require_window(std::span<const double> window, std::size_t delay) {
  if (window.size() < delay + 1) {
    throw Error(ErrorCode::WindowTooShort, "window of " + std::to_string(window.size()) +
                                               " samples, delay " + std::to_string(delay) + " needs " +
                                               std::to_string(delay + 1));
  }
}

}  // namespace

Vector tcrc_preactivation(std::span<const double> window, const TcrcConfig& config) {
  validate(config);
  require_window(window, config.delay);
  std::vector<double> scratch(config.delay + 1);
  Vector z(static_cast<Eigen::Index>(tcrc_state_length(config)));
  write_preactivation(window, config, scratch.data(), z);
  return z;
}

Vector tcrc_state(std::span<const double> window, const TcrcConfig& config) {
  Vector s = tcrc_preactivation(window, config);
  const auto active = static_cast<Eigen::Index>(tcrc_state_length(config) - config.zero_pad);
  s.head(active) = s.head(active).array().tanh();
  return s;
}

StateMatrix tcrc_train_states(const SeriesFrame& series, const SplitSpec& split, const TcrcConfig& config,
                              std::uint64_t noise_seed) {
  validate(config);
  const auto layout = SplitLayout::make(series.sample_count(), split, config.delay);
  if (layout.first_input < config.delay) {
    throw Error(ErrorCode::InsufficientHistory, "series lacks the delay history before training");
  }
  const auto n = static_cast<Eigen::Index>(tcrc_state_length(config));
  const auto active = n - static_cast<Eigen::Index>(config.zero_pad);
  Matrix states(n, static_cast<Eigen::Index>(layout.train_len));
  const kernels::WindowMap map = [&config, active](std::span<const double> w, Eigen::Ref<Vector> out) {
    thread_local std::vector<double> buf;
    buf.resize(config.delay + 1);
    write_preactivation(w, config, buf.data(), out);
    out.head(active) = out.head(active).array().tanh();
  };
  kernels::collect_windowed(kernels::Backend::OpenMP, series.values(), layout.first_input, config.delay + 1,
                            map, states);
  if (config.noise_std > 0.0) {
    kernels::add_state_noise(kernels::Backend::OpenMP, states, config.noise_std, noise_seed);
  }
  return StateMatrix(std::move(states));
}

Matrix tcrc_elm_init(const TcrcElmConfig& config) {
  validate(config);
  const std::size_t cols = tcrc_state_length(config.base);
  const std::size_t rows = config.expansion_factor * cols;
  const CounterRng rng(config.seed, "tcrc_elm/w_in");
  Matrix w(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rng.symmetric(i * cols + j, 0.5);
  return w;
}

std::size_t tcrc_elm_state_length(const TcrcElmConfig& config) {
  const std::size_t base = tcrc_state_length(config.base);
  return config.expansion_factor * base + (config.include_base_state ? base : 0);
}

Vector tcrc_elm_state(std::span<const double> window, const TcrcElmConfig& config, const Matrix& w_in) {
  validate(config);
  const auto n = static_cast<Eigen::Index>(tcrc_state_length(config.base));
  if (w_in.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "TCRC-ELM input weights have " + std::to_string(w_in.cols()) +
                                                  " columns, TCRC state has " + std::to_string(n));
  }
  const Vector z = tcrc_preactivation(window, config.base);
  const Eigen::Index expanded = w_in.rows();
  Vector out(expanded + (config.include_base_state ? n : 0));
  out.head(expanded) = (w_in * z).array().tanh();
  if (config.include_base_state) out.tail(n) = tcrc_state(window, config.base);
  return out;
}

}  // namespace mglab
