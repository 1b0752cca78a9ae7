#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <span>

#include "mglab/readout.hpp"

namespace mglab {

inline constexpr double kDefaultWeightScale = 0.5;

struct EsnConfig {
  std::size_t reservoir_size = 1000;
  double spectral_radius = 0.9;
  double weight_scale = kDefaultWeightScale;
  double connectivity = 0.1;
  double ridge_beta = 1e-6;
  std::size_t washout = 100;
  std::size_t input_dim = 1;
  std::uint64_t seed = 0;

  bool operator==(const EsnConfig&) const = default;
};

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Random input and recurrent weights plus the running reservoir state.
struct EsnModel {
  Matrix w_in;          // N_r x N_in
  SparseRowMatrix w_r;  // N_r x N_r, spectral radius == config.spectral_radius
  EsnConfig config;
  Vector state;         // N_r
};

struct ElmConfig {
  std::size_t hidden_size = 1000;
  double weight_scale = kDefaultWeightScale;
  double ridge_beta = 1e-6;
  std::size_t input_dim = 1;
  std::uint64_t seed = 0;

  bool operator==(const ElmConfig&) const = default;
};

struct NgrcConfig {
  std::size_t delay = 2;
  double ridge_beta = 1e-6;

  bool operator==(const NgrcConfig&) const = default;
};

/// Largest eigenvalue magnitude, from the full real Schur spectrum.
double spectral_radius(const Matrix& m);

/// Uniform (-scale, scale) input weights drawn from the seed's "w_in"
/// stream. Entry (i, j) uses counter i * cols + j, so growing the row
/// count leaves existing rows untouched.
Matrix draw_input_weights(std::uint64_t seed, std::size_t rows, std::size_t cols, double scale);

/// Bernoulli(connectivity) mask with uniform (-scale, scale) nonzeros,
/// before spectral scaling.
SparseRowMatrix draw_reservoir_weights(const EsnConfig& config);

/// Throws ZeroSpectralRadius when the raw draw has radius zero but a
/// positive radius was requested.
EsnModel esn_init(const EsnConfig& config);

/// state = tanh(W_in input + W_r state); returns the new state.
const Vector& esn_step(EsnModel& model, std::span<const double> input);

Matrix elm_init(const ElmConfig& config);
Vector elm_map(const ElmConfig& config, const Matrix& w_in, std::span<const double> input);

std::size_t ngrc_feature_length(std::size_t delay);

/// [linear ; squares ; strict upper cross terms], window newest first with
/// length delay + 1. Throws WindowTooShort below length 2.
Vector ngrc_features(std::span<const double> window);
Vector ngrc_state(std::span<const double> window);

}  // namespace mglab
