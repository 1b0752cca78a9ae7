#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mglab/readout.hpp"
#include "mglab/series.hpp"

namespace mglab {

struct TcrcConfig {
  std::size_t delay = 10;  // number of adjacent pairs in the first layer
  std::size_t layers = 1;
  double ridge_beta = 1e-8;
  std::size_t zero_pad = 0;
  double noise_std = 0.0;  // training-time state noise

  bool operator==(const TcrcConfig&) const = default;
};

struct TcrcElmConfig {
  TcrcConfig base;
  std::size_t expansion_factor = 1;
  std::uint64_t seed = 0;
  bool include_base_state = false;

  bool operator==(const TcrcElmConfig&) const = default;
};

/// Layer j (1-based) holds delay - j + 1 tokens.
struct LayerTokens {
  std::vector<std::vector<double>> per_layer;
};

/// Throws SpecInvalid when delay < 2, layers == 0 or layers > delay.
void validate(const TcrcConfig& config);
void validate(const TcrcElmConfig& config);

/// Layer 1: token i = w[i] * w[i+1]. Layer j: token i = prev[i] * prev[i+1].
/// The window is newest first; its length minus one is the delay.
LayerTokens tcrc_tokens(std::span<const double> window, std::size_t layers);

/// delay + sum_j (delay - j + 1) + zero_pad
std::size_t tcrc_state_length(const TcrcConfig& config);

/// [x(t), ..., x(t-delay+1) ; layer 1 ; ... ; layer L ; zero_pad zeros],
/// before activation. Only the first delay + 1 window entries are read.
Vector tcrc_preactivation(std::span<const double> window, const TcrcConfig& config);

/// tanh of the preactivation; pad entries stay exactly zero.
Vector tcrc_state(std::span<const double> window, const TcrcConfig& config);

/// State columns for every training input step of a normalized series (see
/// SplitLayout), plus training noise when noise_std > 0.
StateMatrix tcrc_train_states(const SeriesFrame& series, const SplitSpec& split, const TcrcConfig& config,
                              std::uint64_t noise_seed);

/// Uniform (-1/2, 1/2), shape (n * N_r) x N_r.
Matrix tcrc_elm_init(const TcrcElmConfig& config);

std::size_t tcrc_elm_state_length(const TcrcElmConfig& config);

/// tanh(W_in z) for the padded preactivation z, optionally followed by the
/// plain TCRC state.
Vector tcrc_elm_state(std::span<const double> window, const TcrcElmConfig& config, const Matrix& w_in);

}  // namespace mglab
