#pragma once

#include <json.hpp>
#include <optional>
#include <string_view>
#include <variant>

#include "mglab/baselines.hpp"
#include "mglab/kernels.hpp"
#include "mglab/readout.hpp"
#include "mglab/series.hpp"
#include "mglab/tcrc.hpp"

namespace mglab {

using ModelKind = std::variant<EsnConfig, ElmConfig, NgrcConfig, TcrcConfig, TcrcElmConfig>;

/// "esn", "elm", "ngrc", "tcrc" or "tcrc_elm".
std::string_view kind_name(const ModelKind& kind);
double ridge_beta_of(const ModelKind& kind);
ModelKind with_ridge_beta(ModelKind kind, double beta);
/// Sets the weight seed of kinds that draw random matrices; others unchanged.
ModelKind with_seed(ModelKind kind, std::uint64_t seed);
bool is_recurrent(const ModelKind& kind);
/// No randomness reaches the result: NG-RC, and TCRC without state noise.
bool is_seed_invariant(const ModelKind& kind);
/// Samples per input window, newest first.
std::size_t window_depth(const ModelKind& kind);
std::size_t state_length(const ModelKind& kind);
/// Smallest series length that `train` accepts for this split.
std::size_t required_samples(const ModelKind& kind, const SplitSpec& split);

/// Every field written out; `kind` carries the name.
nlohmann::json to_json(const ModelKind& kind);
/// Missing fields take the struct defaults. Throws SpecInvalid.
ModelKind kind_from_json(const nlohmann::json& j);

struct TrainedModel {
  ModelKind kind;  // ridge_beta reflects the fitted value
  ReadoutWeights readout;
  NormStats norm_stats;
  std::optional<EsnModel> esn;  // reservoir state at the end of training
  Matrix w_in;                  // ELM and TCRC-ELM input weights
  std::uint64_t noise_seed = 0;
  double train_mse = 0.0;       // one-step residual on the training columns
};

/// Exports config, seeds, normalization, readout and any input weights.
/// ESN reservoir weights are regenerated from config and seed.
nlohmann::json to_json(const TrainedModel& model);

struct PredictionResult {
  SeriesFrame predicted;  // normalized units; shorter than target when diverged
  SeriesFrame target;
  double mse = 0.0;       // +inf when diverged
  bool diverged = false;
};

/// Teacher-forced state collection over the training window. Building the
/// Gram matrix once lets `fit` be called for several ridge strengths.
class TrainingSession {
 public:
  TrainingSession(const SeriesFrame& series, const SplitSpec& split, const ModelKind& kind,
                  std::uint64_t noise_seed = 0, kernels::Backend backend = kernels::Backend::OpenMP);

  TrainedModel fit(double ridge_beta) const;

  const StateMatrix& states() const noexcept { return states_; }
  const TargetMatrix& targets() const noexcept { return targets_; }

 private:
  ModelKind kind_;
  NormStats stats_;
  StateMatrix states_;
  TargetMatrix targets_;
  std::optional<EsnModel> esn_;
  Matrix w_in_;
  std::uint64_t noise_seed_;
  std::optional<RidgeProblem> problem_;
};

TrainedModel train(const SeriesFrame& series, const SplitSpec& split, const ModelKind& kind,
                   std::uint64_t noise_seed = 0, kernels::Backend backend = kernels::Backend::OpenMP);

/// Autoregressive rollout over the test window: inputs come from ground
/// truth only before the test start and from the model's own outputs
/// afterwards. A non-finite output stops the rollout and flags divergence.
PredictionResult predict_closed_loop(const TrainedModel& model, const SeriesFrame& series,
                                     const SplitSpec& split);

/// One-step-ahead prediction with ground-truth inputs throughout.
PredictionResult predict_open_loop(const TrainedModel& model, const SeriesFrame& series,
                                   const SplitSpec& split);

std::string prediction_csv(const PredictionResult& result);

}  // namespace mglab
