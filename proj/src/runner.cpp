#include "mglab/runner.hpp"

#include <cmath>
#include <limits>

#include "mglab/error.hpp"
#include "mglab/format.hpp"

namespace mglab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

template <class T>
void read_field(const nlohmann::json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SpecInvalid, std::string("field '") + key + "': " + e.what());
  }
}

nlohmann::json tcrc_json(const TcrcConfig& c) {
  return {{"delay", c.delay}, {"layers", c.layers}, {"ridge_beta", c.ridge_beta},
          {"zero_pad", c.zero_pad}, {"noise_std", c.noise_std}};
}

void read_tcrc(const nlohmann::json& j, TcrcConfig& c) {
  read_field(j, "delay", c.delay);
  read_field(j, "layers", c.layers);
  read_field(j, "ridge_beta", c.ridge_beta);
  read_field(j, "zero_pad", c.zero_pad);
  read_field(j, "noise_std", c.noise_std);
}

// Recurrent kinds wash out for their configured number of steps; feed-forward
// kinds need none.
SplitSpec effective_split(const ModelKind& kind, SplitSpec split) {
  const auto* esn = std::get_if<EsnConfig>(&kind);
  split.init_len = esn ? esn->washout : 0;
  return split;
}

/// Maps a newest-first window to the model's state. Holds its own copy of
/// the reservoir for recurrent kinds.
class StateEvaluator {
 public:
  StateEvaluator(const ModelKind& kind, const Matrix& w_in, const std::optional<EsnModel>& esn)
      : kind_(kind), w_in_(w_in), esn_(esn) {}

  Vector operator()(std::span<const double> window) {
    return std::visit(
        overloaded{
            [&](const EsnConfig&) -> Vector { return esn_step(*esn_, window); },
            [&](const ElmConfig& c) -> Vector { return elm_map(c, w_in_, window); },
            [&](const NgrcConfig&) -> Vector { return ngrc_state(window); },
            [&](const TcrcConfig& c) -> Vector { return tcrc_state(window, c); },
            [&](const TcrcElmConfig& c) -> Vector { return tcrc_elm_state(window, c, w_in_); },
        },
        kind_);
  }

 private:
  const ModelKind& kind_;
  const Matrix& w_in_;
  std::optional<EsnModel> esn_;
};

}  // namespace

std::string_view kind_name(const ModelKind& kind) {
  return std::visit(overloaded{
                        [](const EsnConfig&) { return std::string_view("esn"); },
                        [](const ElmConfig&) { return std::string_view("elm"); },
                        [](const NgrcConfig&) { return std::string_view("ngrc"); },
                        [](const TcrcConfig&) { return std::string_view("tcrc"); },
                        [](const TcrcElmConfig&) { return std::string_view("tcrc_elm"); },
                    },
                    kind);
}

double ridge_beta_of(const ModelKind& kind) {
  return std::visit(overloaded{
                        [](const TcrcElmConfig& c) { return c.base.ridge_beta; },
                        [](const auto& c) { return c.ridge_beta; },
                    },
                    kind);
}

ModelKind with_ridge_beta(ModelKind kind, double beta) {
  std::visit(overloaded{
                 [&](TcrcElmConfig& c) { c.base.ridge_beta = beta; },
                 [&](auto& c) { c.ridge_beta = beta; },
             },
             kind);
  return kind;
}

ModelKind with_seed(ModelKind kind, std::uint64_t seed) {
  std::visit(overloaded{
                 [&](EsnConfig& c) { c.seed = seed; },
                 [&](ElmConfig& c) { c.seed = seed; },
                 [&](TcrcElmConfig& c) { c.seed = seed; },
                 [](auto&) {},
             },
             kind);
  return kind;
}

bool is_recurrent(const ModelKind& kind) { return std::holds_alternative<EsnConfig>(kind); }

bool is_seed_invariant(const ModelKind& kind) {
  if (std::holds_alternative<NgrcConfig>(kind)) return true;
  if (const auto* t = std::get_if<TcrcConfig>(&kind)) return t->noise_std == 0.0;
  return false;
}

std::size_t window_depth(const ModelKind& kind) {
  return std::visit(overloaded{
                        [](const EsnConfig& c) { return c.input_dim; },
                        [](const ElmConfig& c) { return c.input_dim; },
                        [](const NgrcConfig& c) { return c.delay + 1; },
                        [](const TcrcConfig& c) { return c.delay + 1; },
                        [](const TcrcElmConfig& c) { return c.base.delay + 1; },
                    },
                    kind);
}

std::size_t state_length(const ModelKind& kind) {
  return std::visit(overloaded{
                        [](const EsnConfig& c) { return c.reservoir_size; },
                        [](const ElmConfig& c) { return c.hidden_size; },
                        [](const NgrcConfig& c) { return ngrc_feature_length(c.delay); },
                        [](const TcrcConfig& c) { return tcrc_state_length(c); },
                        [](const TcrcElmConfig& c) { return tcrc_elm_state_length(c); },
                    },
                    kind);
}

std::size_t required_samples(const ModelKind& kind, const SplitSpec& split) {
  const SplitSpec s = effective_split(kind, split);
  return window_depth(kind) - 1 + s.init_len + s.train_len + 1 + s.test_len;
}

nlohmann::json to_json(const ModelKind& kind) {
  nlohmann::json j = std::visit(
      overloaded{
          [](const EsnConfig& c) -> nlohmann::json {
            return {{"reservoir_size", c.reservoir_size}, {"spectral_radius", c.spectral_radius},
                    {"weight_scale", c.weight_scale},     {"connectivity", c.connectivity},
                    {"ridge_beta", c.ridge_beta},         {"washout", c.washout},
                    {"input_dim", c.input_dim},           {"seed", c.seed}};
          },
          [](const ElmConfig& c) -> nlohmann::json {
            return {{"hidden_size", c.hidden_size}, {"weight_scale", c.weight_scale},
                    {"ridge_beta", c.ridge_beta},   {"input_dim", c.input_dim},
                    {"seed", c.seed}};
          },
          [](const NgrcConfig& c) -> nlohmann::json {
            return {{"delay", c.delay}, {"ridge_beta", c.ridge_beta}};
          },
          [](const TcrcConfig& c) -> nlohmann::json { return tcrc_json(c); },
          [](const TcrcElmConfig& c) -> nlohmann::json {
            nlohmann::json j = tcrc_json(c.base);
            j["expansion_factor"] = c.expansion_factor;
            j["seed"] = c.seed;
            j["include_base_state"] = c.include_base_state;
            return j;
          },
      },
      kind);
  j["kind"] = kind_name(kind);
  return j;
}

ModelKind kind_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw Error(ErrorCode::SpecInvalid, "model entry needs a string 'kind'");
  }
  const auto name = j.at("kind").get<std::string>();
  if (name == "esn") {
    EsnConfig c;
    read_field(j, "reservoir_size", c.reservoir_size);
    read_field(j, "spectral_radius", c.spectral_radius);
    read_field(j, "weight_scale", c.weight_scale);
    read_field(j, "connectivity", c.connectivity);
    read_field(j, "ridge_beta", c.ridge_beta);
    read_field(j, "washout", c.washout);
    read_field(j, "input_dim", c.input_dim);
    read_field(j, "seed", c.seed);
    return c;
  }
  if (name == "elm") {
    ElmConfig c;
    read_field(j, "hidden_size", c.hidden_size);
    read_field(j, "weight_scale", c.weight_scale);
    read_field(j, "ridge_beta", c.ridge_beta);
    read_field(j, "input_dim", c.input_dim);
    read_field(j, "seed", c.seed);
    return c;
  }
  if (name == "ngrc") {
    NgrcConfig c;
    read_field(j, "delay", c.delay);
    read_field(j, "ridge_beta", c.ridge_beta);
    return c;
  }
  if (name == "tcrc") {
    TcrcConfig c;
    read_tcrc(j, c);
    return c;
  }
  if (name == "tcrc_elm") {
    TcrcElmConfig c;
    read_tcrc(j, c.base);
    read_field(j, "expansion_factor", c.expansion_factor);
    read_field(j, "seed", c.seed);
    read_field(j, "include_base_state", c.include_base_state);
    return c;
  }
  throw Error(ErrorCode::SpecInvalid, "unknown model kind '" + name + "'");
}

nlohmann::json to_json(const TrainedModel& model) {
  nlohmann::json j;
  j["config"] = to_json(model.kind);
  j["noise_seed"] = model.noise_seed;
  j["norm_stats"] = {{"mean", model.norm_stats.mean}, {"std", model.norm_stats.std}};
  j["readout"] = to_json(model.readout);
  j["train_mse"] = model.train_mse;
  if (model.w_in.size() > 0) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(model.w_in.size()));
    for (Eigen::Index r = 0; r < model.w_in.rows(); ++r)
      for (Eigen::Index c = 0; c < model.w_in.cols(); ++c) flat.push_back(model.w_in(r, c));
    j["w_in"] = {{"rows", model.w_in.rows()}, {"cols", model.w_in.cols()}, {"weights", flat}};
  }
  return j;
}

TrainingSession::TrainingSession(const SeriesFrame& series, const SplitSpec& split, const ModelKind& kind,
                                 std::uint64_t noise_seed, kernels::Backend backend)
    : kind_(kind), noise_seed_(noise_seed) {
  std::visit(overloaded{
                 [](const EsnConfig&) {},
                 [](const TcrcConfig& c) { validate(c); },
                 [](const TcrcElmConfig& c) { validate(c); },
                 [](const NgrcConfig& c) {
                   if (c.delay < 1) throw Error(ErrorCode::SpecInvalid, "NG-RC delay must be at least 1");
                 },
                 [](const ElmConfig&) {},
             },
             kind_);

  const std::size_t depth = window_depth(kind_);
  const SplitSpec eff = effective_split(kind_, split);
  const auto layout = SplitLayout::make(series.sample_count(), eff, depth - 1);

  stats_ = zscore_fit(series.values().first(layout.test_begin));
  const SeriesFrame norm = zscore_apply(series.slice(0, layout.test_begin), stats_);
  const std::span<const double> x = norm.values();

  const auto cols = static_cast<Eigen::Index>(layout.train_len);
  Matrix y(1, cols);
  for (Eigen::Index c = 0; c < cols; ++c) y(0, c) = x[layout.first_input + 1 + static_cast<std::size_t>(c)];
  targets_ = TargetMatrix(std::move(y));

  Matrix s(static_cast<Eigen::Index>(state_length(kind_)), cols);
  if (const auto* ec = std::get_if<EsnConfig>(&kind_)) {
    esn_ = esn_init(*ec);
    std::vector<double> window(depth);
    for (std::size_t t = layout.washout_begin; t < layout.first_input + layout.train_len; ++t) {
      for (std::size_t k = 0; k < depth; ++k) window[k] = x[t - k];
      const Vector& st = esn_step(*esn_, window);
      if (t >= layout.first_input) s.col(static_cast<Eigen::Index>(t - layout.first_input)) = st;
    }
  } else {
    if (const auto* c = std::get_if<ElmConfig>(&kind_)) w_in_ = elm_init(*c);
    if (const auto* c = std::get_if<TcrcElmConfig>(&kind_)) w_in_ = tcrc_elm_init(*c);
    const ModelKind& k = kind_;
    const Matrix& w = w_in_;
    const kernels::WindowMap map = [&k, &w](std::span<const double> window, Eigen::Ref<Vector> out) {
      StateEvaluator eval(k, w, std::nullopt);
      out = eval(window);
    };
    kernels::collect_windowed(backend, x, layout.first_input, depth, map, s);

    double noise = 0.0;
    if (const auto* c = std::get_if<TcrcConfig>(&kind_)) noise = c->noise_std;
    if (const auto* c = std::get_if<TcrcElmConfig>(&kind_)) noise = c->base.noise_std;
    if (noise > 0.0) kernels::add_state_noise(backend, s, noise, noise_seed_);
  }
  states_ = StateMatrix(std::move(s));
  problem_.emplace(states_, targets_);
}

TrainedModel TrainingSession::fit(double ridge_beta) const {
  TrainedModel m;
  m.kind = with_ridge_beta(kind_, ridge_beta);
  m.readout = problem_->solve(ridge_beta);
  m.norm_stats = stats_;
  m.esn = esn_;
  m.w_in = w_in_;
  m.noise_seed = noise_seed_;
  const Matrix resid = m.readout.weights * states_.matrix() - targets_.matrix();
  m.train_mse = resid.squaredNorm() / static_cast<double>(resid.size());
  return m;
}

TrainedModel train(const SeriesFrame& series, const SplitSpec& split, const ModelKind& kind,
                   std::uint64_t noise_seed, kernels::Backend backend) {
  return TrainingSession(series, split, kind, noise_seed, backend).fit(ridge_beta_of(kind));
}

namespace {

PredictionResult rollout(const TrainedModel& model, const SeriesFrame& series, const SplitSpec& split,
                         bool closed_loop) {
  const std::size_t depth = window_depth(model.kind);
  const auto layout = SplitLayout::make(series.sample_count(), effective_split(model.kind, split), depth - 1);
  const SeriesFrame norm = zscore_apply(series, model.norm_stats);
  const std::span<const double> truth = norm.values();

  // Inputs visible to the model: ground truth before the test start, then
  // either the model's outputs (closed loop) or ground truth (open loop).
  std::vector<double> inputs(truth.begin(), truth.begin() + static_cast<std::ptrdiff_t>(layout.test_begin));
  inputs.reserve(layout.test_begin + layout.test_len);

  StateEvaluator eval(model.kind, model.w_in, model.esn);
  std::vector<double> window(depth);
  std::vector<double> predicted;
  predicted.reserve(layout.test_len);
  bool diverged = false;
  for (std::size_t k = 0; k < layout.test_len; ++k) {
    const std::size_t t = layout.test_begin - 1 + k;
    for (std::size_t i = 0; i < depth; ++i) window[i] = inputs[t - i];
    const Vector state = eval(window);
    const double y = apply_readout(model.readout, state)[0];
    if (!std::isfinite(y)) {
      diverged = true;
      break;
    }
    predicted.push_back(y);
    inputs.push_back(closed_loop ? y : truth[t + 1]);
  }

  PredictionResult r;
  r.target = norm.slice(layout.test_begin, layout.test_len);
  r.predicted = SeriesFrame(std::move(predicted), series.tag());
  r.diverged = diverged;
  r.mse = diverged ? std::numeric_limits<double>::infinity() : mse(r.target, r.predicted);
  return r;
}

}  // namespace

PredictionResult predict_closed_loop(const TrainedModel& model, const SeriesFrame& series,
                                     const SplitSpec& split) {
  return rollout(model, series, split, true);
}

PredictionResult predict_open_loop(const TrainedModel& model, const SeriesFrame& series,
                                   const SplitSpec& split) {
  return rollout(model, series, split, false);
}

std::string prediction_csv(const PredictionResult& result) {
  std::string out = "step,target,predicted\n";
  for (std::size_t i = 0; i < result.target.sample_count(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(result.target[i]);
    out += ',';
    out += i < result.predicted.sample_count() ? format_double(result.predicted[i]) : std::string();
    out += '\n';
  }
  return out;
}

}  // namespace mglab
