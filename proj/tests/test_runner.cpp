#include <algorithm>
#include <cmath>
#include <vector>

#include "mglab/mackey_glass.hpp"
#include "mglab/runner.hpp"
#include "test_util.hpp"

using namespace mglab;

namespace {

const SplitSpec kSplit{100, 2000, 286};

SeriesFrame series_for(double tau, const ModelKind& kind, const SplitSpec& split = kSplit) {
  return make_benchmark(tau, split, required_samples(kind, split) - split.total());
}

EsnConfig esn(std::size_t n, double rho, std::uint64_t seed) {
  EsnConfig c;
  c.reservoir_size = n;
  c.spectral_radius = rho;
  c.seed = seed;
  return c;
}

SeriesFrame zero_test_segment(const SeriesFrame& s, std::size_t test_len) {
  std::vector<double> v(s.values().begin(), s.values().end());
  for (std::size_t i = v.size() - test_len; i < v.size(); ++i) v[i] = 0.0;
  return SeriesFrame(std::move(v), s.tag());
}

}  // namespace

TEST_SUITE("runner") {

TEST_CASE("kind helpers") {
  ModelKind t = TcrcConfig{10, 3, 1e-8, 5, 0.0};
  CHECK(kind_name(t) == "tcrc");
  CHECK(window_depth(t) == 11);
  CHECK(state_length(t) == 42);
  CHECK(is_seed_invariant(t));
  CHECK_FALSE(is_seed_invariant(TcrcConfig{10, 1, 1e-8, 0, 1e-3}));
  CHECK(is_seed_invariant(NgrcConfig{}));
  CHECK_FALSE(is_seed_invariant(EsnConfig{}));
  CHECK(is_recurrent(EsnConfig{}));
  CHECK_FALSE(is_recurrent(ElmConfig{}));
  CHECK(ridge_beta_of(with_ridge_beta(TcrcElmConfig{}, 0.25)) == 0.25);
  CHECK(std::get<EsnConfig>(with_seed(EsnConfig{}, 9)).seed == 9);
  CHECK(std::get<TcrcConfig>(with_seed(t, 9)) == std::get<TcrcConfig>(t));
  CHECK(required_samples(EsnConfig{}, kSplit) == 2387);
  CHECK(required_samples(TcrcConfig{10, 1}, kSplit) == 10 + 2000 + 1 + 286);
}

TEST_CASE("kind json round trip") {
  const std::vector<ModelKind> kinds{esn(50, 1.2, 3), ElmConfig{77, 0.4, 1e-4, 1, 5}, NgrcConfig{4, 1e-3},
                                     TcrcConfig{12, 2, 0.0, 3, 1e-4},
                                     TcrcElmConfig{TcrcConfig{8, 1, 1e-6, 0, 0.0}, 3, 11, true}};
  for (const auto& k : kinds) {
    auto j = to_json(k);
    CHECK(j.at("kind") == kind_name(k));
    CHECK(kind_from_json(j) == k);
  }
  auto d = kind_from_json({{"kind", "tcrc"}, {"delay", 20}});
  CHECK(std::get<TcrcConfig>(d) == TcrcConfig{20, 1, 1e-8, 0, 0.0});
  CHECK_ERROR_CODE(kind_from_json({{"kind", "gru"}}), ErrorCode::SpecInvalid);
  CHECK_ERROR_CODE(kind_from_json({{"delay", 3}}), ErrorCode::SpecInvalid);
  CHECK_ERROR_CODE(kind_from_json({{"kind", "tcrc"}, {"delay", "ten"}}), ErrorCode::SpecInvalid);
}

TEST_CASE("tcrc fits the periodic benchmark") {
  const SplitSpec split{0, 2000, 286};
  const ModelKind kind = TcrcConfig{50, 2, 1e-8, 0, 0.0};
  auto series = series_for(10.0, kind, split);
  auto m = train(series, split, kind);
  CHECK(m.train_mse < 1e-8);

  // recompute the residual from the exported weights
  TrainingSession session(series, split, kind);
  const Matrix r = m.readout.weights * session.states().matrix() - session.targets().matrix();
  CHECK(r.squaredNorm() / static_cast<double>(r.size()) == doctest::Approx(m.train_mse).epsilon(1e-12));

  auto p = predict_closed_loop(m, series, split);
  CHECK_FALSE(p.diverged);
  CHECK(p.predicted.sample_count() == 286);
  CHECK(p.mse < 1e-5);
}

TEST_CASE("esn at zero radius is an elm") {
  const auto e = esn(200, 0.0, 21);
  ElmConfig l;
  l.hidden_size = 200;
  l.seed = 21;
  l.ridge_beta = e.ridge_beta;
  auto series = series_for(17.0, e);
  auto me = train(series, kSplit, e);
  auto ml = train(series, kSplit, l);
  CHECK((me.readout.weights - ml.readout.weights).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("training is deterministic") {
  for (const ModelKind& kind : std::vector<ModelKind>{esn(150, 0.9, 4), TcrcConfig{10, 2, 1e-8, 2, 1e-3},
                                                      TcrcElmConfig{TcrcConfig{6, 1, 1e-6, 0, 0.0}, 4, 2, false}}) {
    auto series = series_for(17.0, kind);
    auto a = train(series, kSplit, kind, 3);
    auto b = train(series, kSplit, kind, 3);
    CHECK(a.readout.weights == b.readout.weights);
    auto pa = predict_closed_loop(a, series, kSplit);
    auto pb = predict_closed_loop(b, series, kSplit);
    CHECK(pa.predicted == pb.predicted);
    CHECK(to_json(a) == to_json(b));
  }
}

TEST_CASE("serial and OpenMP sessions agree bit for bit") {
  const ModelKind kind = TcrcElmConfig{TcrcConfig{8, 2, 1e-6, 2, 1e-3}, 3, 7, true};
  auto series = series_for(17.0, kind);
  TrainingSession s(series, kSplit, kind, 1, kernels::Backend::Serial);
  TrainingSession o(series, kSplit, kind, 1, kernels::Backend::OpenMP);
  CHECK(s.states().matrix() == o.states().matrix());
  CHECK(s.fit(1e-6).readout.weights == o.fit(1e-6).readout.weights);
}

TEST_CASE("one session serves several ridge strengths") {
  const ModelKind kind = TcrcConfig{10, 2, 1e-8, 0, 0.0};
  auto series = series_for(15.0, kind);
  TrainingSession session(series, kSplit, kind);
  for (double beta : {0.0, 1e-8, 1e-4}) {
    auto fresh = train(series, kSplit, with_ridge_beta(kind, beta));
    auto shared = session.fit(beta);
    CHECK(shared.readout.weights == fresh.readout.weights);
    CHECK(ridge_beta_of(shared.kind) == beta);
  }
}

TEST_CASE("closed loop never reads the held-out segment") {
  for (const ModelKind& kind :
       std::vector<ModelKind>{esn(120, 0.9, 1), TcrcConfig{10, 2, 1e-8, 0, 0.0}, NgrcConfig{3, 1e-6}}) {
    auto series = series_for(17.0, kind);
    auto m = train(series, kSplit, kind);
    auto blind = zero_test_segment(series, kSplit.test_len);
    auto mb = train(blind, kSplit, kind);
    CHECK(mb.readout.weights == m.readout.weights);
    CHECK(predict_closed_loop(m, blind, kSplit).predicted == predict_closed_loop(m, series, kSplit).predicted);
  }
}

TEST_CASE("open loop beats closed loop on chaotic data") {
  const ModelKind kind = TcrcConfig{20, 2, 1e-8, 0, 0.0};
  auto series = series_for(17.0, kind);
  auto m = train(series, kSplit, kind);
  auto open = predict_open_loop(m, series, kSplit);
  auto closed = predict_closed_loop(m, series, kSplit);
  CHECK(open.predicted.sample_count() == 286);
  CHECK(open.mse < closed.mse);
  // the first step sees identical inputs either way
  CHECK(open.predicted[0] == closed.predicted[0]);
}

TEST_CASE("identity model on a constant series") {
  TrainedModel m;
  m.kind = NgrcConfig{1, 0.0};
  m.norm_stats = {0.7, 1.0};
  m.readout.weights = Matrix::Zero(1, 5);
  m.readout.weights(0, 0) = 1.0;  // y = x(t)
  SeriesFrame flat(std::vector<double>(400, 0.7));
  const SplitSpec split{0, 100, 286};
  auto p = predict_closed_loop(m, flat, split);
  CHECK_FALSE(p.diverged);
  CHECK(p.predicted == p.target);
  CHECK(p.mse == 0.0);
  CHECK(predict_open_loop(m, flat, split).mse == 0.0);
}

TEST_CASE("divergence is flagged, not thrown") {
  TrainedModel m;
  m.kind = NgrcConfig{1, 0.0};
  m.norm_stats = {0.0, 1e-3};  // normalized inputs of order 1e3
  m.readout.weights = Matrix::Zero(1, 5);
  m.readout.weights(0, 2) = 1.0;  // y = x(t)^2
  auto series = make_benchmark(17.0, kSplit, 1);
  const SplitSpec split{0, 2000, 286};
  auto p = predict_closed_loop(m, series, split);
  CHECK(p.diverged);
  CHECK(std::isinf(p.mse));
  CHECK(p.predicted.sample_count() < 286);
  CHECK(p.target.sample_count() == 286);
  auto csv = prediction_csv(p);
  CHECK(csv.rfind("step,target,predicted\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 287);
}

TEST_CASE("washout of 100 steps is sufficient") {
  auto a = esn(300, 0.9, 6);
  auto b = a;
  b.washout = 200;
  const SplitSpec split = kSplit;
  auto series = series_for(17.0, b);
  const double ma = predict_closed_loop(train(series, split, a), series, split).mse;
  const double mb = predict_closed_loop(train(series, split, b), series, split).mse;
  CHECK(std::abs(ma - mb) < 0.01 * mb);
}

TEST_CASE("training errors") {
  auto short_series = make_benchmark(17.0, {0, 50, 10});
  CHECK_ERROR_CODE(train(short_series, kSplit, TcrcConfig{}), ErrorCode::InsufficientData);
  CHECK_ERROR_CODE(train(make_benchmark(17.0, kSplit, 20), kSplit, TcrcConfig{10, 11}), ErrorCode::TooManyLayers);
  CHECK_ERROR_CODE(train(SeriesFrame(std::vector<double>(3000, 1.0)), kSplit, TcrcConfig{}),
                   ErrorCode::ConstantSeries);
}

TEST_CASE("trained model export") {
  const ModelKind kind = TcrcElmConfig{TcrcConfig{4, 1, 1e-6, 0, 0.0}, 2, 5, false};
  auto m = train(series_for(17.0, kind), kSplit, kind);
  auto j = to_json(m);
  CHECK(j.at("config").at("kind") == "tcrc_elm");
  CHECK(j.at("w_in").at("rows") == 16);
  CHECK(j.at("w_in").at("cols") == 8);
  CHECK(readout_from_json(j.at("readout")).weights == m.readout.weights);
  CHECK(j.at("norm_stats").at("std").get<double>() == m.norm_stats.std);
}

}  // TEST_SUITE
