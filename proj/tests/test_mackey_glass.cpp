#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mglab/mackey_glass.hpp"
#include "test_util.hpp"

using namespace mglab;

namespace {

// Forward Euler. dt divides tau, so the delayed value is a stored grid point.
std::vector<double> euler_oracle(double tau, double dt, std::size_t warmup, std::size_t n) {
  const auto lag = static_cast<std::size_t>(std::lround(tau / dt));
  const auto per_sample = static_cast<std::size_t>(std::lround(1.0 / dt));
  const std::size_t steps = (warmup + n - 1) * per_sample;
  std::vector<double> x(lag + steps + 1, 1.2);
  for (std::size_t k = lag; k < lag + steps; ++k) {
    const double xd = x[k - lag];
    x[k + 1] = x[k] + dt * (0.2 * xd / (1.0 + std::pow(xd, 10.0)) - 0.1 * x[k]);
  }
  std::vector<double> out;
  for (std::size_t s = warmup; s < warmup + n; ++s) out.push_back(x[lag + s * per_sample]);
  return out;
}

double rms_diff(const SeriesFrame& a, const SeriesFrame& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.sample_count(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc / static_cast<double>(a.sample_count()));
}

}  // namespace

TEST_SUITE("mackey_glass") {

TEST_CASE("derivative examples") {
  const auto p = MackeyGlassParams::standard(17.0);
  CHECK(mg_derivative(1.0, 1.0, p) == 0.0);
  CHECK(mg_derivative(0.0, 0.0, p) == 0.0);
  // 0.24 / (1 + 1.2^10) - 0.05, evaluated in exact rationals
  CHECK(mg_derivative(0.5, 1.2, p) == doctest::Approx(-0.016628365403871675).epsilon(1e-14));
  // negative delayed values are clamped inside the power term
  CHECK(std::isfinite(mg_derivative(0.1, -0.3, p)));
}

TEST_CASE("fixed points") {
  IntegratorConfig integ;
  integ.history_value = 1.0;
  integ.warmup_samples = 0;
  auto eq = generate(MackeyGlassParams::standard(17.0), integ, 1000);
  REQUIRE(eq.sample_count() == 1000);
  for (double v : eq.values()) CHECK(std::abs(v - 1.0) <= 1e-6);

  integ.history_value = 0.0;
  auto zero = generate(MackeyGlassParams::standard(17.0), integ, 500);
  for (double v : zero.values()) CHECK(v == 0.0);
}

TEST_CASE("chaotic envelope agrees with an Euler oracle") {
  auto s = generate(MackeyGlassParams::standard(17.0), IntegratorConfig{}, 2286);
  auto [lo, hi] = std::minmax_element(s.values().begin(), s.values().end());
  CHECK(*lo > 0.2);
  CHECK(*hi < 1.5);
  CHECK(*hi - *lo > 0.5);

  auto e = euler_oracle(17.0, 0.01, 1000, 2286);
  auto [elo, ehi] = std::minmax_element(e.begin(), e.end());
  CHECK(*elo > 0.2);
  CHECK(*ehi < 1.5);
  // chaos decorrelates the trajectories; the attractor's range is shared
  CHECK(std::abs(*lo - *elo) < 0.1);
  CHECK(std::abs(*hi - *ehi) < 0.1);
}

TEST_CASE("integrator converges under step halving") {
  IntegratorConfig a;
  IntegratorConfig b = a;
  b.internal_dt = a.internal_dt / 2;
  const auto p = MackeyGlassParams::standard(17.0);
  CHECK(rms_diff(generate(p, a, 2000), generate(p, b, 2000)) < 1e-4);
}

TEST_CASE("linear delay interpolation is available and less accurate") {
  IntegratorConfig h;
  h.warmup_samples = 0;
  IntegratorConfig l = h;
  l.interpolation = DelayInterpolation::Linear;
  IntegratorConfig ref = h;
  ref.internal_dt = h.internal_dt / 4;
  const auto p = MackeyGlassParams::standard(17.0);
  auto r = generate(p, ref, 300);
  CHECK(rms_diff(generate(p, h, 300), r) < rms_diff(generate(p, l, 300), r));
}

TEST_CASE("misaligned step sizes are rejected") {
  IntegratorConfig integ;
  integ.internal_dt = 0.3;
  CHECK_ERROR_CODE(generate(MackeyGlassParams::standard(17.0), integ, 10), ErrorCode::ConfigMisaligned);
  IntegratorConfig ok;
  CHECK_ERROR_CODE(generate(MackeyGlassParams::standard(17.01), ok, 10), ErrorCode::ConfigMisaligned);
}

TEST_CASE("benchmark series") {
  const SplitSpec split{100, 2000, 286};
  auto s = make_benchmark(17.0, split);
  CHECK(s.sample_count() == 2386);
  CHECK(s.tag() == "mg_tau17");
  CHECK(s == make_benchmark(17.0, split));

  // carved history keeps the tail at the same absolute times
  auto longer = make_benchmark(17.0, split, 50);
  REQUIRE(longer.sample_count() == 2436);
  for (std::size_t i = 0; i < s.sample_count(); ++i) REQUIRE(longer[i + 50] == s[i]);

  CHECK(dataset_tag(17.5) == "mg_tau17.5");
}

TEST_CASE("tau 5 is periodic") {
  auto s = make_benchmark(5.0, {100, 2000, 286});
  const auto v = s.values();
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  auto acf = [&](std::size_t lag) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) den += (v[i] - mean) * (v[i] - mean);
    for (std::size_t i = 0; i + lag < v.size(); ++i) num += (v[i] - mean) * (v[i + lag] - mean);
    return num / den;
  };
  std::size_t lag = 1;
  while (acf(lag) > 0.0) ++lag;  // past the first zero crossing
  std::size_t best = lag;
  for (std::size_t k = lag; k < 200; ++k)
    if (acf(k) > acf(best)) best = k;
  CHECK(acf(best) > 0.95);
}

}  // TEST_SUITE
