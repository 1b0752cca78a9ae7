#include "mglab/mackey_glass.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mglab/error.hpp"
#include "mglab/format.hpp"

namespace mglab {

namespace {

std::size_t checked_ratio(double num, double den, const char* what) {
  const double r = num / den;
  const double rounded = std::round(r);
  if (!(rounded >= 1.0) || std::abs(r - rounded) > 1e-9 * rounded) {
    throw Error(ErrorCode::ConfigMisaligned,
                std::string(what) + " is not an integer multiple of internal_dt");
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

double mg_derivative(double x_now, double x_delayed, const MackeyGlassParams& p) {
  const double base = x_delayed > 0.0 ? x_delayed : 0.0;
  const double denom = std::pow(p.theta, p.exponent) + std::pow(base, p.exponent);
  return p.beta_mg * p.theta * x_delayed / denom - p.gamma * x_now;
}

SeriesFrame generate(const MackeyGlassParams& params, const IntegratorConfig& integ,
                     std::size_t n_samples) {
  if (!(params.theta > 0.0) || !(params.tau > 0.0) || !(params.exponent > 0.0)) {
    throw Error(ErrorCode::ConfigMisaligned, "theta, tau and exponent must be positive");
  }
  if (!(integ.internal_dt > 0.0) || !(integ.sample_dt > 0.0)) {
    throw Error(ErrorCode::ConfigMisaligned, "time steps must be positive");
  }
  const double h = integ.internal_dt;
  const std::size_t delay_steps = checked_ratio(params.tau, h, "tau");
  const std::size_t steps_per_sample = checked_ratio(integ.sample_dt, h, "sample_dt");

  // Ring of the last delay_steps + 1 grid values and their derivatives.
  // Grid index j maps to slot j mod ring; negative indices are history.
  const auto ring = static_cast<long long>(delay_steps + 1);
  std::vector<double> xs(static_cast<std::size_t>(ring), integ.history_value);
  std::vector<double> dxs(static_cast<std::size_t>(ring), 0.0);
  const auto value = [&](long long j) {
    return j < 0 ? integ.history_value : xs[static_cast<std::size_t>(j % ring)];
  };
  // Derivative at j as the left end of segment [j, j+1] and as the right end
  // of [j-1, j]; the history is constant, so the latter is zero at j = 0.
  const auto slope_left = [&](long long j) {
    return j < 0 ? 0.0 : dxs[static_cast<std::size_t>(j % ring)];
  };
  const auto slope_right = [&](long long j) {
    return j <= 0 ? 0.0 : dxs[static_cast<std::size_t>(j % ring)];
  };

  const bool hermite = integ.interpolation == DelayInterpolation::Hermite;
  const auto d = static_cast<long long>(delay_steps);
  const std::size_t total = integ.warmup_samples + n_samples;
  std::vector<double> out;
  out.reserve(n_samples);

  double x = integ.history_value;
  long long k = 0;
  for (std::size_t s = 0; s < total; ++s) {
    if (s >= integ.warmup_samples) out.push_back(x);
    if (s + 1 == total) break;
    for (std::size_t sub = 0; sub < steps_per_sample; ++sub, ++k) {
      const double x_lo = value(k - d);
      const double k1 = mg_derivative(x, x_lo, params);
      // Slot k held grid point k - d - 1, which no later stage reads.
      xs[static_cast<std::size_t>(k % ring)] = x;
      dxs[static_cast<std::size_t>(k % ring)] = k1;

      const double x_hi = value(k - d + 1);
      double x_mid = 0.5 * (x_lo + x_hi);
      if (hermite) x_mid += 0.125 * h * (slope_left(k - d) - slope_right(k - d + 1));

      const double k2 = mg_derivative(x + 0.5 * h * k1, x_mid, params);
      const double k3 = mg_derivative(x + 0.5 * h * k2, x_mid, params);
      const double k4 = mg_derivative(x + h * k3, x_hi, params);
      x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return SeriesFrame(std::move(out), dataset_tag(params.tau));
}

SeriesFrame make_benchmark(double tau, const SplitSpec& split, std::size_t extra_history) {
  // Extra history is taken out of the warmup so the split windows stay at
  // the same absolute times.
  IntegratorConfig integ;
  integ.warmup_samples -= std::min(integ.warmup_samples, extra_history);
  return generate(MackeyGlassParams::standard(tau), integ, split.total() + extra_history);
}

std::string dataset_tag(double tau) { return "mg_tau" + format_double(tau); }

}  // namespace mglab
