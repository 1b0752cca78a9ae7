#pragma once

#include <cstddef>
#include <string>

#include "mglab/series.hpp"

namespace mglab {

struct MackeyGlassParams {
  double beta_mg = 0.2;
  double theta = 1.0;
  double gamma = 0.1;
  double exponent = 10.0;
  double tau = 17.0;

  /// [beta, theta, gamma, n] = [0.2, 1, 0.1, 10] with the given delay.
  static MackeyGlassParams standard(double tau) { return {0.2, 1.0, 0.1, 10.0, tau}; }
};

/// How the delayed value between buffer grid points is reconstructed.
enum class DelayInterpolation {
  Linear,
  Hermite,  // cubic, from stored values and derivatives
};

struct IntegratorConfig {
  double internal_dt = 0.05;
  double sample_dt = 1.0;
  std::size_t warmup_samples = 1000;
  double history_value = 1.2;
  DelayInterpolation interpolation = DelayInterpolation::Hermite;
};

/// Right-hand side of the delay equation. Negative delayed values are
/// clamped to 0 inside the power term.
double mg_derivative(double x_now, double x_delayed, const MackeyGlassParams& params);

/// Fixed-step RK4 with a ring-buffer delay line. Sample k is the state at
/// time k * sample_dt; the first warmup_samples samples are dropped.
/// Throws ConfigMisaligned unless sample_dt and tau are integer multiples
/// of internal_dt.
SeriesFrame generate(const MackeyGlassParams& params, const IntegratorConfig& integ,
                     std::size_t n_samples);

/// Standard parameters and default integrator; split.total() + extra_history
/// samples. The extra history is carved out of the warmup.
SeriesFrame make_benchmark(double tau, const SplitSpec& split, std::size_t extra_history = 0);

/// "mg_tau17", "mg_tau17.5", ...
std::string dataset_tag(double tau);

}  // namespace mglab
