#include "mglab/baselines.hpp"
#include "mglab/error.hpp"

namespace mglab {

std::size_t ngrc_feature_length(std::size_t delay) {
  const std::size_t k = delay + 1;
  return 2 * k + k * delay / 2;
}

Vector ngrc_features(std::span<const double> window) {
  if (window.size() < 2) throw Error(ErrorCode::WindowTooShort, "NG-RC window needs at least 2 samples");
  const std::size_t k = window.size();
  Vector out(static_cast<Eigen::Index>(ngrc_feature_length(k - 1)));
  Eigen::Index p = 0;
  for (std::size_t i = 0; i < k; ++i) out[p++] = window[i];
  for (std::size_t i = 0; i < k; ++i) out[p++] = window[i] * window[i];
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) out[p++] = window[i] * window[j];
  return out;
}

// Identity activation.
Vector ngrc_state(std::span<const double> window) { return ngrc_features(window); }

}  // namespace mglab
