#include <vector>

#include "mglab/error.hpp"
#include "mglab/kernels.hpp"
#include "mglab/rng.hpp"

namespace mglab::kernels {

namespace detail {

void check_window_bounds(std::span<const double> series, std::size_t first, std::size_t depth,
                         const Matrix& out) {
  const auto count = static_cast<std::size_t>(out.cols());
  if (depth == 0 || first + 1 < depth) {
    throw Error(ErrorCode::InsufficientHistory, "first window at step " + std::to_string(first) +
                                                    " needs " + std::to_string(depth) + " samples");
  }
  if (count > 0 && first + count > series.size()) {
    throw Error(ErrorCode::OutOfRange, "window columns run past the end of the series");
  }
}

}  // namespace detail

void collect_windowed_serial(std::span<const double> series, std::size_t first, std::size_t depth,
                             const WindowMap& map, Matrix& out) {
  detail::check_window_bounds(series, first, depth, out);
  std::vector<double> window(depth);
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const std::size_t t = first + static_cast<std::size_t>(c);
    for (std::size_t k = 0; k < depth; ++k) window[k] = series[t - k];
    map(window, out.col(c));
  }
}

void add_state_noise_serial(Matrix& out, double stddev, std::uint64_t seed) {
  const CounterRng rng(seed, "state_noise");
  const auto rows = static_cast<std::uint64_t>(out.rows());
  for (Eigen::Index c = 0; c < out.cols(); ++c)
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      out(r, c) += stddev * rng.normal(static_cast<std::uint64_t>(c) * rows + static_cast<std::uint64_t>(r));
}

}  // namespace mglab::kernels
