#include <omp.h>

#include <vector>

#include "mglab/kernels.hpp"
#include "mglab/rng.hpp"

namespace mglab::kernels {

namespace detail {
void check_window_bounds(std::span<const double> series, std::size_t first, std::size_t depth,
                         const Matrix& out);
}

void collect_windowed_omp(std::span<const double> series, std::size_t first, std::size_t depth,
                          const WindowMap& map, Matrix& out) {
  detail::check_window_bounds(series, first, depth, out);
  const Eigen::Index cols = out.cols();
  #pragma omp parallel
  {
    std::vector<double> window(depth);
    #pragma omp for schedule(static)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const std::size_t t = first + static_cast<std::size_t>(c);
      for (std::size_t k = 0; k < depth; ++k) window[k] = series[t - k];
      map(window, out.col(c));
    }
  }
}

void add_state_noise_omp(Matrix& out, double stddev, std::uint64_t seed) {
  const CounterRng rng(seed, "state_noise");
  const auto rows = static_cast<std::uint64_t>(out.rows());
  const Eigen::Index cols = out.cols();
  #pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      out(r, c) += stddev * rng.normal(static_cast<std::uint64_t>(c) * rows + static_cast<std::uint64_t>(r));
}

}  // namespace mglab::kernels
