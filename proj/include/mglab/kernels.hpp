#pragma once

// Data-parallel kernels. Every kernel has a serial reference and an OpenMP
// variant; both perform the same per-column arithmetic, so their outputs
// are bit-identical for any thread count.

#include <cstdint>
#include <functional>
#include <span>

#include "mglab/readout.hpp"

namespace mglab::kernels {

enum class Backend { Serial, OpenMP };

/// Writes the feature vector of one newest-first window into `out`.
using WindowMap = std::function<void(std::span<const double> window, Eigen::Ref<Vector> out)>;

/// Column c of `out` (pre-sized rows x count) receives
/// map([x(t), x(t-1), ..., x(t-depth+1)]) with t = first + c.
void collect_windowed_serial(std::span<const double> series, std::size_t first, std::size_t depth,
                             const WindowMap& map, Matrix& out);
void collect_windowed_omp(std::span<const double> series, std::size_t first, std::size_t depth,
                          const WindowMap& map, Matrix& out);

/// out(r, c) += stddev * N(0, 1), counter c * rows + r of the seed's
/// "state_noise" stream.
void add_state_noise_serial(Matrix& out, double stddev, std::uint64_t seed);
void add_state_noise_omp(Matrix& out, double stddev, std::uint64_t seed);

inline void collect_windowed(Backend b, std::span<const double> series, std::size_t first, std::size_t depth,
                             const WindowMap& map, Matrix& out) {
  b == Backend::OpenMP ? collect_windowed_omp(series, first, depth, map, out)
                       : collect_windowed_serial(series, first, depth, map, out);
}

inline void add_state_noise(Backend b, Matrix& out, double stddev, std::uint64_t seed) {
  b == Backend::OpenMP ? add_state_noise_omp(out, stddev, seed) : add_state_noise_serial(out, stddev, seed);
}

}  // namespace mglab::kernels
