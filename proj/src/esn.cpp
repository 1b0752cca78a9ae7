#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "mglab/baselines.hpp"
#include "mglab/error.hpp"
#include "mglab/rng.hpp"

namespace mglab {

namespace {

// Raw spectral radii are a pure function of the draw parameters; sweeps over
// the target radius reuse them instead of repeating the O(N^3) eigensolve.
using DrawKey = std::tuple<std::uint64_t, std::size_t, std::uint64_t, std::uint64_t>;

double cached_raw_radius(const EsnConfig& config, const SparseRowMatrix& raw) {
  static std::mutex mu;
  static std::map<DrawKey, double> cache;
  const DrawKey key{config.seed, config.reservoir_size, std::bit_cast<std::uint64_t>(config.connectivity),
                    std::bit_cast<std::uint64_t>(config.weight_scale)};
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const double r = spectral_radius(Matrix(raw));
  std::lock_guard lock(mu);
  cache.emplace(key, r);
  return r;
}

}  // namespace

double spectral_radius(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonFiniteInput, "eigenvalue iteration did not converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix draw_input_weights(std::uint64_t seed, std::size_t rows, std::size_t cols, double scale) {
  const CounterRng rng(seed, "w_in");
  Matrix w(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rng.symmetric(i * cols + j, scale);
  return w;
}

SparseRowMatrix draw_reservoir_weights(const EsnConfig& config) {
  const std::size_t n = config.reservoir_size;
  const CounterRng mask(config.seed, "w_r/mask");
  const CounterRng value(config.seed, "w_r/value");
  std::vector<Eigen::Triplet<double>> nz;
  nz.reserve(static_cast<std::size_t>(config.connectivity * static_cast<double>(n * n)) + n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t c = i * n + j;
      if (mask.unit(c) < config.connectivity) {
        nz.emplace_back(static_cast<int>(i), static_cast<int>(j), value.symmetric(c, config.weight_scale));
      }
    }
  }
  SparseRowMatrix w(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  w.setFromTriplets(nz.begin(), nz.end());
  return w;
}

EsnModel esn_init(const EsnConfig& config) {
  if (config.reservoir_size == 0 || config.input_dim == 0) {
    throw Error(ErrorCode::DimensionMismatch, "reservoir_size and input_dim must be positive");
  }
  if (!(config.spectral_radius >= 0.0) || !(config.connectivity > 0.0 && config.connectivity <= 1.0) ||
      !(config.weight_scale > 0.0)) {
    throw Error(ErrorCode::SpecInvalid, "need spectral_radius >= 0, 0 < connectivity <= 1, weight_scale > 0");
  }
  const auto n = static_cast<Eigen::Index>(config.reservoir_size);
  EsnModel model;
  model.config = config;
  model.w_in = draw_input_weights(config.seed, config.reservoir_size, config.input_dim, config.weight_scale);
  model.state = Vector::Zero(n);
  model.w_r.resize(n, n);
  if (config.spectral_radius == 0.0) return model;

  SparseRowMatrix raw = draw_reservoir_weights(config);
  const double raw_radius = raw.nonZeros() == 0 ? 0.0 : cached_raw_radius(config, raw);
  if (raw_radius == 0.0) {
    throw Error(ErrorCode::ZeroSpectralRadius, "raw reservoir draw has spectral radius 0; redraw with another seed");
  }
  model.w_r = raw * (config.spectral_radius / raw_radius);
  return model;
}

const Vector& esn_step(EsnModel& model, std::span<const double> input) {
  if (static_cast<Eigen::Index>(input.size()) != model.w_in.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "ESN input length " + std::to_string(input.size()) +
                                                  ", expected " + std::to_string(model.w_in.cols()));
  }
  const Eigen::Map<const Vector> x(input.data(), static_cast<Eigen::Index>(input.size()));
  Vector pre = model.w_in * x;
  if (model.w_r.nonZeros() > 0) pre.noalias() += model.w_r * model.state;
  model.state = pre.array().tanh();
  return model.state;
}

}  // namespace mglab
