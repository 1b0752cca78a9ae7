#include "mglab/baselines.hpp"
#include "mglab/error.hpp"

namespace mglab {

Matrix elm_init(const ElmConfig& config) {
  if (config.hidden_size == 0 || config.input_dim == 0) {
    throw Error(ErrorCode::DimensionMismatch, "hidden_size and input_dim must be positive");
  }
  return draw_input_weights(config.seed, config.hidden_size, config.input_dim, config.weight_scale);
}

Vector elm_map(const ElmConfig&, const Matrix& w_in, std::span<const double> input) {
  if (static_cast<Eigen::Index>(input.size()) != w_in.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "ELM input length " + std::to_string(input.size()) +
                                                  ", expected " + std::to_string(w_in.cols()));
  }
  const Eigen::Map<const Vector> x(input.data(), static_cast<Eigen::Index>(input.size()));
  return (w_in * x).array().tanh();
}

}  // namespace mglab
