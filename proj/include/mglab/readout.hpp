#pragma once

#include <Eigen/Dense>
#include <json.hpp>
#include <span>

namespace mglab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Collected states, one column per training step.
class StateMatrix {
 public:
  StateMatrix() = default;
  explicit StateMatrix(Matrix states) : m_(std::move(states)) {}
  const Matrix& matrix() const noexcept { return m_; }
  Matrix& matrix() noexcept { return m_; }
  Eigen::Index rows() const noexcept { return m_.rows(); }
  Eigen::Index cols() const noexcept { return m_.cols(); }

 private:
  Matrix m_;
};

/// Training targets, one column per training step.
class TargetMatrix {
 public:
  TargetMatrix() = default;
  explicit TargetMatrix(Matrix targets) : m_(std::move(targets)) {}
  const Matrix& matrix() const noexcept { return m_; }
  Eigen::Index rows() const noexcept { return m_.rows(); }
  Eigen::Index cols() const noexcept { return m_.cols(); }

 private:
  Matrix m_;
};

struct ReadoutWeights {
  Matrix weights;  // N_out x N_r
  double ridge_beta = 0.0;
};

/// Normal equations of the ridge fit, precomputed once so several
/// regularization strengths can be solved from the same states.
class RidgeProblem {
 public:
  RidgeProblem(const StateMatrix& states, const TargetMatrix& targets);

  /// W = Y S^T (S S^T + beta I)^+. Cholesky for beta > 0; for beta == 0 an
  /// eigenvalue pseudoinverse of the symmetric Gram matrix with values
  /// below 1e-12 of the largest dropped.
  ReadoutWeights solve(double ridge_beta) const;

  const Matrix& gram() const noexcept { return gram_; }
  const Matrix& cross() const noexcept { return cross_; }

 private:
  Matrix gram_;   // S S^T
  Matrix cross_;  // Y S^T
};

ReadoutWeights fit_ridge(const StateMatrix& states, const TargetMatrix& targets, double ridge_beta);

Vector apply_readout(const ReadoutWeights& w, const Eigen::Ref<const Vector>& state);

nlohmann::json to_json(const ReadoutWeights& w);
ReadoutWeights readout_from_json(const nlohmann::json& j);

}  // namespace mglab
