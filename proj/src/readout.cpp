#include "mglab/readout.hpp"

#include <cmath>
#include <json.hpp>

#include "mglab/error.hpp"

namespace mglab {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw Error(ErrorCode::NonFiniteInput, std::string(what) + " contains NaN or Inf");
}

}  // namespace

RidgeProblem::RidgeProblem(const StateMatrix& states, const TargetMatrix& targets) {
  const Matrix& s = states.matrix();
  const Matrix& y = targets.matrix();
  if (s.cols() != y.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "states have " + std::to_string(s.cols()) +
                                                  " columns, targets " + std::to_string(y.cols()));
  }
  if (s.cols() == 0 || s.rows() == 0 || y.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "ridge fit needs at least one column");
  }
  require_finite(s, "state matrix");
  require_finite(y, "target matrix");

  gram_ = Matrix::Zero(s.rows(), s.rows());
  gram_.selfadjointView<Eigen::Lower>().rankUpdate(s);
  gram_.triangularView<Eigen::StrictlyUpper>() = gram_.transpose();
  cross_ = y * s.transpose();
}

ReadoutWeights RidgeProblem::solve(double ridge_beta) const {
  if (!(ridge_beta >= 0.0) || !std::isfinite(ridge_beta)) {
    throw Error(ErrorCode::NonFiniteInput, "ridge_beta must be finite and nonnegative");
  }
  const Eigen::Index n = gram_.rows();
  ReadoutWeights out;
  out.ridge_beta = ridge_beta;

  if (ridge_beta > 0.0) {
    Matrix a = gram_;
    a.diagonal().array() += ridge_beta;
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() == Eigen::Success) {
      // W A = C  <=>  A W^T = C^T (A symmetric).
      out.weights = llt.solve(cross_.transpose()).transpose();
      if (out.weights.allFinite()) return out;
    }
  }

  Matrix a = gram_;
  a.diagonal().array() += ridge_beta;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  const Vector& lambda = eig.eigenvalues();
  const double cutoff = 1e-12 * lambda.cwiseAbs().maxCoeff();
  Vector inv = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(lambda[i]) > cutoff) inv[i] = 1.0 / lambda[i];
  }
  const Matrix& v = eig.eigenvectors();
  out.weights = ((cross_ * v) * inv.asDiagonal()) * v.transpose();
  return out;
}

ReadoutWeights fit_ridge(const StateMatrix& states, const TargetMatrix& targets, double ridge_beta) {
  return RidgeProblem(states, targets).solve(ridge_beta);
}

Vector apply_readout(const ReadoutWeights& w, const Eigen::Ref<const Vector>& state) {
  if (state.size() != w.weights.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "state length " + std::to_string(state.size()) +
                                                  " but readout expects " +
                                                  std::to_string(w.weights.cols()));
  }
  return w.weights * state;
}

nlohmann::json to_json(const ReadoutWeights& w) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(w.weights.size()));
  for (Eigen::Index r = 0; r < w.weights.rows(); ++r)
    for (Eigen::Index c = 0; c < w.weights.cols(); ++c) flat.push_back(w.weights(r, c));
  return {{"rows", w.weights.rows()}, {"cols", w.weights.cols()},
          {"ridge_beta", w.ridge_beta}, {"weights", flat}};
}

ReadoutWeights readout_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto flat = j.at("weights").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(flat.size()) != rows * cols) {
    throw Error(ErrorCode::DimensionMismatch, "readout JSON weight count does not match rows*cols");
  }
  ReadoutWeights w;
  w.ridge_beta = j.at("ridge_beta").get<double>();
  w.weights.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) w.weights(r, c) = flat[static_cast<std::size_t>(r * cols + c)];
  return w;
}

}  // namespace mglab
