#pragma once

#include <Eigen/Dense>

#include "arbor/error.hpp"

namespace arbor::detail {

inline constexpr double kPivotTolerance = 1e-12;

/// Dense LU with partial pivoting plus one refinement step. A pivot below
/// kPivotTolerance * max|A| is reported as `code`.
inline Eigen::MatrixXd solve_dense(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, ErrorCode code) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  if (diag.size() > 0 && diag.minCoeff() < kPivotTolerance * scale) {
    fail(code, "linear system is singular (pivot " + std::to_string(diag.minCoeff()) + ")");
  }
  Eigen::MatrixXd x = lu.solve(b);
  x += lu.solve(b - a * x);
  return x;
}

}  // namespace arbor::detail
