#pragma once

#include <Eigen/Dense>
#include <vector>

namespace wpt::lp {

struct Result {
  Eigen::VectorXd x;
  double objective = 0.0;
  int iterations = 0;
  bool optimal = false;
  bool feasible = true;
};

/// Maximizes c^T x subject to A x (<= or ==) b, x >= 0, via a dense two-phase
/// tableau simplex with Bland's anti-cycling rule. Requires b >= 0 (callers
/// normalize row signs). Deterministic: always returns the same vertex for
/// the same input.
Result maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                const Eigen::VectorXd& b, const std::vector<bool>& row_is_eq);

}  // namespace wpt::lp
