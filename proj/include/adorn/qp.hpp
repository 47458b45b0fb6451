#pragma once

// Small dense strictly convex QP:
//   minimize 1/2 x'Gx + g'x  subject to  Aeq x = beq,  Ain x >= bin.

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace adorn {

struct QpProblem {
  Eigen::MatrixXd G;
  Eigen::VectorXd g;
  Eigen::MatrixXd Aeq;
  Eigen::VectorXd beq;
  Eigen::MatrixXd Ain;
  Eigen::VectorXd bin;
};

struct QpResult {
  bool feasible = false;
  Eigen::VectorXd x;
  double objective = 0.0;
  /// Active inequality rows at the solution, or the blocking set when infeasible.
  std::vector<int> active;
  Eigen::VectorXd multipliers;
  int iterations = 0;
  std::string message;
};

QpResult solve_qp(const QpProblem& p, double tol = 1e-10);

}  // namespace adorn
