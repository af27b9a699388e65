#pragma once

#include <vector>

#include <Eigen/Dense>

// Small dense primal-dual interior-point solver for
//
//   minimize   <C, X> + c.x
//   subject to <A_i, X> + a_i.x = b_i   (i = 1..m)
//              X PSD,  x >= 0
//
// with dual  maximize b.y  s.t.  C - sum y_i A_i = S PSD,  c - a^T y = s >= 0.
// Mehrotra predictor-corrector on the HKM direction; meant for PSD blocks of
// dimension up to ~50 and a handful of constraints.
namespace bellpoly::sdp {

struct Problem {
  Eigen::MatrixXd c_psd;               // n x n symmetric
  Eigen::VectorXd c_lp;                // p
  std::vector<Eigen::MatrixXd> a_psd;  // m matrices, n x n symmetric
  Eigen::MatrixXd a_lp;                // m x p
  Eigen::VectorXd b;                   // m
};

struct Options {
  double tolerance = 1e-10;
  int max_iterations = 150;
  double step_fraction = 0.98;
};

struct Result {
  Eigen::MatrixXd X;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::MatrixXd S;
  Eigen::VectorXd s;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;  // relative
  double dual_residual = 0.0;    // relative
  double relative_gap = 0.0;
  int iterations = 0;
  bool converged = false;
};

Result solve(const Problem& problem, const Options& options = {});

}  // namespace bellpoly::sdp
