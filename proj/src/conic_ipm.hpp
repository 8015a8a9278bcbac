#pragma once

#include <Eigen/Dense>
#include <vector>

namespace wpt::ipm {

enum class Status { optimal, max_iters, infeasible };

struct Options {
  double feas_tol = 1e-8;  // absolute constraint-violation tolerance
  double opt_tol = 1e-6;   // relative duality-gap tolerance
  int max_iters = 5000;
  double step_frac = 0.99;
};

/// Max-min fairness program over per-slot transmit covariances:
///
///   maximize   E
///   subject to sum_n weight(k,n) * q_kn >= E            for every ER k
///              box_lo(k,n) <= q_kn <= box_hi(k,n)       where finite
///              tr(S_n) <= p_max,  S_n Hermitian PSD
///
/// with q_kn = h_k^H S_n h_k. Rows of h are pre-scaled so q is in mW while
/// S and p_max stay in watts. box matrices may be empty (no box rows);
/// -inf / +inf entries disable individual rows.
struct Problem {
  Eigen::MatrixXcd h;      // K x M, row k = h_k^H
  double p_max = 0.0;
  Eigen::MatrixXd weight;  // K x N, >= 0
  Eigen::MatrixXd box_lo;  // K x N or 0x0
  Eigen::MatrixXd box_hi;  // K x N or 0x0
};

struct Solution {
  std::vector<Eigen::MatrixXcd> S;  // N per-slot covariances
  double objective = 0.0;           // achieved min_k sum_n weight*q (mW)
  Eigen::VectorXd dual_weights;     // min-row multipliers, normalized
  double primal_residual = 0.0;     // worst constraint violation of S
  double rel_gap = 0.0;             // relative duality gap at termination
  int iterations = 0;
  Status status = Status::max_iters;
};

/// Primal-dual Nesterov-Todd interior-point method with a Mehrotra
/// predictor-corrector step and infeasible start. The Schur complement is
/// solved exploiting the block-arrow structure (per-slot rows coupled only
/// through the K min-rows).
Solution solve(const Problem& prob, const Options& opt = {});

}  // namespace wpt::ipm
