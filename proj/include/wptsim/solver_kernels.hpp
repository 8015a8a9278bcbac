#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "wptsim/channel.hpp"

namespace wpt {

/// Transmit covariance with its power budget. Entries and budget share the
/// same unit (watts throughout this library).
struct Covariance {
  Eigen::MatrixXcd matrix;
  double trace_budget = 0.0;

  /// Throws std::runtime_error unless the matrix is Hermitian (entrywise to
  /// 1e-10), PSD (min eigenvalue >= -1e-8 * trace), and within budget
  /// (trace <= trace_budget + 1e-8).
  void validate() const;
};

enum class SolveStatus { optimal, max_iters, infeasible };

struct SolverCertificate {
  double objective = 0.0;          // achieved value in mW
  double primal_residual = 0.0;    // worst constraint violation
  double duality_gap_bound = 0.0;  // relative gap at termination
  SolveStatus status = SolveStatus::max_iters;
  Eigen::VectorXd dual_weights;    // max-min multipliers on the ER simplex
  int iterations = 0;
};

/// Fairness beamforming: maximize min_k h_k^H S h_k subject to tr(S) <= p_max
/// and S PSD. The certificate's dual_weights w satisfy the minimax bound
/// objective <= p_max * lambda_max(sum_k w_k h_k h_k^H) up to the gap.
std::pair<Covariance, SolverCertificate> solve_multibeam(
    const ChannelSet& channels, double p_max, double tol = 1e-6);

/// Trust-region step of the successive convex approximation: maximize
/// min_k sum_n durations(n) * coefs(k,n) * q_kn over per-slot covariances,
/// subject to the per-slot budget and |q_kn - centers_mw(k,n)| <= gamma_mw,
/// where q_kn is ER k's RF power (mW) in slot n. Rows of the trust region
/// that cannot bind (lower edge <= 0, upper edge beyond the power bound) are
/// dropped. gamma_mw = 0 degenerates to pinning the quadratic forms.
std::pair<std::vector<Covariance>, SolverCertificate> solve_sca_subproblem(
    const Eigen::MatrixXd& coefs, const Eigen::MatrixXd& centers_mw,
    double gamma_mw, const ChannelSet& channels, double p_max,
    const Eigen::VectorXd& durations, double tol = 1e-6);

/// Worst-ER time allocation: maximize min_k sum_n tau_n * dc_table(k,n)
/// subject to tau >= 0, sum tau = total_time. Solved exactly by a
/// deterministic simplex; an all-zero table row short-circuits to the
/// uniform split (the optimum is 0 regardless).
std::pair<Eigen::VectorXd, SolverCertificate> solve_time_lp(
    const Eigen::MatrixXd& dc_table, double total_time, double tol = 1e-9);

}  // namespace wpt
