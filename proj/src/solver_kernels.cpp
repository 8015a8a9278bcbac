#include "wptsim/solver_kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "conic_ipm.hpp"
#include "simplex_lp.hpp"

namespace wpt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SolveStatus to_status(ipm::Status s) {
  switch (s) {
    case ipm::Status::optimal:
      return SolveStatus::optimal;
    case ipm::Status::infeasible:
      return SolveStatus::infeasible;
    default:
      return SolveStatus::max_iters;
  }
}

// Channel rows scaled so the solver's quadratic forms come out in mW while
// covariances stay in watts.
Eigen::MatrixXcd scaled_rows(const ChannelSet& channels) {
  return std::sqrt(channels.rf_unit_scale) * channels.entries;
}

SolverCertificate make_certificate(const ipm::Solution& sol) {
  SolverCertificate cert;
  cert.objective = sol.objective;
  cert.primal_residual = sol.primal_residual;
  cert.duality_gap_bound = sol.rel_gap;
  cert.status = to_status(sol.status);
  cert.dual_weights = sol.dual_weights;
  cert.iterations = sol.iterations;
  return cert;
}

}  // namespace

void Covariance::validate() const {
  const Eigen::MatrixXcd& S = matrix;
  if (S.rows() != S.cols()) {
    throw std::runtime_error("Covariance: matrix not square");
  }
  const double herm = (S - S.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) {
    throw std::runtime_error("Covariance: not Hermitian");
  }
  const double tr = S.trace().real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(S,
                                                      Eigen::EigenvaluesOnly);
  if (eig.eigenvalues()(0) < -1e-8 * std::max(tr, 1e-30)) {
    throw std::runtime_error("Covariance: negative eigenvalue");
  }
  if (tr > trace_budget + 1e-8) {
    throw std::runtime_error("Covariance: trace exceeds budget");
  }
}

std::pair<Covariance, SolverCertificate> solve_multibeam(
    const ChannelSet& channels, double p_max, double tol) {
  if (!(p_max > 0.0)) {
    throw std::invalid_argument("solve_multibeam: p_max must be > 0");
  }
  ipm::Problem prob;
  prob.h = scaled_rows(channels);
  prob.p_max = p_max;
  prob.weight = Eigen::MatrixXd::Ones(channels.num_ers(), 1);
  ipm::Options opt;
  opt.opt_tol = tol;
  const ipm::Solution sol = ipm::solve(prob, opt);
  Covariance cov;
  cov.trace_budget = p_max;
  cov.matrix = sol.S.empty()
                   ? Eigen::MatrixXcd::Zero(channels.num_antennas(),
                                            channels.num_antennas())
                   : sol.S[0];
  SolverCertificate cert = make_certificate(sol);
  // Scaling onto the budget never hurts here: every quadratic form grows with
  // the covariance, so spend all the power and report what that attains.
  const double trace = cov.matrix.trace().real();
  if (trace > 1e-300 && cert.status != SolveStatus::infeasible) {
    cov.matrix *= p_max / trace;
    double attained = std::numeric_limits<double>::infinity();
    for (int k = 0; k < channels.num_ers(); ++k) {
      attained = std::min(attained, rf_power_mw(channels, k, cov.matrix));
    }
    cert.objective = attained;
  }
  return {std::move(cov), std::move(cert)};
}

std::pair<std::vector<Covariance>, SolverCertificate> solve_sca_subproblem(
    const Eigen::MatrixXd& coefs, const Eigen::MatrixXd& centers_mw,
    double gamma_mw, const ChannelSet& channels, double p_max,
    const Eigen::VectorXd& durations, double tol) {
  const int K = channels.num_ers();
  const int N = static_cast<int>(durations.size());
  if (coefs.rows() != K || coefs.cols() != N || centers_mw.rows() != K ||
      centers_mw.cols() != N) {
    throw std::invalid_argument("solve_sca_subproblem: dimension mismatch");
  }
  if (coefs.minCoeff() < 0.0 || durations.minCoeff() < 0.0) {
    throw std::invalid_argument(
        "solve_sca_subproblem: coefs and durations must be >= 0");
  }
  if (gamma_mw < 0.0 || !(p_max > 0.0)) {
    throw std::invalid_argument("solve_sca_subproblem: bad gamma or p_max");
  }

  ipm::Problem prob;
  prob.h = scaled_rows(channels);
  prob.p_max = p_max;
  prob.weight = coefs.array().rowwise() * durations.transpose().array();

  // A degenerate trust region still needs an interior for the IPM.
  const double gamma_eff =
      std::max(gamma_mw, 1e-7 * (1.0 + centers_mw.maxCoeff()));

  prob.box_lo = Eigen::MatrixXd::Constant(K, N, -kInf);
  prob.box_hi = Eigen::MatrixXd::Constant(K, N, kInf);
  SolverCertificate cert;
  for (int k = 0; k < K; ++k) {
    // q_kn <= p_max * ||h_k||^2 for any feasible covariance.
    const double spectral = p_max * prob.h.row(k).squaredNorm();
    for (int n = 0; n < N; ++n) {
      const double lo = centers_mw(k, n) - gamma_eff;
      const double hi = centers_mw(k, n) + gamma_eff;
      if (hi < 0.0 || lo > spectral + 1e-9) {
        cert.status = SolveStatus::infeasible;
        return {{}, cert};
      }
      if (lo > 0.0) prob.box_lo(k, n) = lo;
      if (hi < spectral) prob.box_hi(k, n) = hi;
    }
  }

  ipm::Options opt;
  opt.opt_tol = tol;
  const ipm::Solution sol = ipm::solve(prob, opt);
  if (sol.status == ipm::Status::infeasible) {
    cert = make_certificate(sol);
    return {{}, cert};
  }
  std::vector<Covariance> covs(N);
  for (int n = 0; n < N; ++n) {
    covs[n].matrix = sol.S[n];
    covs[n].trace_budget = p_max;
  }
  return {std::move(covs), make_certificate(sol)};
}

std::pair<Eigen::VectorXd, SolverCertificate> solve_time_lp(
    const Eigen::MatrixXd& dc_table, double total_time, double tol) {
  (void)tol;  // the simplex terminates at an exact vertex
  const int K = static_cast<int>(dc_table.rows());
  const int N = static_cast<int>(dc_table.cols());
  if (K < 1 || N < 1) {
    throw std::invalid_argument("solve_time_lp: empty table");
  }
  if (!(total_time > 0.0)) {
    throw std::invalid_argument("solve_time_lp: total_time must be > 0");
  }
  if (dc_table.minCoeff() < 0.0) {
    throw std::invalid_argument("solve_time_lp: negative table entry");
  }

  SolverCertificate cert;
  cert.status = SolveStatus::optimal;

  // An ER no slot can serve pins the optimum at 0; any split is optimal and
  // the uniform one is the deterministic choice.
  for (int k = 0; k < K; ++k) {
    if (dc_table.row(k).maxCoeff() == 0.0) {
      cert.objective = 0.0;
      return {Eigen::VectorXd::Constant(N, total_time / N), cert};
    }
  }

  // Variables (tau_1..tau_N, E): maximize E with E <= sum_n tau_n d_kn per
  // ER and sum tau = total_time.
  Eigen::VectorXd c = Eigen::VectorXd::Zero(N + 1);
  c(N) = 1.0;
  Eigen::MatrixXd A(K + 1, N + 1);
  Eigen::VectorXd b(K + 1);
  std::vector<bool> is_eq(K + 1, false);
  for (int k = 0; k < K; ++k) {
    A.row(k).head(N) = -dc_table.row(k);
    A(k, N) = 1.0;
    b(k) = 0.0;
  }
  A.row(K).head(N).setOnes();
  A(K, N) = 0.0;
  b(K) = total_time;
  is_eq[K] = true;

  const lp::Result r = lp::maximize(c, A, b, is_eq);
  if (!r.feasible) {
    throw std::runtime_error("solve_time_lp: unexpected infeasibility");
  }
  Eigen::VectorXd tau = r.x.head(N);
  // Clean roundoff and restore the exact time budget.
  tau = tau.cwiseMax(0.0);
  const double sum = tau.sum();
  if (sum > 0.0) tau *= total_time / sum;

  cert.objective = (dc_table * tau).minCoeff();
  cert.iterations = r.iterations;
  cert.status = r.optimal ? SolveStatus::optimal : SolveStatus::max_iters;
  cert.primal_residual = std::abs(tau.sum() - total_time);
  return {std::move(tau), cert};
}

}  // namespace wpt
