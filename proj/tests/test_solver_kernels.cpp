#include "wptsim/solver_kernels.hpp"

#include <cmath>
#include <random>

#include "../src/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "wptsim/channel.hpp"

using namespace wpt;

namespace {

// Generic complex Gaussian channel rows for solver stress tests (unit scale,
// O(1) magnitudes; the link-budget scaling path is covered by the fixed
// two-user scenario).
ChannelSet random_channels(int K, int M, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Eigen::MatrixXcd h(K, M);
  for (int k = 0; k < K; ++k) {
    for (int m = 0; m < M; ++m) {
      double re, im;
      normal_pair(gen, re, im);
      h(k, m) = std::complex<double>(re, im) / std::sqrt(2.0);
    }
  }
  return ChannelSet::create(std::move(h), 1.0);
}

}  // namespace

TEST_CASE("fairness beamforming splits power across orthogonal users") {
  const ChannelSet cs = example1_channels();
  const auto [cov, cert] = solve_multibeam(cs, 15.0, 1e-6);
  CHECK(cert.status == SolveStatus::optimal);
  CHECK(std::abs(cert.objective - 1.5) < 1e-3);
  CHECK(cert.duality_gap_bound <= 1e-6);
  cov.validate();
  for (int k = 0; k < 2; ++k) {
    CHECK(rf_power_mw(cs, k, cov.matrix) == doctest::Approx(1.5).epsilon(1e-4));
  }
  // Symmetric instance, symmetric multipliers.
  REQUIRE(cert.dual_weights.size() == 2);
  CHECK(cert.dual_weights(0) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("single user reduces to the matched filter") {
  const ChannelSet cs = random_channels(1, 4, 101);
  const double p_max = 3.0;
  const auto [cov, cert] = solve_multibeam(cs, p_max, 1e-8);
  const double expect = p_max * cs.entries.row(0).squaredNorm();
  CHECK(cert.status == SolveStatus::optimal);
  CHECK(cert.objective == doctest::Approx(expect).epsilon(1e-6));
  // The optimal covariance is the rank-1 beam along h.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(cov.matrix);
  const Eigen::VectorXcd top = eig.eigenvectors().col(3);
  const Eigen::VectorXcd h = cs.entries.row(0).adjoint();
  CHECK(std::norm(top.dot(h)) / h.squaredNorm() ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("three users over two antennas match the ball-grid search") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const ChannelSet cs = random_channels(3, 2, seed);
    const double p_max = 4.0;
    const auto [cov, cert] = solve_multibeam(cs, p_max, 1e-8);
    REQUIRE(cert.status == SolveStatus::optimal);
    cov.validate();
    const double grid = oracle::multibeam_2x2(cs, p_max);
    const double upper = oracle::multibeam_dual_upper_2x2(cs, p_max, 1e-3);
    CHECK(std::abs(cert.objective - grid) <= 5e-3 * cert.objective);
    CHECK(cert.objective <= upper * (1.0 + 1e-6));
  }
}

TEST_CASE("objective scales linearly with the power budget") {
  const ChannelSet cs = random_channels(4, 3, 21);
  const auto [c1, cert1] = solve_multibeam(cs, 2.0, 1e-8);
  const auto [c2, cert2] = solve_multibeam(cs, 4.0, 1e-8);
  CHECK(cert2.objective ==
        doctest::Approx(2.0 * cert1.objective).epsilon(1e-6));
}

TEST_CASE("objective is invariant under ER permutation") {
  const ChannelSet cs = random_channels(5, 3, 31);
  Eigen::MatrixXcd perm = cs.entries;
  perm.row(0).swap(perm.row(3));
  perm.row(1).swap(perm.row(4));
  const ChannelSet cs2 = ChannelSet::create(perm, cs.rf_unit_scale);
  const auto [c1, cert1] = solve_multibeam(cs, 5.0, 1e-8);
  const auto [c2, cert2] = solve_multibeam(cs2, 5.0, 1e-8);
  CHECK(cert1.objective == doctest::Approx(cert2.objective).epsilon(1e-7));
}

TEST_CASE("certificates carry a valid minimax dual bound") {
  std::mt19937_64 gen(404);
  for (int inst = 0; inst < 10; ++inst) {
    const int K = 2 + static_cast<int>(gen() % 4);
    const int M = 2 + static_cast<int>(gen() % 3);
    const ChannelSet cs = random_channels(K, M, gen());
    const double p_max = 1.0 + 0.5 * static_cast<double>(gen() % 8);
    const auto [cov, cert] = solve_multibeam(cs, p_max, 1e-6);
    REQUIRE(cert.status == SolveStatus::optimal);
    cov.validate();
    REQUIRE(cert.dual_weights.size() == K);
    CHECK(cert.dual_weights.minCoeff() >= 0.0);
    CHECK(cert.dual_weights.sum() == doctest::Approx(1.0).epsilon(1e-9));
    Eigen::MatrixXcd combo = Eigen::MatrixXcd::Zero(M, M);
    for (int k = 0; k < K; ++k) {
      const Eigen::VectorXcd h = cs.entries.row(k).adjoint();
      combo += cert.dual_weights(k) * h * h.adjoint();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
        combo, Eigen::EigenvaluesOnly);
    const double upper =
        p_max * cs.rf_unit_scale * eig.eigenvalues()(M - 1);
    CHECK(cert.objective <= upper * (1.0 + 1e-5) + 1e-9);
    CHECK(upper - cert.objective <= 1e-5 * std::max(1.0, cert.objective));
  }
}

TEST_CASE("inactive trust region reduces to fairness beamforming") {
  const ChannelSet cs = random_channels(3, 3, 55);
  const double p_max = 5.0;
  const auto [cov, base] = solve_multibeam(cs, p_max, 1e-8);
  Eigen::MatrixXd coefs = Eigen::MatrixXd::Ones(3, 1);
  Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(3, 1);
  Eigen::VectorXd tau = Eigen::VectorXd::Ones(1);
  const auto [covs, cert] =
      solve_sca_subproblem(coefs, centers, 1e12, cs, p_max, tau, 1e-8);
  REQUIRE(cert.status == SolveStatus::optimal);
  REQUIRE(covs.size() == 1);
  covs[0].validate();
  CHECK(cert.objective == doctest::Approx(base.objective).epsilon(1e-6));
}

TEST_CASE("degenerate trust region pins the quadratic forms") {
  const ChannelSet cs = random_channels(2, 3, 66);
  const double p_max = 4.0;
  const int N = 2;
  // Feasible centers: quadratic forms of scaled identity covariances.
  Eigen::MatrixXd centers(2, N);
  for (int n = 0; n < N; ++n) {
    const double t = (n + 1) * p_max / 4.0;
    for (int k = 0; k < 2; ++k) {
      centers(k, n) = t / 3.0 * cs.entries.row(k).squaredNorm();
    }
  }
  Eigen::MatrixXd coefs(2, N);
  coefs << 0.7, 0.2, 0.4, 0.9;
  Eigen::VectorXd tau(N);
  tau << 0.5, 0.5;
  const auto [covs, cert] =
      solve_sca_subproblem(coefs, centers, 0.0, cs, p_max, tau, 1e-8);
  REQUIRE(cert.status == SolveStatus::optimal);
  double lin = oracle::kInf;
  for (int k = 0; k < 2; ++k) {
    double acc = 0.0;
    for (int n = 0; n < N; ++n) acc += tau(n) * coefs(k, n) * centers(k, n);
    lin = std::min(lin, acc);
  }
  CHECK(cert.objective == doctest::Approx(lin).epsilon(1e-5));
}

TEST_CASE("two-slot subproblem matches the Pareto-front grid search") {
  for (std::uint64_t seed : {7u, 8u}) {
    const ChannelSet cs = random_channels(2, 2, seed);
    oracle::ScaInstance in;
    in.p_max = 3.0;
    in.durations = Eigen::Vector2d(0.6, 0.4);
    in.coefs = Eigen::MatrixXd(2, 2);
    in.coefs << 0.8, 0.3, 0.25, 0.9;
    // Centers at the isotropic covariance's forms, a binding trust radius.
    in.centers = Eigen::MatrixXd(2, 2);
    for (int k = 0; k < 2; ++k) {
      const double iso = 0.5 * in.p_max * cs.entries.row(k).squaredNorm() / 2.0;
      in.centers(k, 0) = iso;
      in.centers(k, 1) = 0.8 * iso;
    }
    in.gamma = 0.6;
    const auto [covs, cert] = solve_sca_subproblem(
        in.coefs, in.centers, in.gamma, cs, in.p_max, in.durations, 1e-8);
    REQUIRE(cert.status == SolveStatus::optimal);
    for (const auto& c : covs) c.validate();
    const double grid = oracle::sca_pair_grid(cs, in);
    CHECK(std::abs(cert.objective - grid) <= 1e-2 * std::abs(grid));
  }
}

TEST_CASE("unreachable trust region reports infeasible") {
  const ChannelSet cs = random_channels(2, 2, 77);
  const double p_max = 1.0;
  Eigen::MatrixXd coefs = Eigen::MatrixXd::Ones(2, 1);
  // Demand far beyond the per-slot spectral bound.
  Eigen::MatrixXd centers =
      Eigen::MatrixXd::Constant(2, 1, 100.0 * p_max *
                                          cs.entries.row(0).squaredNorm());
  Eigen::VectorXd tau = Eigen::VectorXd::Ones(1);
  const auto [covs, cert] =
      solve_sca_subproblem(coefs, centers, 0.5, cs, p_max, tau, 1e-8);
  CHECK(cert.status == SolveStatus::infeasible);
  CHECK(covs.empty());
}

TEST_CASE("time allocation reproduces the two-slot equal split") {
  Eigen::MatrixXd table(2, 2);
  table << 1.9666, 0.0, 0.0, 1.9666;
  const auto [tau, cert] = solve_time_lp(table, 1.0, 1e-9);
  CHECK(cert.status == SolveStatus::optimal);
  CHECK(tau(0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(tau(1) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(cert.objective == doctest::Approx(0.9833).epsilon(1e-4));
}

TEST_CASE("single ER takes the best slot outright") {
  Eigen::MatrixXd table(1, 3);
  table << 0.2, 0.9, 0.6;
  const auto [tau, cert] = solve_time_lp(table, 2.0, 1e-9);
  CHECK(tau(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cert.objective == doctest::Approx(1.8).epsilon(1e-12));
}

TEST_CASE("random tables match the simplex grid search") {
  std::mt19937_64 gen(909);
  for (int inst = 0; inst < 8; ++inst) {
    Eigen::MatrixXd table(3, 3);
    for (int i = 0; i < 9; ++i) {
      table(i / 3, i % 3) = 5.0 * uniform01(gen);
    }
    const double T = 1.0;
    const auto [tau, cert] = solve_time_lp(table, T, 1e-9);
    REQUIRE(cert.status == SolveStatus::optimal);
    CHECK(tau.minCoeff() >= 0.0);
    CHECK(std::abs(tau.sum() - T) <= 1e-9);
    const double grid = oracle::time_lp_grid(table, T, 1e-3);
    CHECK(std::abs(cert.objective - grid) <=
          1e-3 * std::max(1.0, std::abs(grid)));
    // The optimum can never beat any single ER's best slot.
    for (int k = 0; k < 3; ++k) {
      CHECK(cert.objective <= table.row(k).maxCoeff() * T + 1e-12);
    }
  }
}

TEST_CASE("an unserved ER forces the uniform fallback") {
  Eigen::MatrixXd table(2, 3);
  table << 1.0, 2.0, 3.0, 0.0, 0.0, 0.0;
  const auto [tau, cert] = solve_time_lp(table, 3.0, 1e-9);
  CHECK(cert.objective == 0.0);
  for (int n = 0; n < 3; ++n) {
    CHECK(tau(n) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("kernel input validation") {
  const ChannelSet cs = random_channels(2, 2, 5);
  CHECK_THROWS_AS(solve_multibeam(cs, 0.0, 1e-6), std::invalid_argument);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Constant(2, 1, -0.5);
  Eigen::VectorXd tau = Eigen::VectorXd::Ones(1);
  CHECK_THROWS_AS(
      solve_sca_subproblem(bad, Eigen::MatrixXd::Zero(2, 1), 1.0, cs, 1.0,
                           tau, 1e-6),
      std::invalid_argument);
  CHECK_THROWS_AS(solve_time_lp(Eigen::MatrixXd::Constant(1, 1, -1.0), 1.0,
                                1e-9),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_time_lp(Eigen::MatrixXd::Ones(1, 1), 0.0, 1e-9),
                  std::invalid_argument);
}
