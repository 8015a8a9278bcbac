#include "wptsim/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wpt {

namespace {

constexpr double kZeroSlotFrac = 1e-12;

Eigen::MatrixXcd mrt_covariance(const ChannelSet& channels, int er, double p_max) {
  const Eigen::VectorXcd h = channels.entries.row(er).adjoint();
  return (p_max / h.squaredNorm()) * (h * h.adjoint());
}

// Objective of a slot assignment: per-ER DC energy sum_n tau_n * dc(rf_kn)
// and its minimum. Shared by evaluate and the acceptance checks inside
// time_division so both see the same numbers.
std::pair<double, Eigen::VectorXd> dc_objective(
    const std::vector<Eigen::MatrixXcd>& covs, const Eigen::VectorXd& tau,
    const ChannelSet& channels, const EhParams& eh) {
  const int num_ers = channels.num_ers();
  const int num_slots = static_cast<int>(covs.size());
  Eigen::VectorXd per = Eigen::VectorXd::Zero(num_ers);
  for (int n = 0; n < num_slots; ++n) {
    if (tau(n) == 0.0) continue;
    for (int k = 0; k < num_ers; ++k) {
      per(k) += tau(n) * dc_power(eh, rf_power_mw(channels, k, covs[n]));
    }
  }
  return {per.minCoeff(), per};
}

Schedule make_schedule(const std::vector<Eigen::MatrixXcd>& covs,
                       const Eigen::VectorXd& tau, double block_length,
                       double p_max) {
  Schedule schedule;
  schedule.block_length = block_length;
  schedule.slots.reserve(covs.size());
  for (int n = 0; n < static_cast<int>(covs.size()); ++n) {
    schedule.slots.push_back({tau(n), Covariance{covs[n], p_max}});
  }
  return schedule;
}

void check_scheme_inputs(const ChannelSet& channels, double p_max,
                         double block_length) {
  if (!(p_max > 0.0) || !std::isfinite(p_max)) {
    throw std::invalid_argument("power budget must be positive");
  }
  if (!(block_length > 0.0) || !std::isfinite(block_length)) {
    throw std::invalid_argument("block length must be positive");
  }
  if (channels.num_ers() < 1) {
    throw std::invalid_argument("need at least one ER");
  }
}

}  // namespace

void Schedule::validate() const {
  if (slots.empty()) throw std::runtime_error("schedule has no slots");
  double total = 0.0;
  for (const auto& slot : slots) {
    if (!(slot.duration >= 0.0) || !std::isfinite(slot.duration)) {
      throw std::runtime_error("slot duration must be nonnegative");
    }
    total += slot.duration;
    slot.covariance.validate();
  }
  if (std::abs(total - block_length) > 1e-9 * std::max(1.0, block_length)) {
    throw std::runtime_error("slot durations do not sum to the block length");
  }
}

SolveReport evaluate(const Schedule& schedule, const ChannelSet& channels,
                     const EhParams& eh) {
  const int num_antennas = channels.num_antennas();
  if (schedule.slots.empty()) {
    throw std::invalid_argument("schedule has no slots");
  }
  std::vector<Eigen::MatrixXcd> covs;
  Eigen::VectorXd tau(schedule.slots.size());
  covs.reserve(schedule.slots.size());
  for (int n = 0; n < static_cast<int>(schedule.slots.size()); ++n) {
    const auto& slot = schedule.slots[n];
    if (slot.covariance.matrix.rows() != num_antennas ||
        slot.covariance.matrix.cols() != num_antennas) {
      throw std::invalid_argument("covariance size does not match the antenna count");
    }
    covs.push_back(slot.covariance.matrix);
    tau(n) = slot.duration;
  }
  SolveReport report;
  auto [min_dc, per] = dc_objective(covs, tau, channels, eh);
  report.min_dc_energy = min_dc;
  report.per_er_dc_energy = std::move(per);
  report.status = SolveStatus::optimal;
  return report;
}

std::pair<Schedule, SolveReport> multibeam(const ChannelSet& channels,
                                           double p_max, double block_length,
                                           const EhParams& eh) {
  check_scheme_inputs(channels, p_max, block_length);
  auto [cov, cert] = solve_multibeam(channels, p_max);
  Schedule schedule;
  schedule.block_length = block_length;
  schedule.slots.push_back({block_length, cov});
  SolveReport report = evaluate(schedule, channels, eh);
  report.status = cert.status;
  report.objective_trace = {report.min_dc_energy};
  report.certificates = {std::move(cert)};
  return {std::move(schedule), std::move(report)};
}

std::pair<Schedule, SolveReport> tdma(const ChannelSet& channels,
                                      double p_max, double block_length,
                                      const EhParams& eh) {
  check_scheme_inputs(channels, p_max, block_length);
  const int num_ers = channels.num_ers();
  std::vector<Eigen::MatrixXcd> covs(num_ers);
  Eigen::MatrixXd dc_table(num_ers, num_ers);
  for (int n = 0; n < num_ers; ++n) {
    covs[n] = mrt_covariance(channels, n, p_max);
    for (int k = 0; k < num_ers; ++k) {
      dc_table(k, n) = dc_power(eh, rf_power_mw(channels, k, covs[n]));
    }
  }
  auto [tau, cert] = solve_time_lp(dc_table, block_length);
  Schedule schedule = make_schedule(covs, tau, block_length, p_max);
  SolveReport report = evaluate(schedule, channels, eh);
  report.status = cert.status;
  report.objective_trace = {report.min_dc_energy};
  report.certificates = {std::move(cert)};
  return {std::move(schedule), std::move(report)};
}

std::pair<Schedule, SolveReport> isotropic(int num_antennas, double p_max,
                                           double block_length,
                                           const ChannelSet& channels,
                                           const EhParams& eh) {
  check_scheme_inputs(channels, p_max, block_length);
  if (num_antennas != channels.num_antennas()) {
    throw std::invalid_argument("antenna count does not match the channel set");
  }
  Eigen::MatrixXcd cov = (p_max / num_antennas) *
      Eigen::MatrixXcd::Identity(num_antennas, num_antennas);
  Schedule schedule;
  schedule.block_length = block_length;
  schedule.slots.push_back({block_length, Covariance{std::move(cov), p_max}});
  SolveReport report = evaluate(schedule, channels, eh);
  report.objective_trace = {report.min_dc_energy};
  return {std::move(schedule), std::move(report)};
}

std::pair<Schedule, SolveReport> time_division(const ChannelSet& channels,
                                               double p_max,
                                               double block_length,
                                               const EhParams& eh,
                                               const AlgorithmSettings& settings) {
  check_scheme_inputs(channels, p_max, block_length);
  const int num_ers = channels.num_ers();
  const int num_antennas = channels.num_antennas();
  const int num_slots = settings.num_slots > 0 ? settings.num_slots : num_ers;
  const double gamma_init = settings.gamma_init > 0.0
      ? settings.gamma_init : 0.25 * eh.b_mw;
  if (!(settings.epsilon_outer > 0.0)) {
    throw std::invalid_argument("epsilon_outer must be positive");
  }
  if (!(settings.gamma_floor > 0.0) || !(settings.gamma_floor < gamma_init)) {
    throw std::invalid_argument("need 0 < gamma_floor < gamma_init");
  }
  if (settings.max_outer < 1 || settings.max_inner < 1) {
    throw std::invalid_argument("iteration caps must be at least 1");
  }

  SolveReport report;

  // Candidate starting points. TDMA needs one slot per ER, so it only enters
  // when the slot count allows it.
  auto multibeam_start = [&](std::vector<Eigen::MatrixXcd>& covs,
                             Eigen::VectorXd& tau) {
    auto [cov, cert] = solve_multibeam(channels, p_max);
    covs.assign(num_slots, cov.matrix);
    tau = Eigen::VectorXd::Constant(num_slots, block_length / num_slots);
    report.certificates.push_back(std::move(cert));
  };
  auto tdma_start = [&](std::vector<Eigen::MatrixXcd>& covs,
                        Eigen::VectorXd& tau) {
    Eigen::MatrixXd dc_table(num_ers, num_ers);
    covs.assign(num_slots, Eigen::MatrixXcd());
    for (int n = 0; n < num_ers; ++n) {
      covs[n] = mrt_covariance(channels, n, p_max);
      for (int k = 0; k < num_ers; ++k) {
        dc_table(k, n) = dc_power(eh, rf_power_mw(channels, k, covs[n]));
      }
    }
    for (int n = num_ers; n < num_slots; ++n) {
      covs[n] = (p_max / num_antennas) *
          Eigen::MatrixXcd::Identity(num_antennas, num_antennas);
    }
    auto [lp_tau, cert] = solve_time_lp(dc_table, block_length);
    tau = Eigen::VectorXd::Zero(num_slots);
    tau.head(num_ers) = lp_tau;
    report.certificates.push_back(std::move(cert));
  };

  std::vector<Eigen::MatrixXcd> covs;
  Eigen::VectorXd tau;
  switch (settings.init_strategy) {
    case AlgorithmSettings::Init::multibeam:
      multibeam_start(covs, tau);
      break;
    case AlgorithmSettings::Init::tdma:
      if (num_slots < num_ers) {
        throw std::invalid_argument("tdma start needs at least one slot per ER");
      }
      tdma_start(covs, tau);
      break;
    case AlgorithmSettings::Init::uniform:
      covs.assign(num_slots, (p_max / num_antennas) *
          Eigen::MatrixXcd::Identity(num_antennas, num_antennas));
      tau = Eigen::VectorXd::Constant(num_slots, block_length / num_slots);
      break;
    case AlgorithmSettings::Init::best_of_baselines: {
      multibeam_start(covs, tau);
      if (num_slots >= num_ers) {
        std::vector<Eigen::MatrixXcd> alt_covs;
        Eigen::VectorXd alt_tau;
        tdma_start(alt_covs, alt_tau);
        if (dc_objective(alt_covs, alt_tau, channels, eh).first >
            dc_objective(covs, tau, channels, eh).first) {
          covs = std::move(alt_covs);
          tau = std::move(alt_tau);
        }
      }
      break;
    }
  }

  double objective = dc_objective(covs, tau, channels, eh).first;
  report.objective_trace.push_back(objective);

  bool converged = false;
  for (int outer = 0; outer < settings.max_outer; ++outer) {
    ++report.outer_iterations;
    const double round_start = objective;

    // Covariance pass: trust-region steps on the slots that carry time.
    std::vector<int> active;
    for (int n = 0; n < num_slots; ++n) {
      if (tau(n) >= kZeroSlotFrac * block_length) active.push_back(n);
    }
    double gamma = gamma_init;
    int inner = 0;
    while (gamma > settings.gamma_floor && inner < settings.max_inner &&
           !active.empty()) {
      ++inner;
      const int width = static_cast<int>(active.size());
      Eigen::MatrixXd centers(num_ers, width);
      Eigen::MatrixXd coefs(num_ers, width);
      Eigen::VectorXd durations(width);
      for (int j = 0; j < width; ++j) {
        durations(j) = tau(active[j]);
        for (int k = 0; k < num_ers; ++k) {
          centers(k, j) = rf_power_mw(channels, k, covs[active[j]]);
          coefs(k, j) = dc_power_derivative(eh, centers(k, j));
        }
      }
      auto [step, cert] = solve_sca_subproblem(coefs, centers, gamma, channels,
                                               p_max, durations);
      report.certificates.push_back(cert);
      if (cert.status == SolveStatus::infeasible ||
          static_cast<int>(step.size()) != width) {
        gamma *= 0.5;
        continue;
      }
      std::vector<Eigen::MatrixXcd> candidate = covs;
      for (int j = 0; j < width; ++j) {
        candidate[active[j]] = step[j].matrix;
      }
      const double candidate_objective =
          dc_objective(candidate, tau, channels, eh).first;
      if (candidate_objective > objective) {
        covs = std::move(candidate);
        objective = candidate_objective;
        report.objective_trace.push_back(objective);
      } else {
        gamma *= 0.5;
      }
    }
    report.inner_iterations += inner;

    // Duration pass: exact LP over all slots at the current covariances.
    Eigen::MatrixXd dc_table(num_ers, num_slots);
    for (int n = 0; n < num_slots; ++n) {
      for (int k = 0; k < num_ers; ++k) {
        dc_table(k, n) = dc_power(eh, rf_power_mw(channels, k, covs[n]));
      }
    }
    auto [lp_tau, lp_cert] = solve_time_lp(dc_table, block_length);
    report.certificates.push_back(std::move(lp_cert));
    const double lp_objective = dc_objective(covs, lp_tau, channels, eh).first;
    if (lp_objective > objective) {
      tau = std::move(lp_tau);
      objective = lp_objective;
      report.objective_trace.push_back(objective);
    }

    if (objective - round_start < settings.epsilon_outer) {
      converged = true;
      break;
    }
  }

  Schedule schedule = make_schedule(covs, tau, block_length, p_max);
  auto [min_dc, per] = dc_objective(covs, tau, channels, eh);
  report.min_dc_energy = min_dc;
  report.per_er_dc_energy = std::move(per);
  report.status = converged ? SolveStatus::optimal : SolveStatus::max_iters;
  return {std::move(schedule), std::move(report)};
}

}  // namespace wpt
