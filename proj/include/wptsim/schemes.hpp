#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "wptsim/channel.hpp"
#include "wptsim/eh_model.hpp"
#include "wptsim/solver_kernels.hpp"

namespace wpt {

/// One transmission block: ordered (duration, covariance) slots that
/// partition block_length.
struct ScheduleSlot {
  double duration = 0.0;
  Covariance covariance;
};

struct Schedule {
  std::vector<ScheduleSlot> slots;
  double block_length = 0.0;

  /// Throws unless durations are >= 0 and sum to block_length (1e-9) and
  /// every covariance passes its own checks.
  void validate() const;
};

struct SolveReport {
  double min_dc_energy = 0.0;           // mW * time units of block_length
  Eigen::VectorXd per_er_dc_energy;
  int outer_iterations = 0;
  int inner_iterations = 0;             // subproblem solves, total
  std::vector<double> objective_trace;  // accepted objective values, ascending
  SolveStatus status = SolveStatus::optimal;
  std::vector<SolverCertificate> certificates;
};

struct AlgorithmSettings {
  double epsilon_outer = 1e-6;  // stop when an outer round gains less
  double gamma_floor = 1e-3;    // mW; inner loop ends at this trust radius
  double gamma_init = 0.0;      // mW; 0 = auto: a quarter of the EH inflection point
  int max_outer = 50;
  int max_inner = 60;
  enum class Init { best_of_baselines, tdma, multibeam, uniform };
  Init init_strategy = Init::best_of_baselines;
  int num_slots = 0;            // 0 = one slot per ER
};

/// Average DC power of a schedule: per ER, sum_n tau_n * dc(rf_mw(k, S_n));
/// min over ERs is the objective all schemes compare on.
SolveReport evaluate(const Schedule& schedule, const ChannelSet& channels,
                     const EhParams& eh);

/// Single fairness-optimal covariance held for the whole block.
std::pair<Schedule, SolveReport> multibeam(const ChannelSet& channels,
                                           double p_max, double block_length,
                                           const EhParams& eh);

/// One matched-filter slot per ER with LP-optimized durations.
std::pair<Schedule, SolveReport> tdma(const ChannelSet& channels,
                                      double p_max, double block_length,
                                      const EhParams& eh);

/// Uniform power over space: a single slot with (p_max/M) I.
std::pair<Schedule, SolveReport> isotropic(int num_antennas, double p_max,
                                           double block_length,
                                           const ChannelSet& channels,
                                           const EhParams& eh);

/// Per-slot covariances and durations optimized alternately: trust-region
/// linearization steps over the covariances (accepted only when the true
/// objective increases, radius halved otherwise), then the exact time LP.
std::pair<Schedule, SolveReport> time_division(const ChannelSet& channels,
                                               double p_max,
                                               double block_length,
                                               const EhParams& eh,
                                               const AlgorithmSettings& settings = {});

}  // namespace wpt
