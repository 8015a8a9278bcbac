#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wptsim/channel.hpp"
#include "wptsim/eh_model.hpp"
#include "wptsim/schemes.hpp"

namespace wpt {

/// Everything a sweep needs, loadable from a versioned JSON file. Defaults
/// reproduce the standard simulation setup: K = 30 ERs at 4 m, Rician factor
/// 5 dB, 30-44 dBm transmit power, M = 4 antennas, 200 trials per point.
struct ScenarioConfig {
  EhParams eh = EhParams::defaults();
  ChannelModelParams channel = ChannelModelParams::defaults();
  std::vector<double> p_max_dbm_grid = {30, 32, 34, 36, 38, 40, 42, 44};
  std::vector<int> m_grid = {4};
  int num_trials = 200;
  std::uint64_t seed = 12345;
  double block_length = 1.0;
  std::vector<std::string> schemes = {"multibeam", "tdma", "isotropic",
                                      "time_division"};
  AlgorithmSettings algorithm;

  /// Throws std::invalid_argument on empty grids, bad trial counts, unknown
  /// scheme names, or a non-positive block length.
  void validate() const;

  static ScenarioConfig from_json_text(const std::string& text);
  static ScenarioConfig from_json_file(const std::string& path);
  std::string to_json_text() const;
};

double dbm_to_watts(double dbm);

std::string to_string(SolveStatus status);

/// The channel realization a sweep uses for (num_antennas, trial): seeded
/// from (config seed, M, trial) only, so every transmit power on the grid
/// sees the same draws.
ChannelSet sweep_channels(const ScenarioConfig& config, int num_antennas,
                          int trial);

/// One (grid point, trial, scheme) outcome.
struct SweepRow {
  double p_max_dbm = 0.0;
  int num_antennas = 0;
  int trial = 0;
  std::string scheme;
  double min_dc_mw = 0.0;   // min over ERs of time-averaged DC power
  double mean_dc_mw = 0.0;  // mean over ERs
  int outer_iters = 0;
  int inner_iters = 0;
  std::string status;
  double wall_ms = 0.0;
};

struct AggregateRow {
  double p_max_dbm = 0.0;
  int num_antennas = 0;
  std::string scheme;
  double mean_min_dc_mw = 0.0;
  double stderr_mw = 0.0;
  int n = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;            // ordered by (grid point, trial, scheme)
  std::vector<AggregateRow> aggregates;  // ordered by (grid point, scheme)
};

/// Monte Carlo sweep over the (p_max, M) grid. Channel draws depend on
/// (seed, M, trial) only, so the power axis reuses the same realizations.
/// Trials run on a bounded worker pool; rows come back in a fixed order no
/// matter the thread count. A failing trial becomes a row with an error
/// status, never an aborted sweep. num_threads <= 0 picks the hardware count.
SweepResult run_sweep(const ScenarioConfig& config, int num_threads = 0);

std::vector<AggregateRow> aggregate_rows(const std::vector<SweepRow>& rows);

void write_raw_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void write_aggregate_csv(const std::vector<AggregateRow>& rows,
                         std::ostream& out);

/// Per-scheme outcome on the fixed two-ER scenario (15 W, unit block).
struct Example1Row {
  std::string scheme;
  Eigen::VectorXd durations;  // per slot
  Eigen::MatrixXd rf_mw;      // K x slots, RF power while the slot is active
  Eigen::VectorXd dc_mw;      // per ER, time-averaged
  double min_dc_mw = 0.0;
};

struct Example1Report {
  std::vector<Example1Row> rows;
  std::vector<std::string> failures;  // "expected ... got ..." mismatches
  bool ok = true;
};

/// Runs all four schemes on the fixed scenario, checks the known values
/// (multi-beam 1.5 mW RF / 0.9127 mW DC per ER, rotation 0.5/0.5 split with
/// 0.9833 mW, time division at least as good), and optionally pretty-prints
/// the outcome. Mismatches land in `failures` instead of throwing.
Example1Report run_example1(std::ostream* out = nullptr);

}  // namespace wpt
