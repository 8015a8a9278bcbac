#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wptsim/harness.hpp"

namespace {

enum class LogLevel { quiet, info, debug };

LogLevel log_level() {
  const char* env = std::getenv("WPTSIM_LOG");
  if (env == nullptr) return LogLevel::info;
  const std::string v(env);
  if (v == "quiet" || v == "0") return LogLevel::quiet;
  if (v == "debug" || v == "2") return LogLevel::debug;
  return LogLevel::info;
}

void info(const std::string& msg) {
  if (log_level() != LogLevel::quiet) std::cerr << msg << '\n';
}

void debug(const std::string& msg) {
  if (log_level() == LogLevel::debug) std::cerr << msg << '\n';
}

wpt::ScenarioConfig load_config(const std::string& path) {
  if (path.empty()) {
    info("no config given, using built-in defaults");
    return wpt::ScenarioConfig{};
  }
  info("loading config from " + path);
  return wpt::ScenarioConfig::from_json_file(path);
}

void apply_overrides(wpt::ScenarioConfig& config, bool seed_set,
                     std::uint64_t seed, int trials,
                     const std::vector<std::string>& schemes) {
  if (seed_set) config.seed = seed;
  if (trials > 0) config.num_trials = trials;
  if (!schemes.empty()) config.schemes = schemes;
  config.validate();
}

int run_sweep_command(const std::string& config_path, const std::string& out_dir,
                      bool seed_set, std::uint64_t seed, int trials,
                      int threads, const std::vector<std::string>& schemes) {
  wpt::ScenarioConfig config = load_config(config_path);
  apply_overrides(config, seed_set, seed, trials, schemes);
  debug("effective config:\n" + config.to_json_text());
  info("sweep: " + std::to_string(config.p_max_dbm_grid.size()) + " power x " +
       std::to_string(config.m_grid.size()) + " antenna grid points, " +
       std::to_string(config.num_trials) + " trials each");
  const wpt::SweepResult result = wpt::run_sweep(config, threads);

  std::filesystem::create_directories(out_dir);
  const auto raw_path = std::filesystem::path(out_dir) / "raw.csv";
  const auto agg_path = std::filesystem::path(out_dir) / "aggregate.csv";
  std::ofstream raw(raw_path, std::ios::binary);
  if (!raw) {
    std::cerr << "cannot write " << raw_path << '\n';
    return 1;
  }
  wpt::write_raw_csv(result.rows, raw);
  std::ofstream agg(agg_path, std::ios::binary);
  if (!agg) {
    std::cerr << "cannot write " << agg_path << '\n';
    return 1;
  }
  wpt::write_aggregate_csv(result.aggregates, agg);
  info("wrote " + raw_path.string() + " (" + std::to_string(result.rows.size()) +
       " rows) and " + agg_path.string());
  for (const wpt::AggregateRow& row : result.aggregates) {
    std::cout << row.scheme << " @ " << row.p_max_dbm << " dBm, M = "
              << row.num_antennas << ": mean min DC " << row.mean_min_dc_mw
              << " mW (stderr " << row.stderr_mw << ", n = " << row.n << ")\n";
  }
  return 0;
}

int run_solve_command(const std::string& config_path, bool seed_set,
                      std::uint64_t seed,
                      const std::vector<std::string>& schemes) {
  wpt::ScenarioConfig config = load_config(config_path);
  apply_overrides(config, seed_set, seed, 0, schemes);
  config.num_trials = 1;
  config.p_max_dbm_grid.resize(1);
  config.m_grid.resize(1);
  debug("effective config:\n" + config.to_json_text());

  const double p_dbm = config.p_max_dbm_grid[0];
  const int m = config.m_grid[0];
  const wpt::ChannelSet cs = wpt::sweep_channels(config, m, 0);
  const double p_watts = wpt::dbm_to_watts(p_dbm);
  std::cout << "instance: K = " << cs.num_ers() << ", M = " << m
            << ", p_max = " << p_dbm << " dBm (" << p_watts
            << " W), seed = " << config.seed << "\n";

  for (const std::string& scheme : config.schemes) {
    std::pair<wpt::Schedule, wpt::SolveReport> out;
    if (scheme == "multibeam") {
      out = wpt::multibeam(cs, p_watts, config.block_length, config.eh);
    } else if (scheme == "tdma") {
      out = wpt::tdma(cs, p_watts, config.block_length, config.eh);
    } else if (scheme == "isotropic") {
      out = wpt::isotropic(m, p_watts, config.block_length, cs, config.eh);
    } else {
      out = wpt::time_division(cs, p_watts, config.block_length, config.eh,
                               config.algorithm);
    }
    const wpt::SolveReport& rep = out.second;
    std::cout << "\n" << scheme << ": min DC "
              << rep.min_dc_energy / config.block_length << " mW, status "
              << wpt::to_string(rep.status) << ", outer " << rep.outer_iterations
              << ", inner " << rep.inner_iterations << "\n  durations:";
    for (const auto& slot : out.first.slots) std::cout << ' ' << slot.duration;
    std::cout << "\n  per-ER DC (mW):";
    for (int k = 0; k < rep.per_er_dc_energy.size(); ++k) {
      std::cout << ' ' << rep.per_er_dc_energy(k) / config.block_length;
    }
    std::cout << "\n  certificates:\n";
    for (const wpt::SolverCertificate& cert : rep.certificates) {
      std::cout << "    objective " << cert.objective << ", gap bound "
                << cert.duality_gap_bound << ", residual "
                << cert.primal_residual << ", iterations " << cert.iterations
                << ", status " << wpt::to_string(cert.status) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-division energy beamforming simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int trials = 0, threads = 0;
  std::vector<std::string> schemes;

  CLI::App* example1 = app.add_subcommand(
      "example1", "reproduce the fixed two-ER worked example");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Monte Carlo sweep over transmit power and antenna count");
  sweep->add_option("--config", config_path, "JSON scenario config");
  sweep->add_option("--out", out_dir, "output directory for raw/aggregate CSV");
  sweep->add_option("--seed", seed, "override the config seed")
      ->each([&](const std::string&) { seed_set = true; });
  sweep->add_option("--trials", trials, "override the trial count");
  sweep->add_option("--threads", threads, "worker threads (0 = hardware)");
  sweep->add_option("--schemes", schemes,
                    "subset of multibeam,tdma,isotropic,time_division")
      ->delimiter(',');

  CLI::App* solve = app.add_subcommand(
      "solve", "solve one sampled instance and print certificates");
  solve->add_option("--config", config_path, "JSON scenario config");
  solve->add_option("--seed", seed, "override the config seed")
      ->each([&](const std::string&) { seed_set = true; });
  solve->add_option("--schemes", schemes,
                    "subset of multibeam,tdma,isotropic,time_division")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (example1->parsed()) {
      const wpt::Example1Report report = wpt::run_example1(&std::cout);
      return report.ok ? 0 : 1;
    }
    if (sweep->parsed()) {
      return run_sweep_command(config_path, out_dir, seed_set, seed, trials,
                               threads, schemes);
    }
    return run_solve_command(config_path, seed_set, seed, schemes);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
