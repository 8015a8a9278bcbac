#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wptsim/channel.hpp"
#include "wptsim/eh_model.hpp"
#include "wptsim/harness.hpp"
#include "wptsim/schemes.hpp"
#include "wptsim/solver_kernels.hpp"

namespace {

bool g_pass = true;

void report(int crit, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s - %s\n", crit, ok ? "PASS" : "FAIL",
              detail.c_str());
  if (!ok) g_pass = false;
}

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

double min_rf_mw(const wpt::ChannelSet& cs, const Eigen::MatrixXcd& S) {
  double lo = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cs.num_ers(); ++k) {
    lo = std::min(lo, wpt::rf_power_mw(cs, k, S));
  }
  return lo;
}

void curve_points(int crit) {
  const wpt::EhParams eh = wpt::EhParams::defaults();
  const double at_half = wpt::dc_power(eh, 1.5);
  const double at_split = wpt::dc_power(eh, 3.0);
  const bool ok =
      std::abs(at_half - 0.9127) <= 1e-3 && std::abs(at_split - 1.9666) <= 1e-3;
  report(crit, ok,
         fmt("dc(1.5 mW) = %.6f (want 0.9127), dc(3.0 mW) = %.6f (want 1.9666)",
             at_half, at_split));
}

void two_er_multibeam(int crit) {
  const wpt::ChannelSet cs = wpt::example1_channels();
  auto [cov, cert] = wpt::solve_multibeam(cs, 15.0);
  const double rf = min_rf_mw(cs, cov.matrix);
  const double dc = wpt::dc_power(wpt::EhParams::defaults(), rf);
  const bool ok = cert.status == wpt::SolveStatus::optimal &&
                  std::abs(rf - 1.5) <= 1e-3 && std::abs(dc - 0.9127) <= 1e-3;
  report(crit, ok,
         fmt("min RF = %.6f mW (want 1.5), min DC = %.6f mW (want 0.9127)", rf,
             dc));
}

void two_er_tdma(int crit) {
  const wpt::ChannelSet cs = wpt::example1_channels();
  auto [schedule, rep] = wpt::tdma(cs, 15.0, 1.0, wpt::EhParams::defaults());
  double tau_err = 0.0;
  for (const auto& slot : schedule.slots) {
    tau_err = std::max(tau_err, std::abs(slot.duration - 0.5));
  }
  const bool ok = tau_err <= 1e-6 && std::abs(rep.min_dc_energy - 0.9833) <= 1e-3;
  report(crit, ok,
         fmt("durations off equal split by %.2e (want <= 1e-6), min DC = %.6f "
             "mW (want 0.9833)",
             tau_err, rep.min_dc_energy));
}

// The printed two-slot optimum 0.9833 is a four-decimal rounding that lands
// above the exact value 0.5*dc(3.0) = 0.98328...; the bound checked here is
// the exact optimum.
void two_er_time_division(int crit) {
  const wpt::ChannelSet cs = wpt::example1_channels();
  auto [schedule, rep] =
      wpt::time_division(cs, 15.0, 1.0, wpt::EhParams::defaults());
  const double exact = 0.5 * wpt::dc_power(wpt::EhParams::defaults(), 3.0);
  bool monotone = true;
  for (std::size_t i = 1; i < rep.objective_trace.size(); ++i) {
    if (rep.objective_trace[i] < rep.objective_trace[i - 1]) monotone = false;
  }
  const bool ok = rep.min_dc_energy >= exact - 1e-6 && monotone;
  report(crit, ok,
         fmt("min DC = %.9f mW (exact two-slot optimum %.9f, printed as "
             "0.9833), trace %s",
             rep.min_dc_energy, exact,
             monotone ? "non-decreasing" : "NOT monotone"));
}

void dominance_suite(int crit) {
  const wpt::EhParams eh = wpt::EhParams::defaults();
  const wpt::ChannelModelParams base = wpt::ChannelModelParams::defaults();
  double worst_td = std::numeric_limits<double>::infinity();
  double worst_mb = std::numeric_limits<double>::infinity();
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    const int m = (i % 2 == 0) ? 2 : 4;
    const int k = 2 + i % 3;
    const double p_dbm = (i % 4 < 2) ? 34.0 : 44.0;
    const double p = wpt::dbm_to_watts(p_dbm);
    const wpt::ChannelModelParams model = wpt::ChannelModelParams::create(
        base.rician_factor, base.distance_m, base.ref_gain, base.pathloss_exp,
        base.tx_gain_dbi, base.rx_gain_dbi, base.element_spacing_ratio, k, m);
    const wpt::ChannelSet cs = wpt::sample_channels(model, 9000 + i);
    const double td = wpt::time_division(cs, p, 1.0, eh).second.min_dc_energy;
    const double mb = wpt::multibeam(cs, p, 1.0, eh).second.min_dc_energy;
    const double alt = wpt::tdma(cs, p, 1.0, eh).second.min_dc_energy;
    const double iso = wpt::isotropic(m, p, 1.0, cs, eh).second.min_dc_energy;
    worst_td = std::min(worst_td, td - std::max(mb, alt));
    worst_mb = std::min(worst_mb, mb - iso);
    if (td < std::max(mb, alt) - 1e-6 || mb < iso - 1e-9) ++failures;
  }
  report(crit, failures == 0,
         fmt("%d of 100 instances violated; worst slack vs best baseline "
             "%.3e mW, worst directional-vs-isotropic slack %.3e mW",
             failures, worst_td, worst_mb));
}

wpt::ScenarioConfig sweep_config(std::vector<double> p_grid,
                                 std::vector<int> m_grid, int trials,
                                 std::vector<std::string> schemes) {
  wpt::ScenarioConfig cfg;
  cfg.p_max_dbm_grid = std::move(p_grid);
  cfg.m_grid = std::move(m_grid);
  cfg.num_trials = trials;
  cfg.schemes = std::move(schemes);
  return cfg;
}

double aggregate_mean(const wpt::SweepResult& result, double p_dbm, int m,
                      const std::string& scheme) {
  for (const auto& row : result.aggregates) {
    if (row.p_max_dbm == p_dbm && row.num_antennas == m &&
        row.scheme == scheme) {
      return row.mean_min_dc_mw;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

void high_power_convergence(int crit) {
  const auto cfg =
      sweep_config({42.0}, {4}, 100, {"multibeam", "time_division"});
  const wpt::SweepResult result = wpt::run_sweep(cfg, 0);
  const double mb = aggregate_mean(result, 42.0, 4, "multibeam");
  const double td = aggregate_mean(result, 42.0, 4, "time_division");
  const double rel = std::abs(td - mb) / mb;
  report(crit, rel <= 0.01,
         fmt("42 dBm, 100 trials: mean multibeam %.6f mW, mean time-division "
             "%.6f mW, rel gap %.2e (want <= 1e-2)",
             mb, td, rel));
}

void low_power_gain(int crit) {
  const auto cfg =
      sweep_config({38.0}, {4}, 200, {"multibeam", "time_division"});
  const wpt::SweepResult result = wpt::run_sweep(cfg, 0);
  const double mb = aggregate_mean(result, 38.0, 4, "multibeam");
  const double td = aggregate_mean(result, 38.0, 4, "time_division");
  const double gain = td / mb - 1.0;
  report(crit, gain >= 0.02 && gain <= 0.15,
         fmt("38 dBm, 200 trials: mean multibeam %.6f mW, mean time-division "
             "%.6f mW, gain %.2f%% (want 2%% to 15%%)",
             mb, td, 100.0 * gain));
}

void kernel_oracles(int crit) {
  Eigen::MatrixXcd entries = Eigen::MatrixXcd::Identity(2, 2);
  const wpt::ChannelSet cs = wpt::ChannelSet::create(entries, 1e3);
  auto [cov, cert] = wpt::solve_multibeam(cs, 3e-3);
  const double want = 1.5;
  const double got = min_rf_mw(cs, cov.matrix);
  const bool split_ok = std::abs(got - want) <= 1e-3 * want;

  std::mt19937_64 gen(4242);
  std::uniform_real_distribution<double> value(0.1, 5.0);
  double worst_rel = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int k = 2 + t % 3;
    Eigen::MatrixXd table(k, 2);
    for (int r = 0; r < k; ++r) {
      table(r, 0) = value(gen);
      table(r, 1) = value(gen);
    }
    auto [tau, lp_cert] = wpt::solve_time_lp(table, 1.0);
    double lp = std::numeric_limits<double>::infinity();
    for (int r = 0; r < k; ++r) {
      lp = std::min(lp, tau(0) * table(r, 0) + tau(1) * table(r, 1));
    }
    double grid = 0.0;
    const int steps = 100000;
    for (int s = 0; s <= steps; ++s) {
      const double t0 = static_cast<double>(s) / steps;
      double lo = std::numeric_limits<double>::infinity();
      for (int r = 0; r < k; ++r) {
        lo = std::min(lo, t0 * table(r, 0) + (1.0 - t0) * table(r, 1));
      }
      grid = std::max(grid, lo);
    }
    worst_rel = std::max(worst_rel, std::abs(lp - grid) / grid);
  }
  report(crit, split_ok && worst_rel <= 1e-3,
         fmt("orthogonal split min RF %.6f mW (want %.4f +-0.1%%), duration "
             "LP vs grid worst rel err %.2e (want <= 1e-3)",
             got, want, worst_rel));
}

void numerics(int crit) {
  const wpt::EhParams eh = wpt::EhParams::defaults();
  double worst_fd = 0.0;
  for (double q : {0.5, 3.0, 8.0, 20.0}) {
    const double h = 1e-5;
    const double fd = (wpt::dc_power(eh, q + h) - wpt::dc_power(eh, q - h)) /
                      (2.0 * h);
    worst_fd =
        std::max(worst_fd, std::abs(wpt::dc_power_derivative(eh, q) - fd) /
                               std::abs(fd));
  }

  bool invariants_ok = true;
  const wpt::ChannelModelParams base = wpt::ChannelModelParams::defaults();
  const wpt::ChannelModelParams small = wpt::ChannelModelParams::create(
      base.rician_factor, base.distance_m, base.ref_gain, base.pathloss_exp,
      base.tx_gain_dbi, base.rx_gain_dbi, base.element_spacing_ratio, 3, 3);
  for (int i = 0; i < 5; ++i) {
    const wpt::ChannelSet cs = wpt::sample_channels(small, 5500 + i);
    const double p = wpt::dbm_to_watts(38.0);
    for (const auto& run :
         {wpt::multibeam(cs, p, 1.0, eh), wpt::tdma(cs, p, 1.0, eh),
          wpt::isotropic(3, p, 1.0, cs, eh),
          wpt::time_division(cs, p, 1.0, eh)}) {
      try {
        run.first.validate();
      } catch (const std::exception&) {
        invariants_ok = false;
      }
    }
  }

  const double g = wpt::average_power_gain(base);
  double acc = 0.0;
  long count = 0;
  for (int i = 0; i < 1000; ++i) {
    const wpt::ChannelSet cs = wpt::sample_channels(base, 100000 + i);
    acc += cs.entries.array().abs2().sum();
    count += cs.entries.size();
  }
  const double entry_rel = std::abs(acc / count - g) / g;
  report(crit,
         worst_fd <= 1e-6 && invariants_ok && entry_rel <= 0.02,
         fmt("derivative vs finite difference worst rel err %.2e (want <= "
             "1e-6), covariance invariants %s, per-entry gain off by %.2f%% "
             "over %ld draws (want <= 2%%)",
             worst_fd, invariants_ok ? "hold" : "VIOLATED", 100.0 * entry_rel,
             count));
}

void antenna_sweep(int crit) {
  const auto cfg =
      sweep_config({40.0}, {2, 3, 4, 5, 6}, 25, {"multibeam", "time_division"});
  const wpt::SweepResult result = wpt::run_sweep(cfg, 0);
  std::map<std::pair<int, int>, double> mb, td;
  for (const auto& row : result.rows) {
    auto key = std::make_pair(row.num_antennas, row.trial);
    if (row.scheme == "multibeam") mb[key] = row.min_dc_mw;
    if (row.scheme == "time_division") td[key] = row.min_dc_mw;
  }
  int violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& [key, value] : mb) {
    worst = std::min(worst, td[key] - value);
    if (td[key] < value - 1e-6) ++violations;
  }

  const auto iso_cfg = sweep_config({40.0}, {2, 3, 4, 5, 6}, 200, {"isotropic"});
  const wpt::SweepResult iso = wpt::run_sweep(iso_cfg, 0);
  std::map<int, std::pair<double, int>> by_m;
  for (const auto& row : iso.rows) {
    by_m[row.num_antennas].first += row.mean_dc_mw;
    by_m[row.num_antennas].second += 1;
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& [m, sum_count] : by_m) {
    const double mean = sum_count.first / sum_count.second;
    lo = std::min(lo, mean);
    hi = std::max(hi, mean);
  }
  const double spread = hi / lo - 1.0;
  report(crit, violations == 0 && spread <= 0.05,
         fmt("40 dBm: %d of %zu trials had time-division below multibeam "
             "(worst slack %.3e mW); isotropic per-ER mean DC spread %.2f%% "
             "across 2..6 antennas (want <= 5%%)",
             violations, mb.size(), worst, 100.0 * spread));
}

void run_criterion(int crit) {
  switch (crit) {
    case 1: curve_points(crit); break;
    case 2: two_er_multibeam(crit); break;
    case 3: two_er_tdma(crit); break;
    case 4: two_er_time_division(crit); break;
    case 5: dominance_suite(crit); break;
    case 6: high_power_convergence(crit); break;
    case 7: low_power_gain(crit); break;
    case 8: kernel_oracles(crit); break;
    case 9: numerics(crit); break;
    case 10: antenna_sweep(crit); break;
    default:
      std::fprintf(stderr, "unknown criterion %d\n", crit);
      g_pass = false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc == 3 && std::strcmp(argv[1], "--criterion") == 0) {
    only = std::atoi(argv[2]);
  } else if (argc != 1) {
    std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
    return 2;
  }
  if (only > 0) {
    run_criterion(only);
  } else {
    for (int crit = 1; crit <= 10; ++crit) run_criterion(crit);
  }
  return g_pass ? 0 : 1;
}
