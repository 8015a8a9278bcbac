#include "wptsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "json.hpp"

#include "rng.hpp"

namespace wpt {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const char* const kSchemeNames[] = {"multibeam", "tdma", "isotropic",
                                    "time_division"};

void check_keys(const json& j, const char* where,
                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* k) { return it.key() == k; })) {
      throw std::invalid_argument("config: unknown key \"" + it.key() +
                                  "\" in " + where);
    }
  }
}

double get_num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) {
    throw std::invalid_argument(std::string("config: ") + key +
                                " must be a number");
  }
  return j.at(key).get<double>();
}

int get_int(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) {
    throw std::invalid_argument(std::string("config: ") + key +
                                " must be an integer");
  }
  return j.at(key).get<int>();
}

AlgorithmSettings::Init init_from_name(const std::string& name) {
  if (name == "best_of_baselines") return AlgorithmSettings::Init::best_of_baselines;
  if (name == "tdma") return AlgorithmSettings::Init::tdma;
  if (name == "multibeam") return AlgorithmSettings::Init::multibeam;
  if (name == "uniform") return AlgorithmSettings::Init::uniform;
  throw std::invalid_argument("config: unknown init_strategy \"" + name + "\"");
}

const char* init_name(AlgorithmSettings::Init init) {
  switch (init) {
    case AlgorithmSettings::Init::best_of_baselines: return "best_of_baselines";
    case AlgorithmSettings::Init::tdma: return "tdma";
    case AlgorithmSettings::Init::multibeam: return "multibeam";
    case AlgorithmSettings::Init::uniform: return "uniform";
  }
  return "best_of_baselines";
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_ms(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Keep the status column CSV-safe whatever an exception message contains.
std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  }
  return s;
}

std::pair<Schedule, SolveReport> run_scheme(const std::string& scheme,
                                            const ChannelSet& cs,
                                            double p_watts,
                                            const ScenarioConfig& config) {
  if (scheme == "multibeam") {
    return multibeam(cs, p_watts, config.block_length, config.eh);
  }
  if (scheme == "tdma") {
    return tdma(cs, p_watts, config.block_length, config.eh);
  }
  if (scheme == "isotropic") {
    return isotropic(cs.num_antennas(), p_watts, config.block_length, cs,
                     config.eh);
  }
  if (scheme == "time_division") {
    return time_division(cs, p_watts, config.block_length, config.eh,
                         config.algorithm);
  }
  throw std::invalid_argument("unknown scheme \"" + scheme + "\"");
}

std::vector<SweepRow> run_trial(const ScenarioConfig& config, double p_dbm,
                                int num_antennas, int trial) {
  std::vector<SweepRow> rows;
  rows.reserve(config.schemes.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::optional<ChannelSet> cs;
  std::string sample_error;
  try {
    cs = sweep_channels(config, num_antennas, trial);
  } catch (const std::exception& e) {
    sample_error = e.what();
  }
  const double p_watts = dbm_to_watts(p_dbm);
  for (const std::string& scheme : config.schemes) {
    SweepRow row;
    row.p_max_dbm = p_dbm;
    row.num_antennas = num_antennas;
    row.trial = trial;
    row.scheme = scheme;
    if (!cs) {
      row.min_dc_mw = nan;
      row.mean_dc_mw = nan;
      row.status = sanitize("error: " + sample_error);
      rows.push_back(std::move(row));
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto [schedule, report] = run_scheme(scheme, *cs, p_watts, config);
      row.min_dc_mw = report.min_dc_energy / config.block_length;
      row.mean_dc_mw = report.per_er_dc_energy.mean() / config.block_length;
      row.outer_iters = report.outer_iterations;
      row.inner_iters = report.inner_iterations;
      row.status = to_string(report.status);
    } catch (const std::exception& e) {
      row.min_dc_mw = nan;
      row.mean_dc_mw = nan;
      row.status = sanitize("error: " + std::string(e.what()));
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start).count();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

ChannelSet sweep_channels(const ScenarioConfig& config, int num_antennas,
                          int trial) {
  const ChannelModelParams model = ChannelModelParams::create(
      config.channel.rician_factor, config.channel.distance_m,
      config.channel.ref_gain, config.channel.pathloss_exp,
      config.channel.tx_gain_dbi, config.channel.rx_gain_dbi,
      config.channel.element_spacing_ratio, config.channel.num_ers,
      num_antennas);
  return sample_channels(model,
                         derive_seed(config.seed,
                                     static_cast<std::uint64_t>(num_antennas),
                                     static_cast<std::uint64_t>(trial)));
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

void ScenarioConfig::validate() const {
  if (p_max_dbm_grid.empty()) {
    throw std::invalid_argument("config: p_max_dbm_grid is empty");
  }
  if (m_grid.empty()) throw std::invalid_argument("config: m_grid is empty");
  for (int m : m_grid) {
    if (m < 1) throw std::invalid_argument("config: antenna counts must be >= 1");
  }
  if (num_trials < 1) {
    throw std::invalid_argument("config: num_trials must be >= 1");
  }
  if (!(block_length > 0.0) || !std::isfinite(block_length)) {
    throw std::invalid_argument("config: block_length must be positive");
  }
  if (schemes.empty()) throw std::invalid_argument("config: schemes is empty");
  for (const std::string& s : schemes) {
    if (std::none_of(std::begin(kSchemeNames), std::end(kSchemeNames),
                     [&](const char* k) { return s == k; })) {
      throw std::invalid_argument("config: unknown scheme \"" + s + "\"");
    }
  }
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  const json j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config: not a JSON object");
  check_keys(j, "the top level",
             {"schema_version", "seed", "num_trials", "num_ers",
              "block_length", "p_max_dbm_grid", "m_grid", "schemes", "eh",
              "channel", "algorithm"});
  if (!j.contains("schema_version") ||
      !j.at("schema_version").is_number_integer() ||
      j.at("schema_version").get<int>() != 1) {
    throw std::invalid_argument("config: schema_version must be present and 1");
  }
  ScenarioConfig cfg;
  if (j.contains("seed")) {
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  cfg.num_trials = get_int(j, "num_trials", cfg.num_trials);
  cfg.block_length = get_num(j, "block_length", cfg.block_length);
  if (j.contains("p_max_dbm_grid")) {
    cfg.p_max_dbm_grid = j.at("p_max_dbm_grid").get<std::vector<double>>();
  }
  if (j.contains("m_grid")) {
    cfg.m_grid = j.at("m_grid").get<std::vector<int>>();
  }
  if (j.contains("schemes")) {
    cfg.schemes = j.at("schemes").get<std::vector<std::string>>();
  }
  if (j.contains("eh")) {
    const json& e = j.at("eh");
    check_keys(e, "eh", {"q_max_mw", "a_per_mw", "b_mw"});
    cfg.eh = EhParams::create(get_num(e, "q_max_mw", cfg.eh.q_max_mw),
                              get_num(e, "a_per_mw", cfg.eh.a_per_mw),
                              get_num(e, "b_mw", cfg.eh.b_mw));
  }
  {
    const json c = j.contains("channel") ? j.at("channel") : json::object();
    check_keys(c, "channel",
               {"rician_factor", "distance_m", "ref_gain", "pathloss_exp",
                "tx_gain_dbi", "rx_gain_dbi", "element_spacing_ratio"});
    const ChannelModelParams d = cfg.channel;
    cfg.channel = ChannelModelParams::create(
        get_num(c, "rician_factor", d.rician_factor),
        get_num(c, "distance_m", d.distance_m),
        get_num(c, "ref_gain", d.ref_gain),
        get_num(c, "pathloss_exp", d.pathloss_exp),
        get_num(c, "tx_gain_dbi", d.tx_gain_dbi),
        get_num(c, "rx_gain_dbi", d.rx_gain_dbi),
        get_num(c, "element_spacing_ratio", d.element_spacing_ratio),
        get_int(j, "num_ers", d.num_ers), d.num_antennas);
  }
  if (j.contains("algorithm")) {
    const json& a = j.at("algorithm");
    check_keys(a, "algorithm",
               {"epsilon_outer", "gamma_floor", "gamma_init", "max_outer",
                "max_inner", "init_strategy", "num_slots"});
    AlgorithmSettings& alg = cfg.algorithm;
    alg.epsilon_outer = get_num(a, "epsilon_outer", alg.epsilon_outer);
    alg.gamma_floor = get_num(a, "gamma_floor", alg.gamma_floor);
    alg.gamma_init = get_num(a, "gamma_init", alg.gamma_init);
    alg.max_outer = get_int(a, "max_outer", alg.max_outer);
    alg.max_inner = get_int(a, "max_inner", alg.max_inner);
    alg.num_slots = get_int(a, "num_slots", alg.num_slots);
    if (a.contains("init_strategy")) {
      alg.init_strategy = init_from_name(a.at("init_strategy").get<std::string>());
    }
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string ScenarioConfig::to_json_text() const {
  ordered_json j;
  j["schema_version"] = 1;
  j["seed"] = seed;
  j["num_trials"] = num_trials;
  j["num_ers"] = channel.num_ers;
  j["block_length"] = block_length;
  j["p_max_dbm_grid"] = p_max_dbm_grid;
  j["m_grid"] = m_grid;
  j["schemes"] = schemes;
  j["eh"] = {{"q_max_mw", eh.q_max_mw},
             {"a_per_mw", eh.a_per_mw},
             {"b_mw", eh.b_mw}};
  j["channel"] = {{"rician_factor", channel.rician_factor},
                  {"distance_m", channel.distance_m},
                  {"ref_gain", channel.ref_gain},
                  {"pathloss_exp", channel.pathloss_exp},
                  {"tx_gain_dbi", channel.tx_gain_dbi},
                  {"rx_gain_dbi", channel.rx_gain_dbi},
                  {"element_spacing_ratio", channel.element_spacing_ratio}};
  j["algorithm"] = {{"epsilon_outer", algorithm.epsilon_outer},
                    {"gamma_floor", algorithm.gamma_floor},
                    {"gamma_init", algorithm.gamma_init},
                    {"max_outer", algorithm.max_outer},
                    {"max_inner", algorithm.max_inner},
                    {"init_strategy", init_name(algorithm.init_strategy)},
                    {"num_slots", algorithm.num_slots}};
  return j.dump(2) + "\n";
}

SweepResult run_sweep(const ScenarioConfig& config, int num_threads) {
  config.validate();
  const int num_p = static_cast<int>(config.p_max_dbm_grid.size());
  const int num_m = static_cast<int>(config.m_grid.size());
  const int num_items = num_p * num_m * config.num_trials;
  std::vector<std::vector<SweepRow>> buckets(num_items);

  int workers = num_threads > 0
      ? num_threads
      : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, num_items);

  std::atomic<int> next{0};
  auto drain = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= num_items) return;
      const int grid = idx / config.num_trials;
      const int trial = idx % config.num_trials;
      const int ip = grid / num_m;
      const int im = grid % num_m;
      buckets[idx] = run_trial(config, config.p_max_dbm_grid[ip],
                               config.m_grid[im], trial);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int i = 1; i < workers; ++i) pool.emplace_back(drain);
  drain();
  for (std::thread& t : pool) t.join();

  SweepResult result;
  result.rows.reserve(static_cast<std::size_t>(num_items) *
                      config.schemes.size());
  for (auto& bucket : buckets) {
    for (auto& row : bucket) result.rows.push_back(std::move(row));
  }
  result.aggregates = aggregate_rows(result.rows);
  return result;
}

std::vector<AggregateRow> aggregate_rows(const std::vector<SweepRow>& rows) {
  struct Accum {
    AggregateRow agg;
    std::vector<double> values;
  };
  std::vector<Accum> groups;
  for (const SweepRow& row : rows) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Accum& g) {
      return g.agg.p_max_dbm == row.p_max_dbm &&
             g.agg.num_antennas == row.num_antennas &&
             g.agg.scheme == row.scheme;
    });
    if (it == groups.end()) {
      groups.push_back({{row.p_max_dbm, row.num_antennas, row.scheme, 0, 0, 0},
                        {}});
      it = std::prev(groups.end());
    }
    if (std::isfinite(row.min_dc_mw) && row.status.rfind("error", 0) != 0) {
      it->values.push_back(row.min_dc_mw);
    }
  }
  std::vector<AggregateRow> out;
  out.reserve(groups.size());
  for (Accum& g : groups) {
    const int n = static_cast<int>(g.values.size());
    g.agg.n = n;
    if (n > 0) {
      double mean = 0.0;
      for (double v : g.values) mean += v;
      mean /= n;
      double var = 0.0;
      for (double v : g.values) var += (v - mean) * (v - mean);
      g.agg.mean_min_dc_mw = mean;
      g.agg.stderr_mw = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
    }
    out.push_back(std::move(g.agg));
  }
  return out;
}

void write_raw_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "p_max_dbm,num_antennas,trial,scheme,min_dc_mw,mean_dc_mw,"
         "outer_iters,inner_iters,status,wall_ms\n";
  for (const SweepRow& r : rows) {
    out << fmt_double(r.p_max_dbm) << ',' << r.num_antennas << ',' << r.trial
        << ',' << r.scheme << ',' << fmt_double(r.min_dc_mw) << ','
        << fmt_double(r.mean_dc_mw) << ',' << r.outer_iters << ','
        << r.inner_iters << ',' << r.status << ',' << fmt_ms(r.wall_ms)
        << '\n';
  }
}

void write_aggregate_csv(const std::vector<AggregateRow>& rows,
                         std::ostream& out) {
  out << "p_max_dbm,num_antennas,scheme,mean_min_dc_mw,stderr,n\n";
  for (const AggregateRow& r : rows) {
    out << fmt_double(r.p_max_dbm) << ',' << r.num_antennas << ',' << r.scheme
        << ',' << fmt_double(r.mean_min_dc_mw) << ','
        << fmt_double(r.stderr_mw) << ',' << r.n << '\n';
  }
}

Example1Report run_example1(std::ostream* out) {
  const ChannelSet cs = example1_channels();
  const EhParams eh = EhParams::defaults();
  const double p_watts = 15.0, block = 1.0;
  ScenarioConfig config;
  config.eh = eh;
  config.block_length = block;

  Example1Report report;
  auto fail = [&](const std::string& msg) {
    report.ok = false;
    report.failures.push_back(msg);
  };
  auto near = [](double a, double b, double tol) {
    return std::abs(a - b) <= tol;
  };

  for (const char* scheme : kSchemeNames) {
    const auto [schedule, solve] = run_scheme(scheme, cs, p_watts, config);
    Example1Row row;
    row.scheme = scheme;
    const int num_slots = static_cast<int>(schedule.slots.size());
    row.durations.resize(num_slots);
    row.rf_mw.resize(cs.num_ers(), num_slots);
    for (int n = 0; n < num_slots; ++n) {
      row.durations(n) = schedule.slots[n].duration;
      for (int k = 0; k < cs.num_ers(); ++k) {
        row.rf_mw(k, n) =
            rf_power_mw(cs, k, schedule.slots[n].covariance.matrix);
      }
    }
    row.dc_mw = solve.per_er_dc_energy / block;
    row.min_dc_mw = solve.min_dc_energy / block;
    report.rows.push_back(std::move(row));
  }

  const Example1Row& mb = report.rows[0];
  for (int k = 0; k < 2; ++k) {
    if (!near(mb.rf_mw(k, 0), 1.5, 1e-3)) {
      fail("multibeam: expected RF 1.5 mW at ER " + std::to_string(k + 1) +
           ", got " + fmt_double(mb.rf_mw(k, 0)));
    }
    if (!near(mb.dc_mw(k), 0.9127, 1e-3)) {
      fail("multibeam: expected DC 0.9127 mW at ER " + std::to_string(k + 1) +
           ", got " + fmt_double(mb.dc_mw(k)));
    }
  }
  const Example1Row& rot = report.rows[1];
  for (int n = 0; n < 2; ++n) {
    if (!near(rot.durations(n), 0.5, 1e-6)) {
      fail("tdma: expected duration 0.5 in slot " + std::to_string(n + 1) +
           ", got " + fmt_double(rot.durations(n)));
    }
  }
  if (!near(rot.min_dc_mw, 0.9833, 1e-3)) {
    fail("tdma: expected min DC 0.9833 mW, got " + fmt_double(rot.min_dc_mw));
  }
  const Example1Row& iso = report.rows[2];
  for (int k = 0; k < 2; ++k) {
    if (!near(iso.rf_mw(k, 0), 0.75, 1e-9)) {
      fail("isotropic: expected RF 0.75 mW at ER " + std::to_string(k + 1) +
           ", got " + fmt_double(iso.rf_mw(k, 0)));
    }
  }
  const double split_optimum = 0.5 * dc_power(eh, 3.0);
  if (report.rows[3].min_dc_mw < split_optimum - 1e-6) {
    fail("time_division: expected min DC >= " + fmt_double(split_optimum) +
         " - 1e-6, got " + fmt_double(report.rows[3].min_dc_mw));
  }

  if (out) {
    *out << "fixed two-ER scenario: p_max = 15 W, block length = 1\n";
    for (const Example1Row& row : report.rows) {
      *out << row.scheme << ":\n  durations:";
      for (int n = 0; n < row.durations.size(); ++n) {
        *out << ' ' << fmt_double(row.durations(n));
      }
      *out << "\n  rf_mw (ER x slot):";
      for (int k = 0; k < row.rf_mw.rows(); ++k) {
        *out << " [";
        for (int n = 0; n < row.rf_mw.cols(); ++n) {
          *out << (n ? " " : "") << fmt_double(row.rf_mw(k, n));
        }
        *out << ']';
      }
      *out << "\n  dc_mw:";
      for (int k = 0; k < row.dc_mw.size(); ++k) {
        *out << ' ' << fmt_double(row.dc_mw(k));
      }
      *out << "\n  min dc_mw: " << fmt_double(row.min_dc_mw) << "\n";
    }
    if (report.ok) {
      *out << "all checks passed\n";
    } else {
      for (const std::string& f : report.failures) {
        *out << "check failed: " << f << "\n";
      }
    }
  }
  return report;
}

}  // namespace wpt
