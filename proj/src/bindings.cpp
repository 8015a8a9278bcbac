#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "wptsim/channel.hpp"
#include "wptsim/eh_model.hpp"
#include "wptsim/harness.hpp"
#include "wptsim/schemes.hpp"
#include "wptsim/solver_kernels.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Time-division energy beamforming simulator core";

  py::class_<wpt::EhParams>(m, "EhParams")
      .def_static("create", &wpt::EhParams::create, py::arg("q_max_mw"),
                  py::arg("a_per_mw"), py::arg("b_mw"))
      .def_static("defaults", &wpt::EhParams::defaults)
      .def_readonly("q_max_mw", &wpt::EhParams::q_max_mw)
      .def_readonly("a_per_mw", &wpt::EhParams::a_per_mw)
      .def_readonly("b_mw", &wpt::EhParams::b_mw)
      .def_readonly("omega", &wpt::EhParams::omega);
  m.def("dc_power", &wpt::dc_power, py::arg("params"), py::arg("q_rf_mw"));
  m.def("dc_power_derivative", &wpt::dc_power_derivative, py::arg("params"),
        py::arg("q_rf_mw"));
  m.def("inflection_point", &wpt::inflection_point, py::arg("params"));

  py::class_<wpt::ChannelSet>(m, "ChannelSet")
      .def_static("create", &wpt::ChannelSet::create, py::arg("entries"),
                  py::arg("rf_unit_scale"))
      .def_readonly("entries", &wpt::ChannelSet::entries)
      .def_readonly("rf_unit_scale", &wpt::ChannelSet::rf_unit_scale)
      .def_property_readonly("num_ers", &wpt::ChannelSet::num_ers)
      .def_property_readonly("num_antennas", &wpt::ChannelSet::num_antennas);
  py::class_<wpt::ChannelModelParams>(m, "ChannelModelParams")
      .def_static("create", &wpt::ChannelModelParams::create,
                  py::arg("rician_factor"), py::arg("distance_m"),
                  py::arg("ref_gain"), py::arg("pathloss_exp"),
                  py::arg("tx_gain_dbi"), py::arg("rx_gain_dbi"),
                  py::arg("element_spacing_ratio"), py::arg("num_ers"),
                  py::arg("num_antennas"))
      .def_static("defaults", &wpt::ChannelModelParams::defaults)
      .def_readonly("rician_factor", &wpt::ChannelModelParams::rician_factor)
      .def_readonly("distance_m", &wpt::ChannelModelParams::distance_m)
      .def_readonly("ref_gain", &wpt::ChannelModelParams::ref_gain)
      .def_readonly("pathloss_exp", &wpt::ChannelModelParams::pathloss_exp)
      .def_readonly("tx_gain_dbi", &wpt::ChannelModelParams::tx_gain_dbi)
      .def_readonly("rx_gain_dbi", &wpt::ChannelModelParams::rx_gain_dbi)
      .def_readonly("element_spacing_ratio",
                    &wpt::ChannelModelParams::element_spacing_ratio)
      .def_readonly("num_ers", &wpt::ChannelModelParams::num_ers)
      .def_readonly("num_antennas", &wpt::ChannelModelParams::num_antennas);
  m.def("average_power_gain", &wpt::average_power_gain, py::arg("model"));
  m.def("sample_channels", &wpt::sample_channels, py::arg("model"),
        py::arg("seed"));
  m.def("example1_channels", &wpt::example1_channels);
  m.def("rf_power_mw", &wpt::rf_power_mw, py::arg("channels"), py::arg("k"),
        py::arg("covariance"));

  py::enum_<wpt::SolveStatus>(m, "SolveStatus")
      .value("optimal", wpt::SolveStatus::optimal)
      .value("max_iters", wpt::SolveStatus::max_iters)
      .value("infeasible", wpt::SolveStatus::infeasible);
  py::class_<wpt::Covariance>(m, "Covariance")
      .def_readonly("matrix", &wpt::Covariance::matrix)
      .def_readonly("trace_budget", &wpt::Covariance::trace_budget)
      .def("validate", &wpt::Covariance::validate);
  py::class_<wpt::SolverCertificate>(m, "SolverCertificate")
      .def_readonly("objective", &wpt::SolverCertificate::objective)
      .def_readonly("primal_residual", &wpt::SolverCertificate::primal_residual)
      .def_readonly("duality_gap_bound",
                    &wpt::SolverCertificate::duality_gap_bound)
      .def_readonly("status", &wpt::SolverCertificate::status)
      .def_readonly("dual_weights", &wpt::SolverCertificate::dual_weights)
      .def_readonly("iterations", &wpt::SolverCertificate::iterations);
  m.def("solve_multibeam", &wpt::solve_multibeam, py::arg("channels"),
        py::arg("p_max"), py::arg("tol") = 1e-6);
  m.def("solve_time_lp", &wpt::solve_time_lp, py::arg("dc_table"),
        py::arg("total_time"), py::arg("tol") = 1e-9);

  py::class_<wpt::ScheduleSlot>(m, "ScheduleSlot")
      .def_readonly("duration", &wpt::ScheduleSlot::duration)
      .def_readonly("covariance", &wpt::ScheduleSlot::covariance);
  py::class_<wpt::Schedule>(m, "Schedule")
      .def_readonly("slots", &wpt::Schedule::slots)
      .def_readonly("block_length", &wpt::Schedule::block_length)
      .def("validate", &wpt::Schedule::validate);
  py::class_<wpt::SolveReport>(m, "SolveReport")
      .def_readonly("min_dc_energy", &wpt::SolveReport::min_dc_energy)
      .def_readonly("per_er_dc_energy", &wpt::SolveReport::per_er_dc_energy)
      .def_readonly("outer_iterations", &wpt::SolveReport::outer_iterations)
      .def_readonly("inner_iterations", &wpt::SolveReport::inner_iterations)
      .def_readonly("objective_trace", &wpt::SolveReport::objective_trace)
      .def_readonly("status", &wpt::SolveReport::status)
      .def_readonly("certificates", &wpt::SolveReport::certificates);

  py::class_<wpt::AlgorithmSettings> settings(m, "AlgorithmSettings");
  py::enum_<wpt::AlgorithmSettings::Init>(settings, "Init")
      .value("best_of_baselines", wpt::AlgorithmSettings::Init::best_of_baselines)
      .value("tdma", wpt::AlgorithmSettings::Init::tdma)
      .value("multibeam", wpt::AlgorithmSettings::Init::multibeam)
      .value("uniform", wpt::AlgorithmSettings::Init::uniform);
  settings.def(py::init<>())
      .def_readwrite("epsilon_outer", &wpt::AlgorithmSettings::epsilon_outer)
      .def_readwrite("gamma_floor", &wpt::AlgorithmSettings::gamma_floor)
      .def_readwrite("gamma_init", &wpt::AlgorithmSettings::gamma_init)
      .def_readwrite("max_outer", &wpt::AlgorithmSettings::max_outer)
      .def_readwrite("max_inner", &wpt::AlgorithmSettings::max_inner)
      .def_readwrite("init_strategy", &wpt::AlgorithmSettings::init_strategy)
      .def_readwrite("num_slots", &wpt::AlgorithmSettings::num_slots);

  m.def("evaluate", &wpt::evaluate, py::arg("schedule"), py::arg("channels"),
        py::arg("eh"));
  m.def("multibeam", &wpt::multibeam, py::arg("channels"), py::arg("p_max"),
        py::arg("block_length"), py::arg("eh"));
  m.def("tdma", &wpt::tdma, py::arg("channels"), py::arg("p_max"),
        py::arg("block_length"), py::arg("eh"));
  m.def("isotropic", &wpt::isotropic, py::arg("num_antennas"), py::arg("p_max"),
        py::arg("block_length"), py::arg("channels"), py::arg("eh"));
  m.def("time_division", &wpt::time_division, py::arg("channels"),
        py::arg("p_max"), py::arg("block_length"), py::arg("eh"),
        py::arg("settings") = wpt::AlgorithmSettings{});

  py::class_<wpt::ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_static("from_json_text", &wpt::ScenarioConfig::from_json_text,
                  py::arg("text"))
      .def_static("from_json_file", &wpt::ScenarioConfig::from_json_file,
                  py::arg("path"))
      .def("to_json_text", &wpt::ScenarioConfig::to_json_text)
      .def("validate", &wpt::ScenarioConfig::validate)
      .def_readwrite("eh", &wpt::ScenarioConfig::eh)
      .def_readwrite("channel", &wpt::ScenarioConfig::channel)
      .def_readwrite("p_max_dbm_grid", &wpt::ScenarioConfig::p_max_dbm_grid)
      .def_readwrite("m_grid", &wpt::ScenarioConfig::m_grid)
      .def_readwrite("num_trials", &wpt::ScenarioConfig::num_trials)
      .def_readwrite("seed", &wpt::ScenarioConfig::seed)
      .def_readwrite("block_length", &wpt::ScenarioConfig::block_length)
      .def_readwrite("schemes", &wpt::ScenarioConfig::schemes)
      .def_readwrite("algorithm", &wpt::ScenarioConfig::algorithm);
  m.def("dbm_to_watts", &wpt::dbm_to_watts, py::arg("dbm"));
  m.def("sweep_channels", &wpt::sweep_channels, py::arg("config"),
        py::arg("num_antennas"), py::arg("trial"));

  py::class_<wpt::SweepRow>(m, "SweepRow")
      .def_readonly("p_max_dbm", &wpt::SweepRow::p_max_dbm)
      .def_readonly("num_antennas", &wpt::SweepRow::num_antennas)
      .def_readonly("trial", &wpt::SweepRow::trial)
      .def_readonly("scheme", &wpt::SweepRow::scheme)
      .def_readonly("min_dc_mw", &wpt::SweepRow::min_dc_mw)
      .def_readonly("mean_dc_mw", &wpt::SweepRow::mean_dc_mw)
      .def_readonly("outer_iters", &wpt::SweepRow::outer_iters)
      .def_readonly("inner_iters", &wpt::SweepRow::inner_iters)
      .def_readonly("status", &wpt::SweepRow::status)
      .def_readonly("wall_ms", &wpt::SweepRow::wall_ms);
  py::class_<wpt::AggregateRow>(m, "AggregateRow")
      .def_readonly("p_max_dbm", &wpt::AggregateRow::p_max_dbm)
      .def_readonly("num_antennas", &wpt::AggregateRow::num_antennas)
      .def_readonly("scheme", &wpt::AggregateRow::scheme)
      .def_readonly("mean_min_dc_mw", &wpt::AggregateRow::mean_min_dc_mw)
      .def_readonly("stderr_mw", &wpt::AggregateRow::stderr_mw)
      .def_readonly("n", &wpt::AggregateRow::n);
  py::class_<wpt::SweepResult>(m, "SweepResult")
      .def_readonly("rows", &wpt::SweepResult::rows)
      .def_readonly("aggregates", &wpt::SweepResult::aggregates);
  m.def("run_sweep", &wpt::run_sweep, py::arg("config"),
        py::arg("num_threads") = 0,
        py::call_guard<py::gil_scoped_release>());

  py::class_<wpt::Example1Row>(m, "Example1Row")
      .def_readonly("scheme", &wpt::Example1Row::scheme)
      .def_readonly("durations", &wpt::Example1Row::durations)
      .def_readonly("rf_mw", &wpt::Example1Row::rf_mw)
      .def_readonly("dc_mw", &wpt::Example1Row::dc_mw)
      .def_readonly("min_dc_mw", &wpt::Example1Row::min_dc_mw);
  py::class_<wpt::Example1Report>(m, "Example1Report")
      .def_readonly("rows", &wpt::Example1Report::rows)
      .def_readonly("failures", &wpt::Example1Report::failures)
      .def_readonly("ok", &wpt::Example1Report::ok);
  m.def(
      "run_example1",
      [](bool verbose) {
        if (!verbose) return wpt::run_example1(nullptr);
        std::ostringstream out;
        wpt::Example1Report rep = wpt::run_example1(&out);
        py::print(out.str());
        return rep;
      },
      py::arg("verbose") = false);
}
