import numpy as np
import pytest

import wptsim


EH = wptsim.EhParams.defaults()


def test_curve_and_worked_example():
    assert wptsim.dc_power(EH, 0.0) == 0.0
    assert wptsim.dc_power(EH, 1.5) == pytest.approx(0.9127, abs=1e-3)
    assert wptsim.dc_power(EH, 3.0) == pytest.approx(1.9666, abs=1e-3)

    cs = wptsim.example1_channels()
    cov, cert = wptsim.solve_multibeam(cs, 15.0)
    assert cert.status == wptsim.SolveStatus.optimal
    rf = [wptsim.rf_power_mw(cs, k, cov.matrix) for k in range(cs.num_ers)]
    assert min(rf) == pytest.approx(1.5, abs=1e-3)

    sched, rep = wptsim.tdma(cs, 15.0, 1.0, EH)
    sched.validate()
    assert [s.duration for s in sched.slots] == pytest.approx([0.5, 0.5], abs=1e-6)
    assert rep.min_dc_energy == pytest.approx(0.9833, abs=1e-3)

    _, td = wptsim.time_division(cs, 15.0, 1.0, EH)
    assert td.min_dc_energy >= rep.min_dc_energy - 1e-9
    assert list(td.objective_trace) == sorted(td.objective_trace)


def test_channel_determinism():
    model = wptsim.ChannelModelParams.defaults()
    a = wptsim.sample_channels(model, 42).entries
    b = wptsim.sample_channels(model, 42).entries
    c = wptsim.sample_channels(model, 43).entries
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert a.shape == (model.num_ers, model.num_antennas)


def test_scheme_dominance_small_instance():
    base = wptsim.ChannelModelParams.defaults()
    model = wptsim.ChannelModelParams.create(
        base.rician_factor, base.distance_m, base.ref_gain, base.pathloss_exp,
        base.tx_gain_dbi, base.rx_gain_dbi, base.element_spacing_ratio, 3, 2)
    cs = wptsim.sample_channels(model, 7)
    p = wptsim.dbm_to_watts(36.0)
    td = wptsim.time_division(cs, p, 1.0, EH)[1].min_dc_energy
    mb = wptsim.multibeam(cs, p, 1.0, EH)[1].min_dc_energy
    alt = wptsim.tdma(cs, p, 1.0, EH)[1].min_dc_energy
    iso = wptsim.isotropic(2, p, 1.0, cs, EH)[1].min_dc_energy
    assert td >= max(mb, alt) - 1e-6
    assert mb >= iso - 1e-9


def test_config_roundtrip_and_sweep():
    cfg = wptsim.ScenarioConfig.from_json_text(
        '{"schema_version": 1, "num_trials": 2, "num_ers": 3,'
        ' "p_max_dbm_grid": [36], "m_grid": [2],'
        ' "schemes": ["multibeam", "isotropic"]}')
    again = wptsim.ScenarioConfig.from_json_text(cfg.to_json_text())
    assert again.to_json_text() == cfg.to_json_text()

    result = wptsim.run_sweep(cfg, 2)
    assert len(result.rows) == 4
    assert all(r.status == "optimal" for r in result.rows)
    mb = [r.min_dc_mw for r in result.rows if r.scheme == "multibeam"]
    agg = [a for a in result.aggregates if a.scheme == "multibeam"]
    assert len(agg) == 1 and agg[0].n == 2
    assert agg[0].mean_min_dc_mw == pytest.approx(sum(mb) / 2, rel=1e-12)


def test_example1_report():
    rep = wptsim.run_example1()
    assert rep.ok, rep.failures
    assert [r.scheme for r in rep.rows] == [
        "multibeam", "tdma", "isotropic", "time_division"]


def test_multibeam_against_cvxpy():
    cp = pytest.importorskip("cvxpy")
    model = wptsim.ChannelModelParams.defaults()
    small = wptsim.ChannelModelParams.create(
        model.rician_factor, model.distance_m, model.ref_gain,
        model.pathloss_exp, model.tx_gain_dbi, model.rx_gain_dbi,
        model.element_spacing_ratio, 4, 3)
    cs = wptsim.sample_channels(small, 11)
    p = wptsim.dbm_to_watts(38.0)
    cov, cert = wptsim.solve_multibeam(cs, p)
    got = min(wptsim.rf_power_mw(cs, k, cov.matrix) for k in range(4))

    H = cs.entries
    S = cp.Variable((3, 3), hermitian=True)
    t = cp.Variable()
    cons = [S >> 0, cp.real(cp.trace(S)) <= p]
    for k in range(4):
        h = H[k].reshape(1, -1)
        cons.append(cp.real(h @ S @ h.conj().T)[0, 0] * cs.rf_unit_scale >= t)
    cp.Problem(cp.Maximize(t), cons).solve(solver=cp.SCS)
    assert got == pytest.approx(float(t.value), rel=1e-3)
