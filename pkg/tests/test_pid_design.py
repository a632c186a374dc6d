import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from csmcbench.pid_design import (PidDesign, cascade_design, conservativeness, design_pid,
                                  open_loop_margins, open_loop_response, parallel_tf, pid_tf,
                                  syd_pd_magnitude, syd_pid_peak, syd_pid_response, syd_sweep,
                                  to_parallel)
from csmcbench.plant import PlantModel, RationalTF, freq_response, plant_tf

K, TAU = 0.0408, 0.006684


@pytest.fixture(scope="module")
def canon():
    return design_pid(K, TAU, -52.0, 60.0, gamma=400.0)


def test_canonical_design(canon):
    assert canon.T_I == pytest.approx(0.092, abs=5e-4)
    assert canon.omega_s == pytest.approx(K * 400 / math.sin(math.radians(60)), rel=1e-12)
    assert canon.omega_s == pytest.approx(18.85, abs=0.01)


def test_exact_gamma_from_smax():
    d = design_pid(K, TAU, -52.0, 60.0)
    assert d.gamma == pytest.approx(10 ** (52 / 20), rel=1e-14)
    assert d.S_max == pytest.approx(1 / d.gamma)


def test_unit_design():
    d = design_pid(1.0, 1.0, 0.0, 45.0)
    assert d.gamma == 1.0
    assert d.T_I == pytest.approx(1 / math.sqrt(2), rel=1e-14)
    assert d.omega_s == pytest.approx(math.sqrt(2), rel=1e-14)
    w_s, phi = open_loop_margins(d, 1.0)
    assert w_s == pytest.approx(math.sqrt(2), rel=1e-12)
    assert phi == pytest.approx(math.pi / 4, rel=1e-12)


@pytest.mark.parametrize("args", [(0.0, TAU, -52, 60), (K, 0.0, -52, 60), (K, TAU, -52, 0),
                                  (K, TAU, -52, 90)])
def test_invalid_design_inputs(args):
    with pytest.raises(ValueError):
        design_pid(*args)


def test_parallel_gains_canonical(canon):
    g = to_parallel(canon)
    assert g.Kp == pytest.approx(429.064, rel=1e-3)
    assert g.Ki == pytest.approx(4348.267, rel=1e-3)
    assert g.Kd == pytest.approx(2.674, rel=1e-3)
    g92 = to_parallel(cascade_design(K, TAU, 400.0, 0.092))
    assert g92.Kp == pytest.approx(429.064, rel=1e-5)


def test_parallel_gains_small_cases():
    g = to_parallel(PidDesign(1.0, 0.0, 0.5, 1.0, 1.0, 1.0))
    assert (g.Kp, g.Ki, g.Kd) == (1.0, 2.0, 0.0)
    g = to_parallel(PidDesign(2.0, 1.0, 1.0, 1.0, 0.5, 1.0))
    assert (g.Kp, g.Ki, g.Kd) == (4.0, 2.0, 2.0)
    g = to_parallel(PidDesign(2.0, 1.0, math.inf, 1.0, 0.5, 1.0))
    assert (g.Kp, g.Ki, g.Kd) == (2.0, 0.0, 2.0)


def test_cascade_and_parallel_forms_agree(canon):
    w = np.logspace(-1, 4, 100)
    assert freq_response(pid_tf(canon), w) == pytest.approx(
        freq_response(parallel_tf(to_parallel(canon)), w), rel=1e-12)


def test_pd_magnitude_examples():
    assert syd_pd_magnitude(K, TAU, 400.0, 0.0) == pytest.approx(1 / 400, rel=1e-15)
    assert syd_pd_magnitude(1.0, 0.0, 1.0, 1.0) == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    v = syd_pd_magnitude(K, TAU, 400.0, 10.0)
    assert v < 1 / 400
    assert v == pytest.approx(K / abs((1 + 10j * TAU) * (10j + K * 400)), rel=1e-14)


@pytest.mark.parametrize("w, target", [(5.0, -58.6), (10.0, -52.9), (20.0, -53.8)])
def test_pid_sensitivity_values(canon, w, target):
    val = 20 * math.log10(abs(syd_pid_response(K, TAU, canon.gamma, canon.T_I, w)))
    assert val == pytest.approx(target, abs=0.05)


def test_pid_sensitivity_vanishes_at_dc(canon):
    assert abs(syd_pid_response(K, TAU, canon.gamma, canon.T_I, 0.0)) == 0.0
    assert abs(syd_pid_response(K, TAU, canon.gamma, canon.T_I, 1e-6)) < 1e-9


def _generic_syd(K, tau, d, w):
    G = plant_tf(PlantModel(K, tau))
    return freq_response(G.feedback(pid_tf(d)), w)


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-3, 10.0), st.floats(1e-4, 0.1), st.floats(1.0, 1e4), st.floats(5.0, 85.0))
def test_factored_form_matches_generic_feedback(k, tau, gamma, phi):
    d = design_pid(k, tau, 0.0, phi, gamma=gamma)
    w = np.logspace(-2, 4, 60)
    assert syd_pid_response(k, tau, gamma, d.T_I, w) == pytest.approx(_generic_syd(k, tau, d, w), rel=1e-10)


def test_low_frequency_slope_is_20_db_per_decade(canon):
    w = np.array([canon.omega_s / 1000, canon.omega_s / 100])
    m = 20 * np.log10(np.abs(syd_pid_response(K, TAU, canon.gamma, canon.T_I, w)))
    assert m[1] - m[0] == pytest.approx(20.0, abs=0.05)


def test_peak_canonical(canon):
    w, p = syd_pid_peak(canon, K)
    assert w == pytest.approx(13.31, abs=0.15)
    assert p == pytest.approx(-52.08, abs=0.05)


def test_peak_against_dense_grid():
    d = cascade_design(K, TAU, 400.0, 0.01)
    w, p = syd_pid_peak(d, K)
    grid = np.logspace(-2, 4, 200001)
    brute = 20 * np.log10(np.abs(syd_pid_response(K, TAU, 400.0, 0.01, grid)).max())
    assert p == pytest.approx(brute, abs=1e-6)
    assert p < -20 * math.log10(400.0)


def test_pd_limit_peak_at_zero():
    d = PidDesign(400.0, TAU, math.inf, 1.0, 1 / 400, 1.0)
    w, p = syd_pid_peak(d, K)
    assert w == 0.0
    assert p == pytest.approx(-20 * math.log10(400.0), abs=1e-12)


def test_margins_canonical(canon):
    w_s, phi = open_loop_margins(canon, K)
    assert math.degrees(phi) == pytest.approx(60.0, rel=1e-9)
    assert w_s == pytest.approx(canon.omega_s, rel=1e-9)


def test_infinite_gain_margin(canon):
    w = np.logspace(-4, 6, 5000)
    assert np.all(np.angle(open_loop_response(canon, K, w)) > -math.pi)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 10.0), st.floats(1e-4, 0.1), st.floats(1.0, 1e4), st.floats(1.0, 89.0))
def test_margin_round_trip(k, tau, gamma, phi):
    d = design_pid(k, tau, 0.0, phi, gamma=gamma)
    w_s, phi_out = open_loop_margins(d, k)
    assert phi_out == pytest.approx(math.radians(phi), rel=1e-9)
    assert abs(open_loop_response(d, k, w_s)) == pytest.approx(1.0, rel=1e-9)


def test_conservativeness_reports_both_gaps(canon):
    c = conservativeness(K, TAU, 400.0, canon.T_I)
    assert c["bound_dB"] == pytest.approx(-52.0412, abs=1e-4)
    assert c["gap_at_design_dB"] == pytest.approx(0.034, abs=0.005)
    assert c["max_gap_over_sweep_dB"] == pytest.approx(0.31, abs=0.01)
    assert c["max_gap_over_sweep_dB"] >= c["gap_at_design_dB"]


def test_sweep_columns(canon):
    w = np.logspace(-2, 4, 50)
    s = syd_sweep(K, TAU, 400.0, [0.01, canon.T_I], w)
    assert list(s)[:2] == ["omega", "pd_dB"]
    assert len(s) == 4
    assert np.all(s["pd_dB"] <= -20 * math.log10(400.0) + 1e-12)
