import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from csmcbench.errors import NoiseNotLipschitz
from csmcbench.signals import (BandLimitedNoise, Chirp, Constant, Sine, Sum, lipschitz_bound,
                               sample, sampler, signal_from_dict, signal_to_dict)

CHIRP = Chirp.from_band(1.0, 0.06, 30.0, 60.0)


def test_sine_zero_and_peak():
    s = Sine(1.0, 10.0)
    assert sample(s, 0.0) == 0.0
    assert sample(s, math.pi / 20) == pytest.approx(1.0, abs=1e-15)


def test_chirp_end_value_matches_literal_phase():
    alpha = (30.0 - 0.06) / (2 * 60.0)
    assert CHIRP.rate == pytest.approx(alpha, rel=1e-15)
    assert sample(CHIRP, 60.0) == pytest.approx(math.sin((0.06 + alpha * 60.0) * 60.0), abs=1e-12)
    assert CHIRP.instantaneous_frequency(60.0) == pytest.approx(30.0)


def test_chirp_continues_at_end_frequency():
    t = np.array([60.0, 60.5, 61.0])
    ph = CHIRP.phase(t)
    assert np.diff(ph) == pytest.approx([15.0, 15.0], rel=1e-12)
    # continuity of the phase across the end of the sweep
    eps = 1e-7
    assert CHIRP.phase(60.0 + eps) - CHIRP.phase(60.0 - eps) == pytest.approx(2 * eps * 30.0, rel=1e-4)


def test_lipschitz_examples():
    assert lipschitz_bound(Sine(1.0, 10.0)) == 10.0
    assert lipschitz_bound(Constant(5.0)) == 0.0
    assert lipschitz_bound(CHIRP) == pytest.approx(1.0 * (0.06 + 2 * CHIRP.rate * 60.0))
    with pytest.raises(NoiseNotLipschitz):
        lipschitz_bound(BandLimitedNoise(1e-6, 100.0))


def test_chirp_bound_holds_on_dense_grid():
    h = 1e-6
    t = np.arange(0.0, 60.0, 1e-3)
    slope = np.abs(sample(CHIRP, t + h) - sample(CHIRP, t)) / h
    assert slope.max() <= lipschitz_bound(CHIRP) * 1.1
    assert slope.max() >= 0.9 * lipschitz_bound(CHIRP)


@pytest.mark.parametrize("kwargs", [dict(amplitude=0.0, frequency=1.0),
                                    dict(amplitude=1.0, frequency=-1.0)])
def test_invalid_sine_rejected_at_construction(kwargs):
    with pytest.raises(ValueError):
        Sine(**kwargs)


def test_invalid_chirp_and_noise_rejected():
    with pytest.raises(ValueError):
        Chirp(1.0, 0.1, -1.0, 10.0)
    with pytest.raises(ValueError):
        Chirp(1.0, 0.1, 1.0, 0.0)
    with pytest.raises(ValueError):
        BandLimitedNoise(-1.0, 10.0)
    with pytest.raises(ValueError):
        BandLimitedNoise(1.0, 0.0)


def test_negative_time_rejected():
    with pytest.raises(ValueError):
        sample(Sine(1.0, 1.0), -0.1)


def test_noise_is_reproducible_and_seed_sensitive():
    a = BandLimitedNoise(1e-6, 2 * math.pi * 250, seed=3)
    x1, x2 = a.stream(4000), a.stream(4000)
    assert np.array_equal(x1, x2)
    assert not np.array_equal(x1, BandLimitedNoise(1e-6, 2 * math.pi * 250, seed=4).stream(4000))
    assert np.std(BandLimitedNoise(1.0, 2 * math.pi * 250, seed=1).stream(200000)) == pytest.approx(1.0, rel=0.05)


def test_noise_sampler_is_zero_order_hold():
    n = BandLimitedNoise(1.0, 100.0, seed=1, sample_period=1e-3)
    f = sampler(n, 1.0)
    stream = n.stream(1001)
    assert f(np.array([0.0, 0.0004, 0.0011]))[:2] == pytest.approx([stream[0], stream[0]])
    assert f(np.array([0.0011]))[0] == pytest.approx(stream[1])


finite = st.floats(0.05, 50.0)


@st.composite
def deterministic_specs(draw, depth=2):
    kind = draw(st.sampled_from(["sine", "chirp", "constant"] + (["sum"] if depth else [])))
    if kind == "sine":
        return Sine(draw(finite), draw(finite))
    if kind == "chirp":
        return Chirp(draw(finite), draw(st.floats(0.0, 10.0)), draw(st.floats(0.0, 5.0)),
                     draw(st.floats(0.5, 5.0)))
    if kind == "constant":
        return Constant(draw(st.floats(-10, 10)))
    return Sum(tuple(draw(st.lists(deterministic_specs(depth=depth - 1), min_size=1, max_size=3))))


@settings(max_examples=60, deadline=None)
@given(deterministic_specs())
def test_finite_difference_slope_within_bound(spec):
    h = 1e-6
    t = np.linspace(0.0, 6.0, 6001)
    slope = np.abs(sample(spec, t + h) - sample(spec, t)) / h
    L = lipschitz_bound(spec)
    assert slope.max() <= 1.1 * L + 1e-6


@settings(max_examples=60, deadline=None)
@given(deterministic_specs(), deterministic_specs(), st.floats(0.0, 20.0))
def test_sum_is_pointwise_additive(a, b, t):
    assert sample(Sum((a, b)), t) == pytest.approx(sample(a, t) + sample(b, t), rel=1e-15, abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(deterministic_specs())
def test_dict_round_trip(spec):
    assert signal_from_dict(signal_to_dict(spec)) == spec


def test_noise_dict_round_trip_and_chirp_band_form():
    n = BandLimitedNoise(4e-6, 1500.0, seed=7)
    assert signal_from_dict(signal_to_dict(n)) == n
    c = signal_from_dict({"type": "chirp", "amplitude": 1.0, "start_frequency": 0.06,
                          "end_frequency": 30.0, "duration": 60.0})
    assert c == CHIRP
    with pytest.raises(ValueError):
        signal_from_dict({"type": "square"})
