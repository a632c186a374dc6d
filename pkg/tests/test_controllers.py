import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from csmcbench.controllers import (CsmcGains, CsmcState, PidState, controller_from_dict,
                                   controller_to_dict, csmc_gains_from_L, csmc_step, pid_step,
                                   signed_power)
from csmcbench.experiments import canonical_pid_gains
from csmcbench.pid_design import ParallelPidGains


@pytest.mark.parametrize("x, p, expected", [(-8.0, 1 / 3, -2.0), (0.0, 0.0, 0.0), (4.0, 0.5, 2.0)])
def test_signed_power(x, p, expected):
    assert signed_power(x, p) == pytest.approx(expected, rel=1e-15)


def test_gains_from_L():
    g = csmc_gains_from_L(0.4)
    assert (g.k1, g.k2, g.k3) == pytest.approx((2.7 * 0.4 ** (2 / 3), 5.345 * 0.4 ** 0.5, 0.44), rel=1e-15)
    assert (g.k1, g.k2) == pytest.approx((1.4657, 3.3805), abs=1e-4)
    g = csmc_gains_from_L(1.0)
    assert (g.k1, g.k2, g.k3) == (2.7, 5.345, 1.1)
    g = csmc_gains_from_L(8.0, (1.0, 1.0, 1.0))
    assert (g.k1, g.k2, g.k3) == pytest.approx((4.0, 2 * math.sqrt(2), 8.0), rel=1e-15)
    with pytest.raises(ValueError):
        csmc_gains_from_L(0.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_gain_homogeneity(L, c):
    a, b = csmc_gains_from_L(L), csmc_gains_from_L(c * L)
    assert b.k1 == pytest.approx(a.k1 * c ** (2 / 3), rel=1e-12)
    assert b.k2 == pytest.approx(a.k2 * c ** 0.5, rel=1e-12)
    assert b.k3 == pytest.approx(a.k3 * c, rel=1e-12)


def test_csmc_step_examples():
    g = csmc_gains_from_L(0.4)
    u, s = csmc_step(g, 0.0, 0.0, CsmcState(), 2e-4)
    assert u == 0.0 and s.integral == 0.0
    u, s = csmc_step(g, 1e-3, 0.0, CsmcState(), 2e-4)
    assert u == pytest.approx(-g.k1 * 1e-3 ** (1 / 3) - 0.44 * 2e-4, rel=1e-14)
    _, s = csmc_step(g, 2e-3, 0.0, s, 2e-4)
    assert s.integral == pytest.approx(2 * 2e-4, rel=1e-15)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1, 1), st.floats(-10, 10), st.floats(-1, 1), st.floats(1e-6, 1e-2))
def test_csmc_is_odd(y, yd, integral, dt):
    g = csmc_gains_from_L(0.4)
    u1, s1 = csmc_step(g, y, yd, CsmcState(integral), dt)
    u2, s2 = csmc_step(g, -y, -yd, CsmcState(-integral), dt)
    assert u2 == pytest.approx(-u1, rel=1e-12, abs=1e-300)
    assert s2.integral == pytest.approx(-s1.integral, rel=1e-12, abs=1e-300)
    assert abs(s1.integral - integral) <= dt + 4 * np.finfo(float).eps * max(1.0, abs(integral))


def _max_jump(dt):
    g = csmc_gains_from_L(0.4)
    t = np.arange(0.0, 1.0, dt)
    y = 0.01 + 0.5 * t + 0.1 * t * t
    yd = 0.5 + 0.2 * t
    s = CsmcState()
    u = []
    for a, b in zip(y, yd):
        v, s = csmc_step(g, a, b, s, dt)
        u.append(v)
    return np.abs(np.diff(u)).max()


def test_csmc_output_is_lipschitz_in_time():
    ratio = _max_jump(5e-4) / _max_jump(1e-3)
    assert ratio == pytest.approx(0.5, abs=0.05)


def test_pid_step_examples():
    u, s = pid_step(canonical_pid_gains(), 0.0, 0.0, PidState(), 2e-4)
    assert u == 0.0 and s.integral == 0.0
    u, _ = pid_step(ParallelPidGains(1.0, 0.0, 0.0), 0.5, 0.0, PidState(), 2e-4)
    assert u == 0.5


def test_pid_constant_error_integration():
    g = ParallelPidGains(429.064, 4348.267, 2.674)
    s = PidState()
    for _ in range(500):
        u, s = pid_step(g, 1e-3, 0.0, s, 2e-4)
    assert u == pytest.approx(429.064e-3 + 4348.267 * 1e-3 * 0.1, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_pid_without_integral_is_memoryless(e, ed, integral):
    _, s = pid_step(ParallelPidGains(3.0, 0.0, 0.5), e, ed, PidState(integral), 2e-4)
    assert s == PidState(integral)


def test_dict_round_trip():
    for g in (csmc_gains_from_L(0.4), canonical_pid_gains()):
        assert controller_from_dict(controller_to_dict(g)) == g
    with pytest.raises(ValueError):
        controller_from_dict({"type": "lqr"})
    with pytest.raises(ValueError):
        CsmcGains(-1.0, 1.0, 1.0, 1.0)
