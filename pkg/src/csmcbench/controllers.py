"""Runtime control laws: parallel PID and the PID-like continuous SMC.

The scalar update kernels (``_csmc_update``, ``_pid_update``) are compiled
with numba so the simulator can call them from its inner loop; the public
``*_step`` functions wrap the same kernels.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from numba import njit

from .pid_design import ParallelPidGains

__all__ = [
    "DEFAULT_LAMBDA", "CsmcGains", "CsmcState", "PidState",
    "signed_power", "csmc_gains_from_L", "csmc_step", "pid_step",
    "controller_to_dict", "controller_from_dict",
]

DEFAULT_LAMBDA = (2.7, 5.345, 1.1)


def signed_power(x, p: float):
    """``|x|**p * sign(x)`` with the selection ``sign(0) = 0``."""
    if p < 0:
        raise ValueError("p must be >= 0")
    x = np.asarray(x, dtype=float)
    out = np.sign(x) * np.abs(x) ** p
    return float(out) if out.ndim == 0 else out


@njit(cache=True)
def _spow(x, p):
    if x > 0.0:
        return x ** p
    if x < 0.0:
        return -((-x) ** p)
    return 0.0


@njit(cache=True)
def _csmc_update(k1, k2, k3, y, y_dot, integral, dt):
    integral = integral + _spow(y, 0.0) * dt
    u = -k1 * _spow(y, 1.0 / 3.0) - k2 * _spow(y_dot, 0.5) - k3 * integral
    return u, integral


@njit(cache=True)
def _pid_update(kp, ki, kd, e, e_dot, integral, dt):
    if ki != 0.0:
        integral = integral + e * dt
    u = kp * e + ki * integral + kd * e_dot
    return u, integral


@dataclass(frozen=True)
class CsmcGains:
    k1: float
    k2: float
    k3: float
    L: float
    lam: tuple = DEFAULT_LAMBDA

    def __post_init__(self):
        if min(self.k1, self.k2, self.k3) < 0:
            raise ValueError("CSMC gains must be non-negative")


@dataclass(frozen=True)
class CsmcState:
    integral: float = 0.0


@dataclass(frozen=True)
class PidState:
    integral: float = 0.0


def csmc_gains_from_L(L: float, lam=DEFAULT_LAMBDA) -> CsmcGains:
    """Gains ``(l1 L^(2/3), l2 L^(1/2), l3 L)`` for a disturbance Lipschitz bound ``L``."""
    if not L > 0:
        raise ValueError("L must be positive")
    l1, l2, l3 = lam
    if min(l1, l2, l3) <= 0:
        raise ValueError("lambda components must be positive")
    return CsmcGains(l1 * L ** (2.0 / 3.0), l2 * L ** 0.5, l3 * L, float(L), tuple(lam))


def csmc_step(gains: CsmcGains, y: float, y_dot: float, state: CsmcState, dt: float):
    """One explicit-Euler step of the CSMC law; returns ``(u, new_state)``."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    u, integral = _csmc_update(gains.k1, gains.k2, gains.k3, float(y), float(y_dot),
                               state.integral, float(dt))
    return u, CsmcState(integral)


def pid_step(gains: ParallelPidGains, e: float, e_dot: float, state: PidState, dt: float):
    """Parallel PID ``Kp e + Ki int(e) + Kd e_dot``; ``e_dot`` comes from outside (RED)."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    u, integral = _pid_update(gains.Kp, gains.Ki, gains.Kd, float(e), float(e_dot),
                              state.integral, float(dt))
    return u, PidState(integral)


def controller_to_dict(gains: Union[ParallelPidGains, CsmcGains]) -> dict:
    if isinstance(gains, CsmcGains):
        return {"type": "csmc", "L": gains.L, "lambda": list(gains.lam)}
    return {"type": "pid", "Kp": gains.Kp, "Ki": gains.Ki, "Kd": gains.Kd}


def controller_from_dict(data: dict) -> Union[ParallelPidGains, CsmcGains]:
    kind = data.get("type")
    if kind == "csmc":
        return csmc_gains_from_L(data["L"], tuple(data.get("lambda", DEFAULT_LAMBDA)))
    if kind == "pid":
        return ParallelPidGains(data["Kp"], data.get("Ki", 0.0), data.get("Kd", 0.0))
    raise ValueError(f"unknown controller type {kind!r}")
