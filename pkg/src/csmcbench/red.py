"""Second-order robust exact differentiator (explicit Euler).

    x0' = x1 + 3.1 r |y - x0|^(2/3) sign(y - x0)
    x1' = x2 + 3.2 r^2 |y - x0|^(1/3) sign(y - x0)
    x2' = 1.1 r^3 sign(y - x0)

``r**3`` acts as the Lipschitz bound of the second derivative of ``y``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .controllers import _spow

__all__ = ["RedState", "DEFAULT_R", "red_step", "red_run"]

DEFAULT_R = 8.0


@dataclass(frozen=True)
class RedState:
    x0: float
    x1: float = 0.0
    x2: float = 0.0


@njit(cache=True)
def _red_update(x0, x1, x2, y, r, dt):
    err = y - x0
    n0 = x0 + dt * (x1 + 3.1 * r * _spow(err, 2.0 / 3.0))
    n1 = x1 + dt * (x2 + 3.2 * r * r * _spow(err, 1.0 / 3.0))
    n2 = x2 + dt * (1.1 * r * r * r * _spow(err, 0.0))
    return n0, n1, n2


@njit(cache=True)
def _red_fold(y, r, dt):
    n = y.shape[0]
    out = np.empty((n, 3))
    x0, x1, x2 = y[0], 0.0, 0.0
    for k in range(n):
        x0, x1, x2 = _red_update(x0, x1, x2, y[k], r, dt)
        out[k, 0] = x0
        out[k, 1] = x1
        out[k, 2] = x2
    return out


def red_step(state: RedState, y: float, r: float = DEFAULT_R, dt: float = 2e-4) -> RedState:
    if not (r > 0 and dt > 0):
        raise ValueError("r and dt must be positive")
    return RedState(*_red_update(state.x0, state.x1, state.x2, float(y), float(r), float(dt)))


def red_run(y_series, r: float = DEFAULT_R, dt: float = 2e-4):
    """Differentiate a uniformly sampled series from the state ``(y[0], 0, 0)``.

    Returns ``(x0, x1, x2)`` arrays; element ``k`` is the state after
    consuming ``y[k]``.
    """
    if not (r > 0 and dt > 0):
        raise ValueError("r and dt must be positive")
    y = np.ascontiguousarray(y_series, dtype=float)
    if y.ndim != 1 or y.size == 0:
        raise ValueError("y_series must be a non-empty 1-D array")
    out = _red_fold(y, float(r), float(dt))
    return out[:, 0].copy(), out[:, 1].copy(), out[:, 2].copy()
