"""Robust PID synthesis by bounding the input-disturbance sensitivity.

The PD part ``gamma (tau s + 1)`` cancels the mechanical pole of
``K / (s (tau s + 1))``, which makes ``||S_yd,PD||_inf = 1/gamma``. An integral
term ``(T_I s + 1) / (T_I s)`` is then added with ``T_I`` chosen from a phase
margin; the bound ``|S_yd,PID(j w)| <= 1/gamma`` still holds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .plant import RationalTF

__all__ = [
    "PidDesign", "ParallelPidGains", "design_pid", "cascade_design", "to_parallel",
    "pid_tf", "parallel_tf", "syd_pd_magnitude", "syd_pid_response", "syd_pid_peak",
    "open_loop_response", "open_loop_margins", "conservativeness", "syd_sweep",
]


@dataclass(frozen=True)
class PidDesign:
    gamma: float
    tau: float
    T_I: float
    Phi: float       # phase margin [rad]
    S_max: float     # linear worst-case amplification, 1/gamma
    omega_s: float   # open-loop crossover [rad/s]

    def __post_init__(self):
        if not (self.gamma > 0 and self.T_I > 0 and self.tau >= 0):
            raise ValueError("gamma, T_I must be positive and tau >= 0")


@dataclass(frozen=True)
class ParallelPidGains:
    Kp: float
    Ki: float
    Kd: float

    def __post_init__(self):
        if min(self.Kp, self.Ki, self.Kd) < 0:
            raise ValueError("parallel PID gains must be non-negative")


def design_pid(K: float, tau: float, S_max_dB: float, Phi_deg: float,
               gamma: float | None = None) -> PidDesign:
    """Two-step design: ``gamma = 1/S_max``, then ``T_I`` from the phase margin.

    ``gamma`` overrides the value implied by ``S_max_dB`` (the canonical
    design rounds 10**(52/20) = 398.1 up to 400).
    """
    if not (K > 0 and tau > 0):
        raise ValueError("K and tau must be positive")
    if not 0 < Phi_deg < 90:
        raise ValueError("Phi_deg must lie in (0, 90)")
    if gamma is None:
        gamma = 10.0 ** (-S_max_dB / 20.0)
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    phi = math.radians(Phi_deg)
    tp = math.tan(phi)
    omega_s = K * gamma * math.sqrt(1.0 + tp * tp) / tp
    T_I = tp / omega_s
    return PidDesign(gamma=gamma, tau=tau, T_I=T_I, Phi=phi, S_max=1.0 / gamma, omega_s=omega_s)


def cascade_design(K: float, tau: float, gamma: float, T_I: float) -> PidDesign:
    """Design record for hand-picked ``gamma`` and ``T_I`` (margin computed)."""
    design = PidDesign(gamma, tau, T_I, Phi=math.pi / 4, S_max=1.0 / gamma, omega_s=1.0)
    omega_s, pm = open_loop_margins(design, K)
    return PidDesign(gamma, tau, T_I, Phi=pm, S_max=1.0 / gamma, omega_s=omega_s)


def to_parallel(design: PidDesign) -> ParallelPidGains:
    g, tau, T_I = design.gamma, design.tau, design.T_I
    if math.isinf(T_I):
        return ParallelPidGains(g, 0.0, g * tau)
    return ParallelPidGains(Kp=g * (T_I + tau) / T_I, Ki=g / T_I, Kd=g * tau)


def pid_tf(design: PidDesign) -> RationalTF:
    """Cascade form ``gamma (tau s + 1)(T_I s + 1) / (T_I s)``."""
    num = design.gamma * np.polynomial.polynomial.polymul([1.0, design.tau], [1.0, design.T_I])
    return RationalTF(num, (0.0, design.T_I))


def parallel_tf(gains: ParallelPidGains) -> RationalTF:
    """``(Kd s^2 + Kp s + Ki) / s``."""
    return RationalTF((gains.Ki, gains.Kp, gains.Kd), (0.0, 1.0))


def syd_pd_magnitude(K, tau, gamma, omega):
    w = np.asarray(omega, dtype=float)
    return K / (np.sqrt(w * w * tau * tau + 1.0) * np.sqrt(w * w + K * K * gamma * gamma))


def syd_pid_response(K, tau, gamma, T_I, omega):
    """``G / (1 + G C_PID)`` at ``s = j omega``, in factored form.

    ``T_I = inf`` gives the PD loop.
    """
    w = np.asarray(omega, dtype=float)
    s = 1j * w
    if math.isinf(T_I):
        out = K / ((tau * s + 1.0) * (s + K * gamma))
    else:
        out = K * T_I * s / ((tau * s + 1.0) * (T_I * s * s + K * gamma * T_I * s + K * gamma))
    return complex(out) if w.ndim == 0 else out


def syd_pid_peak(design: PidDesign, K: float, tau: float | None = None,
                 grid=(1e-2, 1e4, 1000)) -> tuple[float, float]:
    """Return ``(omega_max, peak_dB)`` of ``|S_yd,PID|``.

    Coarse log grid, then golden-section refinement in ``log omega``. A
    maximum at the lower grid edge is reported at ``omega = 0``.
    """
    tau = design.tau if tau is None else tau

    def mag(w):
        return np.abs(syd_pid_response(K, tau, design.gamma, design.T_I, w))

    w = np.logspace(math.log10(grid[0]), math.log10(grid[1]), int(grid[2]))
    m = mag(w)
    i = int(np.argmax(m))
    if i == 0:
        m0 = abs(syd_pid_response(K, tau, design.gamma, design.T_I, 0.0))
        if m0 >= m[0]:
            return 0.0, 20.0 * math.log10(m0)
    if i == len(w) - 1:
        return float(w[i]), 20.0 * math.log10(m[i])
    lo, hi = math.log(w[i - 1]), math.log(w[i + 1])
    res = minimize_scalar(lambda x: -mag(math.exp(x)), bracket=(lo, math.log(w[i]), hi),
                          method="golden", tol=1e-10)
    w_max = math.exp(res.x)
    return w_max, 20.0 * math.log10(mag(w_max))


def open_loop_response(design: PidDesign, K: float, omega):
    """``L(j w) = K gamma (T_I s + 1) / (T_I s^2)`` after pole-zero cancellation."""
    s = 1j * np.asarray(omega, dtype=float)
    return K * design.gamma * (design.T_I * s + 1.0) / (design.T_I * s * s)


def open_loop_margins(design: PidDesign, K: float) -> tuple[float, float]:
    """Solve ``|L(j w_s)| = 1`` and return ``(w_s, pi + arg L(j w_s))``."""
    def f(x):
        return math.log(abs(open_loop_response(design, K, math.exp(x))))

    # |L| is strictly decreasing; bracket around the double-integrator asymptote
    x0 = 0.5 * math.log(K * design.gamma / design.T_I)
    lo, hi = x0 - 5.0, x0 + 5.0 + abs(math.log(K * design.gamma))
    while f(lo) < 0:
        lo -= 5.0
    while f(hi) > 0:
        hi += 5.0
    x = brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    w_s = math.exp(x)
    return w_s, math.pi + float(np.angle(open_loop_response(design, K, w_s)))


def conservativeness(K: float, tau: float, gamma: float, T_I: float,
                     T_I_range=(0.01, 10.0), n_T_I: int = 61) -> dict:
    """Gap between the bound ``-20 log10(gamma)`` and the attained peak.

    Two readings are returned: the gap for the given ``T_I`` and the largest
    gap over a log sweep of ``T_I_range``.
    """
    bound_dB = -20.0 * math.log10(gamma)
    _, peak = syd_pid_peak(PidDesign(gamma, tau, T_I, math.pi / 4, 1 / gamma, 1.0), K, tau)
    worst = 0.0
    worst_T_I = T_I
    for ti in np.logspace(math.log10(T_I_range[0]), math.log10(T_I_range[1]), n_T_I):
        _, p = syd_pid_peak(PidDesign(gamma, tau, float(ti), math.pi / 4, 1 / gamma, 1.0), K, tau)
        if bound_dB - p > worst:
            worst, worst_T_I = bound_dB - p, float(ti)
    return {"bound_dB": bound_dB, "peak_dB": peak, "gap_at_design_dB": bound_dB - peak,
            "max_gap_over_sweep_dB": worst, "max_gap_T_I": worst_T_I,
            "T_I_range": list(T_I_range)}


def syd_sweep(K: float, tau: float, gamma: float, T_I_values, omega) -> dict:
    """Magnitude curves (dB) of the PD loop and PID loops for several ``T_I``."""
    w = np.asarray(omega, dtype=float)
    out = {"omega": w, "pd_dB": 20 * np.log10(syd_pd_magnitude(K, tau, gamma, w))}
    for ti in T_I_values:
        out[f"pid_T_I={ti:g}_dB"] = 20 * np.log10(np.abs(syd_pid_response(K, tau, gamma, ti, w)))
    return out
