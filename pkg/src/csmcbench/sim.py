"""Fixed-step closed-loop simulator of the standard output-feedback loop.

Continuous part (RK4 at ``plant_step``)::

    tau y'' + y' = K (a + d) - g tau      (g term only for PhysicalParams plants)
    mu a' = v - a                         (a = v when mu == 0)

Sampled part (every ``control_period``): noisy, clamped measurement -> RED ->
controller -> zero-order hold on ``v = u + u_g``. The disturbance enters at the
plant input, after the actuator lag.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from numba import njit

from .controllers import CsmcGains, _csmc_update, _pid_update
from .errors import ConfigError, NumericBlowup, WindowTooShort
from .pid_design import ParallelPidGains
from .plant import PhysicalParams, PlantModel, derive_plant, gravity_compensation
from .red import DEFAULT_R, _red_update
from .signals import Constant, SignalSpec, sampler

__all__ = [
    "SimConfig", "SimTrace", "simulate", "steady_state_metrics", "windowed_envelope",
    "TRACE_COLUMNS", "ATTENUATION_FLOOR_DB",
]

TRACE_COLUMNS = ("t", "y", "y_dot_red", "u", "d", "e", "saturated")
ATTENUATION_FLOOR_DB = -200.0
BLOWUP_LIMIT = 1e3
_BLOCK_TICKS = 5000


@dataclass
class SimConfig:
    plant: Union[PlantModel, PhysicalParams]
    controller: Union[ParallelPidGains, CsmcGains]
    disturbance: SignalSpec = field(default_factory=lambda: Constant(0.0))
    noise: Optional[SignalSpec] = None
    reference: float = 0.0          # offset from initial_y [m]
    t_end: float = 1.0
    plant_step: float = 1e-5
    control_period: float = 2e-4
    initial_y: float = 0.009
    gravity_comp_enabled: bool = True
    saturation: Optional[float] = None          # +/- limit on the applied voltage
    measurement_range: Optional[tuple] = (0.0, 0.018)
    red_r: float = DEFAULT_R

    def substeps(self) -> int:
        if not (self.plant_step > 0 and self.control_period > 0 and self.t_end > 0):
            raise ConfigError("steps and t_end must be positive")
        if self.plant_step > self.control_period:
            raise ConfigError("plant_step must not exceed control_period")
        ratio = self.control_period / self.plant_step
        n = int(round(ratio))
        if abs(ratio - n) > 1e-9 * ratio:
            raise ConfigError("control_period must be an integer multiple of plant_step")
        return n


@dataclass
class SimTrace:
    t: np.ndarray
    y: np.ndarray
    y_dot_red: np.ndarray
    u: np.ndarray
    d: np.ndarray
    e: np.ndarray
    saturated: np.ndarray

    def __len__(self):
        return len(self.t)

    @property
    def any_saturated(self) -> bool:
        return bool(np.any(self.saturated))

    def window(self, t1: float, t2: float) -> np.ndarray:
        return (self.t >= t1) & (self.t < t2)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(TRACE_COLUMNS)
            for row in zip(self.t, self.y, self.y_dot_red, self.u, self.d, self.e, self.saturated):
                wr.writerow([repr(float(v)) for v in row[:-1]] + [int(row[-1])])

    @classmethod
    def from_csv(cls, path) -> "SimTrace":
        data = np.genfromtxt(path, delimiter=",", names=True)
        cols = {c: np.atleast_1d(data[c]).astype(float) for c in TRACE_COLUMNS}
        cols["saturated"] = cols["saturated"].astype(bool)
        return cls(**cols)


@njit(cache=True)
def _run_block(state, red, ctrl, params, d_half, noise, nsub, h, dtc, k0,
               out_t, out_y, out_yd, out_u, out_d, out_e, out_sat):
    """Advance ``len(noise)`` control ticks. Returns 0, or 1 on blow-up."""
    K, tau, mu, grav, ug, yref = params[0], params[1], params[2], params[3], params[4], params[5]
    sat, ylo, yhi, r_red = params[6], params[7], params[8], params[9]
    ctype, g1, g2, g3 = params[10], params[11], params[12], params[13]
    use_act = mu > 0.0
    y, v, a = state[0], state[1], state[2]
    x0, x1, x2 = red[0], red[1], red[2]
    integ = ctrl[0]
    nt = noise.shape[0]
    for j in range(nt):
        k = k0 + j
        flag = False
        ym = y + noise[j]
        if ylo < yhi:
            if ym < ylo:
                ym = ylo
                flag = True
            elif ym > yhi:
                ym = yhi
                flag = True
        x0, x1, x2 = _red_update(x0, x1, x2, ym, r_red, dtc)
        if ctype == 0.0:
            u, integ = _pid_update(g1, g2, g3, yref - ym, -x1, integ, dtc)
        else:
            u, integ = _csmc_update(g1, g2, g3, ym - yref, x1, integ, dtc)
        cmd = u + ug
        if sat > 0.0:
            if cmd > sat:
                cmd = sat
                flag = True
            elif cmd < -sat:
                cmd = -sat
                flag = True
        out_t[k] = k * dtc
        out_y[k] = y
        out_yd[k] = x1
        out_u[k] = cmd - ug
        out_d[k] = d_half[2 * j * nsub]
        out_e[k] = yref - y
        out_sat[k] = flag
        if not use_act:
            a = cmd
        for i in range(nsub):
            base = 2 * (j * nsub + i)
            d0 = d_half[base]
            dm = d_half[base + 1]
            d1 = d_half[base + 2]
            # y' = v, v' = (K (a + d) - v) / tau - g, a' = (cmd - a) / mu
            k1y = v
            k1v = (K * (a + d0) - v) / tau - grav
            k1a = (cmd - a) / mu if use_act else 0.0
            a2 = a + 0.5 * h * k1a
            v2 = v + 0.5 * h * k1v
            k2y = v2
            k2v = (K * (a2 + dm) - v2) / tau - grav
            k2a = (cmd - a2) / mu if use_act else 0.0
            a3 = a + 0.5 * h * k2a
            v3 = v + 0.5 * h * k2v
            k3y = v3
            k3v = (K * (a3 + dm) - v3) / tau - grav
            k3a = (cmd - a3) / mu if use_act else 0.0
            a4 = a + h * k3a
            v4 = v + h * k3v
            k4y = v4
            k4v = (K * (a4 + d1) - v4) / tau - grav
            k4a = (cmd - a4) / mu if use_act else 0.0
            y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
            a += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        if not (abs(y) <= 1e3):
            state[0], state[1], state[2] = y, v, a
            return 1
    state[0], state[1], state[2] = y, v, a
    red[0], red[1], red[2] = x0, x1, x2
    ctrl[0] = integ
    return 0


def _plant_terms(plant):
    """``(K, tau, mu, gravity accel, gravity-compensation voltage)``."""
    if isinstance(plant, PhysicalParams):
        model = derive_plant(plant)
        return model.K, model.tau, model.mu, plant.g, gravity_compensation(plant)
    if isinstance(plant, PlantModel):
        if plant.tau <= 0:
            raise ConfigError("simulation needs tau > 0")
        return plant.K, plant.tau, plant.mu, 0.0, 0.0
    raise ConfigError(f"unsupported plant {plant!r}")


def simulate(config: SimConfig) -> SimTrace:
    nsub = config.substeps()
    h = config.plant_step
    dtc = config.control_period
    n_ticks = int(round(config.t_end / dtc))
    if n_ticks < 1:
        raise ConfigError("t_end shorter than one control period")
    K, tau, mu, g, ug = _plant_terms(config.plant)
    gravity_in_plant = g if isinstance(config.plant, PhysicalParams) else 0.0
    comp = ug if config.gravity_comp_enabled else 0.0
    yref = config.initial_y + config.reference

    ctrl = config.controller
    if isinstance(ctrl, CsmcGains):
        ctype, gains = 1.0, (ctrl.k1, ctrl.k2, ctrl.k3)
    elif isinstance(ctrl, ParallelPidGains):
        ctype, gains = 0.0, (ctrl.Kp, ctrl.Ki, ctrl.Kd)
    else:
        raise ConfigError(f"unsupported controller {ctrl!r}")
    lo, hi = config.measurement_range if config.measurement_range else (0.0, 0.0)
    sat = float(config.saturation) if config.saturation else 0.0
    params = np.array([K, tau, mu, gravity_in_plant, comp, yref, sat, lo, hi,
                       config.red_r, ctype, *gains], dtype=float)

    t_total = n_ticks * dtc
    d_of = sampler(config.disturbance, t_total + dtc)
    ticks = np.arange(n_ticks) * dtc
    noise = (sampler(config.noise, t_total + dtc)(ticks) if config.noise is not None
             else np.zeros(n_ticks))
    noise = np.ascontiguousarray(noise, dtype=float)

    state = np.array([config.initial_y, 0.0, comp])
    y_meas0 = config.initial_y + noise[0]
    if hi > lo:
        y_meas0 = min(max(y_meas0, lo), hi)
    red = np.array([y_meas0, 0.0, 0.0])
    cstate = np.zeros(1)
    out = {c: np.empty(n_ticks) for c in TRACE_COLUMNS[:-1]}
    out_sat = np.zeros(n_ticks, dtype=np.bool_)

    for k0 in range(0, n_ticks, _BLOCK_TICKS):
        nblk = min(_BLOCK_TICKS, n_ticks - k0)
        idx = np.arange(2 * nblk * nsub + 1) + 2 * k0 * nsub
        d_half = np.ascontiguousarray(d_of(idx * (h / 2.0)), dtype=float)
        status = _run_block(state, red, cstate, params, d_half, noise[k0:k0 + nblk],
                            nsub, h, dtc, k0, out["t"], out["y"], out["y_dot_red"],
                            out["u"], out["d"], out["e"], out_sat)
        if status:
            raise NumericBlowup(f"|y| exceeded {BLOWUP_LIMIT:g} m near t={(k0 + nblk) * dtc:.3f} s")
    return SimTrace(saturated=out_sat, **out)


def _half_p2p(x: np.ndarray) -> float:
    return 0.5 * float(x.max() - x.min()) if x.size else 0.0


def steady_state_metrics(trace: SimTrace, window, disturbance_amplitude: float,
                         disturbance_frequency: float | None = None) -> dict:
    """Error/control statistics over ``window = (t1, t2)``.

    The window must cover at least three disturbance periods; without an
    explicit frequency the periods are counted from zero crossings of ``d``.
    """
    t1, t2 = window
    if t1 < trace.t[0] - 1e-12 or t2 > trace.t[-1] + 2 * (trace.t[1] - trace.t[0]) or t2 <= t1:
        raise WindowTooShort("window lies outside the trace")
    m = trace.window(t1, t2)
    if disturbance_frequency is not None:
        periods = (t2 - t1) * disturbance_frequency / (2 * math.pi)
    else:
        d = trace.d[m] - np.mean(trace.d[m])
        crossings = np.count_nonzero(np.signbit(d[1:]) != np.signbit(d[:-1]))
        periods = crossings / 2.0
    if periods < 3.0:
        raise WindowTooShort(f"window spans {periods:.2f} disturbance periods (< 3)")
    err_amp = _half_p2p(trace.e[m])
    u = trace.u[m]
    if err_amp > 0 and disturbance_amplitude > 0:
        att = max(20.0 * math.log10(err_amp / disturbance_amplitude), ATTENUATION_FLOOR_DB)
    else:
        att = ATTENUATION_FLOOR_DB
    return {"error_amplitude": err_amp, "attenuation_dB": att,
            "control_amplitude": _half_p2p(u), "control_rms_power": float(np.mean(u * u))}


def windowed_envelope(trace: SimTrace, width: float, t_start: float = 0.0,
                      t_stop: float | None = None, column: str = "e"):
    """Half peak-to-peak of ``column`` over consecutive windows.

    Returns ``(window_centres, amplitudes)``.
    """
    t_stop = trace.t[-1] + (trace.t[1] - trace.t[0]) if t_stop is None else t_stop
    x = getattr(trace, column)
    edges = np.arange(t_start, t_stop - 1e-9, width)
    centres, amps = [], []
    for a in edges:
        b = a + width
        if b > t_stop + 1e-9:
            break
        m = trace.window(a, b)
        centres.append(a + 0.5 * width)
        amps.append(_half_p2p(x[m]))
    return np.array(centres), np.array(amps)
