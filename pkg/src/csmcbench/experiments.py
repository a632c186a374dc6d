"""Canonical configurations and the experiment runners built on them.

These are the workflows behind the CLI subcommands and the scripts in
``scripts/``: sine attenuation runs, the chirp comparison of PID and CSMC,
and the closed-loop identification experiment.
"""
from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from .controllers import CsmcGains, csmc_gains_from_L
from .pid_design import ParallelPidGains, design_pid, to_parallel
from .plant import CANONICAL_PLANT, PlantModel, derive_plant, LAB_PARAMS
from .signals import BandLimitedNoise, Chirp, Sine
from .sim import SimConfig, simulate, steady_state_metrics, windowed_envelope
from .sysid import estimate_frf_point, fit_plant

DESIGN_GAMMA = 400.0
DESIGN_SMAX_DB = -52.0
DESIGN_PHI_DEG = 60.0
DESIGN_L = 0.4
DESIGN_RED_R = 8.0
ID_P_GAIN = 100.0
ATTENUATION_FREQS = (5.0, 10.0, 20.0)
#: sensor noise used for noisy runs: +/-12 um repeatability read as +/-3 sigma
CALIBRATED_NOISE = BandLimitedNoise(std_dev=4e-6, bandwidth=2 * math.pi * 250.0, seed=7)


def canonical_pid_design(plant: PlantModel = CANONICAL_PLANT):
    return design_pid(plant.K, plant.tau, DESIGN_SMAX_DB, DESIGN_PHI_DEG, gamma=DESIGN_GAMMA)


def canonical_pid_gains(plant: PlantModel = CANONICAL_PLANT) -> ParallelPidGains:
    return to_parallel(canonical_pid_design(plant))


def canonical_csmc_gains() -> CsmcGains:
    return csmc_gains_from_L(DESIGN_L)


def canonical_chirp(amplitude: float = 1.0) -> Chirp:
    return Chirp.from_band(amplitude, 0.06, 30.0, 60.0)


def sine_run(controller, omega: float, amplitude: float = 1.0, plant=CANONICAL_PLANT,
             noise=None, t_end: float | None = None, plant_step: float = 1e-5, **cfg):
    """Simulate a sine disturbance and measure the last half of the run."""
    if t_end is None:
        t_end = max(10.0, 30 * 2 * math.pi / omega)
    config = SimConfig(plant=plant, controller=controller, disturbance=Sine(amplitude, omega),
                       noise=noise, t_end=t_end, plant_step=plant_step, **cfg)
    trace = simulate(config)
    metrics = steady_state_metrics(trace, (0.5 * t_end, t_end), amplitude, omega)
    return trace, metrics


def compare_chirp(plant=CANONICAL_PLANT, pid: ParallelPidGains | None = None,
                  csmc: CsmcGains | None = None, chirp: Chirp | None = None,
                  window: float = 2.0, noise=None, plant_step: float = 1e-5):
    """Run both controllers on the same chirp and tabulate windowed envelopes.

    Returns ``(traces, table)`` where ``table`` maps column names to arrays:
    window centre, instantaneous frequency, error and control amplitudes.
    """
    pid = canonical_pid_gains() if pid is None else pid
    csmc = canonical_csmc_gains() if csmc is None else csmc
    chirp = canonical_chirp() if chirp is None else chirp
    traces = {}
    table = {}
    for name, ctrl in (("pid", pid), ("csmc", csmc)):
        cfg = SimConfig(plant=plant, controller=ctrl, disturbance=chirp, noise=noise,
                        t_end=chirp.duration, plant_step=plant_step)
        tr = simulate(cfg)
        traces[name] = tr
        centres, e_amp = windowed_envelope(tr, window)
        _, u_amp = windowed_envelope(tr, window, column="u")
        table["t_center"] = centres
        table["omega_inst"] = chirp.instantaneous_frequency(centres)
        table[f"{name}_error_amplitude"] = e_amp
        table[f"{name}_attenuation_dB"] = 20 * np.log10(np.maximum(e_amp, 1e-300) / chirp.amplitude)
        table[f"{name}_control_amplitude"] = u_amp
    return traces, table


def identification_experiment(plant=None, omegas=None, amplitude: float = 1.0,
                              p_gain: float = ID_P_GAIN, n_periods: int = 20,
                              settle: float = 1.0, plant_step: float = 1e-5):
    """Closed-loop sine experiments under proportional control.

    The recorded input is the voltage at the plant input, ``u + d``. Returns a
    list of ``(omega, t, u_in, y)`` tuples.
    """
    plant = derive_plant(LAB_PARAMS) if plant is None else plant
    omegas = np.logspace(math.log10(4.0), math.log10(380.0), 10) if omegas is None else omegas
    ctrl = ParallelPidGains(p_gain, 0.0, 0.0)
    runs = []
    for w in omegas:
        period = 2 * math.pi / w
        t_end = max((n_periods + 3) * period / 0.8, 5.0 * settle)
        cfg = SimConfig(plant=plant, controller=ctrl, disturbance=Sine(amplitude, float(w)),
                        t_end=t_end, plant_step=plant_step, measurement_range=None)
        tr = simulate(cfg)
        runs.append((float(w), tr.t, tr.u + tr.d, tr.y))
    return runs


def identify(runs, sample_rate: float = 5000.0, n_periods: int = 20,
             fit_range=(4.0, 380.0), params=LAB_PARAMS):
    """FRF points and the fitted ``(sigma, K, tau)`` from experiment records."""
    points = [estimate_frf_point(u, y, w, sample_rate, n_periods) for w, _, u, y in runs]
    return points, fit_plant(points, fit_range, params)


def with_mu(plant: PlantModel, mu: float) -> PlantModel:
    return replace(plant, mu=mu)
