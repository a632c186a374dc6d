"""Correlation-based frequency-response estimation and plant fitting."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.signal import correlate

from .errors import FitDiverged, InsufficientData, NonPositiveAutocorrelation
from .plant import LAB_PARAMS, PhysicalParams

__all__ = [
    "FrfPoint", "estimate_frf_point", "fit_plant", "model_magnitude",
    "write_frf_csv", "read_frf_csv", "read_io_csv", "write_io_csv",
]

MIN_SAMPLES_PER_PERIOD = 8
STEADY_STATE_DISCARD = 0.2


@dataclass(frozen=True)
class FrfPoint:
    omega: float
    magnitude: float
    phase: float          # rad, in (-2 pi, 0]
    r_uu_zero: float
    r_uy_max: float
    delta_tau: float      # s

    @property
    def magnitude_dB(self) -> float:
        return 20.0 * math.log10(self.magnitude) if self.magnitude > 0 else -math.inf


def _parabolic(a: float, b: float, c: float) -> tuple[float, float]:
    """Vertex offset and height of the parabola through ``(-1, a), (0, b), (1, c)``."""
    den = a - 2.0 * b + c
    if den == 0.0:
        return 0.0, b
    p = 0.5 * (a - c) / den
    return p, b - 0.25 * (a - c) * p


def estimate_frf_point(u, y, omega: float, sample_rate: float, n_periods: int = 20,
                       discard: float = STEADY_STATE_DISCARD) -> FrfPoint:
    """Estimate ``G(j omega)`` from input ``u`` and output ``y`` records.

    The first ``discard`` fraction of the record is dropped as transient. Over
    ``n_periods`` periods, ``|G| = max R_uy / R_uu(0)`` and
    ``arg G = -omega * dtau`` with ``dtau`` the lag of the ``R_uy`` peak,
    searched within one period and refined by parabolic interpolation.
    """
    u = np.asarray(u, dtype=float)
    y = np.asarray(y, dtype=float)
    if u.shape != y.shape or u.ndim != 1:
        raise InsufficientData("u and y must be 1-D series of equal length")
    spp = sample_rate * 2.0 * math.pi / omega
    if spp < MIN_SAMPLES_PER_PERIOD:
        raise InsufficientData(f"only {spp:.1f} samples per period (< {MIN_SAMPLES_PER_PERIOD})")
    n0 = int(discard * len(u))
    scale = float(np.mean(u * u)) + 1e-300
    u = u[n0:] - u[n0:].mean()
    y = y[n0:] - y[n0:].mean()
    n = int(round(n_periods * spp))
    P = int(math.ceil(spp))
    s0 = 1
    if len(u) < s0 + n + P + 3:
        raise InsufficientData(f"need {n_periods} periods plus one period of lag at steady state")
    u_seg = u[s0:s0 + n]
    r_uu0 = float(np.dot(u_seg, u_seg)) / n
    if r_uu0 <= 1e-12 * scale:
        raise NonPositiveAutocorrelation("input autocorrelation at lag 0 is not positive")
    # lags k = -1 .. P+2
    r_uy = correlate(y[s0 - 1:s0 + n + P + 2], u_seg, mode="valid") / n
    i = 1 + int(np.argmax(r_uy[1:P + 2]))
    offset, peak = _parabolic(r_uy[i - 1], r_uy[i], r_uy[i + 1])
    dtau = ((i - 1) + offset) / sample_rate
    phase = -math.fmod(omega * dtau, 2.0 * math.pi)
    if phase > 0.0:
        phase -= 2.0 * math.pi
    return FrfPoint(omega=float(omega), magnitude=float(peak / r_uu0), phase=float(phase),
                    r_uu_zero=r_uu0, r_uy_max=float(peak), delta_tau=float(dtau))


def model_magnitude(sigma: float, omega, params: PhysicalParams = LAB_PARAMS):
    """``|K / (jw (tau jw + 1))|`` with ``K = Psi/(R sigma)``, ``tau = m/sigma``."""
    w = np.asarray(omega, dtype=float)
    return (params.Psi / (params.R * sigma)) / (w * np.sqrt(w * w * (params.m / sigma) ** 2 + 1.0))


def fit_plant(points, fit_range=(4.0, 380.0), params: PhysicalParams = LAB_PARAMS):
    """Least-squares fit of the damping ``sigma`` to FRF magnitudes.

    Only magnitudes inside ``fit_range`` are used. Returns ``(sigma, K, tau)``.
    """
    lo, hi = fit_range
    sel = [p for p in points if lo <= p.omega <= hi]
    if len(sel) < 3:
        raise InsufficientData("need at least 3 FRF points inside the fit range")
    w = np.array([p.omega for p in sel])
    mag = np.array([p.magnitude for p in sel])

    def cost(log_sigma):
        return float(np.sum((model_magnitude(math.exp(log_sigma), w, params) - mag) ** 2))

    grid = np.linspace(math.log(1e-3), math.log(1e6), 400)
    costs = np.array([cost(x) for x in grid])
    i = int(np.argmin(costs))
    if i == 0 or i == len(grid) - 1:
        raise FitDiverged("no interior minimum for sigma in (1e-3, 1e6)")
    res = minimize_scalar(cost, bracket=(grid[i - 1], grid[i], grid[i + 1]),
                          method="golden", tol=1e-12)
    sigma = math.exp(res.x)
    if not (1e-3 < sigma < 1e6):
        raise FitDiverged("golden-section search left the sigma bracket")
    return sigma, params.Psi / (params.R * sigma), params.m / sigma


def write_frf_csv(points, path) -> None:
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["omega", "magnitude", "magnitude_dB", "phase_deg"])
        for p in points:
            wr.writerow([repr(float(v)) for v in
                         (p.omega, p.magnitude, p.magnitude_dB, math.degrees(p.phase))])


def read_frf_csv(path) -> list[FrfPoint]:
    """Read ``omega, magnitude, magnitude_dB, phase_deg`` rows (correlation fields are NaN)."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(FrfPoint(float(row["omega"]), float(row["magnitude"]),
                                math.radians(float(row["phase_deg"])),
                                math.nan, math.nan, math.nan))
    return out


def read_io_csv(path):
    """Return ``(t, u, y)`` from a CSV with those named columns."""
    data = np.genfromtxt(path, delimiter=",", names=True)
    return data["t"].astype(float), data["u"].astype(float), data["y"].astype(float)


def write_io_csv(path, t, u, y) -> None:
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["t", "u", "y"])
        for row in zip(t, u, y):
            wr.writerow([repr(float(v)) for v in row])
