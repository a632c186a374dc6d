"""Describing-function analysis of the PID-like continuous SMC.

The first-harmonic describing function of the CSMC law is

    N(A, w) = 2 a1 k1 / (pi A^(2/3)) + j 2 a2 k2 w^(1/2) / (pi A^(1/2))
              + 4 k3 / (pi A) * 1/(j w)

Limit cycles solve ``N(A, w) W(jw) = -1``; away from them the quasi-linear
disturbance sensitivity is ``W / (1 + N W)``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .controllers import CsmcGains
from .errors import DomainError, NearLimitCycle, NoConvergence, NonPhysicalSolution
from .plant import RationalTF, freq_response

__all__ = [
    "DfCoefficients", "DF_COEFFS", "HbSolution", "SensitivityMap",
    "describing_function", "hb_residual", "hb_grid_scan", "hb_solve",
    "predict_chattering", "csmc_sensitivity", "sensitivity_map",
    "write_map_csv", "read_map_csv", "DEFAULT_OMEGA_GRID", "DEFAULT_A_GRID",
]

NEAR_LIMIT_CYCLE_TOL = 1e-6
DEFAULT_OMEGA_GRID = np.logspace(0.0, math.log10(2000.0), 60)
DEFAULT_A_GRID = np.logspace(-5.0, -2.0, 40)


@dataclass(frozen=True)
class DfCoefficients:
    alpha1: float = 1.821
    alpha2: float = 1.748


DF_COEFFS = DfCoefficients()


@dataclass(frozen=True)
class HbSolution:
    A: float
    omega: float
    residual: float
    KK: float | None = None  # omega * mu when mu is known
    iterations: int = 0


@dataclass
class SensitivityMap:
    omega_grid: np.ndarray
    A_grid: np.ndarray
    magnitude_dB: np.ndarray  # shape (len(A_grid), len(omega_grid)); NaN near limit cycles


def _check_positive(A, omega):
    if np.any(np.asarray(A) <= 0) or np.any(np.asarray(omega) <= 0):
        raise DomainError("describing function needs A > 0 and omega > 0")


def describing_function(gains: CsmcGains, A, omega, coeffs: DfCoefficients = DF_COEFFS):
    _check_positive(A, omega)
    A = np.asarray(A, dtype=float)
    w = np.asarray(omega, dtype=float)
    prop = 2.0 * coeffs.alpha1 * gains.k1 / (math.pi * A ** (2.0 / 3.0))
    damp = 2.0 * coeffs.alpha2 * gains.k2 * np.sqrt(w) / (math.pi * np.sqrt(A))
    relay = 4.0 * gains.k3 / (math.pi * A * w)
    out = prop + 1j * (damp - relay)
    return complex(out) if out.ndim == 0 else out


def hb_residual(gains: CsmcGains, W: RationalTF, A, omega, coeffs: DfCoefficients = DF_COEFFS):
    """``N(A, w) W(jw) + 1``."""
    return describing_function(gains, A, omega, coeffs) * freq_response(W, omega) + 1.0


def hb_grid_scan(gains: CsmcGains, W: RationalTF, A_range=(1e-14, 1e-1),
                 omega_range=(1e-1, 1e6), n: int = 400, coeffs: DfCoefficients = DF_COEFFS):
    """Brute-force minimum of ``|N W + 1|`` on an ``n x n`` log grid.

    Returns ``(A, omega, residual, (A_grid, omega_grid))``.
    """
    A_grid = np.logspace(math.log10(A_range[0]), math.log10(A_range[1]), n)
    w_grid = np.logspace(math.log10(omega_range[0]), math.log10(omega_range[1]), n)
    Wj = freq_response(W, w_grid)
    N = describing_function(gains, A_grid[:, None], w_grid[None, :], coeffs)
    R = np.abs(N * Wj[None, :] + 1.0)
    i, j = np.unravel_index(int(np.argmin(R)), R.shape)
    return float(A_grid[i]), float(w_grid[j]), float(R[i, j]), (A_grid, w_grid)


def predict_chattering(L: float, lambda1: float, mu: float, KK: float,
                       alpha1: float = DF_COEFFS.alpha1) -> tuple[float, float]:
    """Closed-form amplitude and frequency of the residual oscillation.

    ``A = L (2 a1 l1 / (pi KK^2 (1 - KK^2)))^(3/2) mu^3`` and ``w = KK / mu``.
    """
    if not 0 < KK < 1:
        raise DomainError("KK must lie in (0, 1)")
    if not (L > 0 and mu > 0):
        raise DomainError("L and mu must be positive")
    A = L * (2.0 * alpha1 * lambda1 / (math.pi * KK * KK * (1.0 - KK * KK))) ** 1.5 * mu ** 3
    return A, KK / mu


def _newton(F, x, tol, max_iter):
    """Damped Newton on a 2-vector function of ``x = (log A, log w)``."""
    f = F(x)
    norm = np.hypot(*f)
    for it in range(max_iter):
        if norm <= tol:
            return x, norm, it
        J = np.empty((2, 2))
        for k in range(2):
            h = 1e-7 * max(1.0, abs(x[k]))
            e = np.zeros(2)
            e[k] = h
            J[:, k] = (F(x + e) - F(x - e)) / (2.0 * h)
        try:
            step = np.linalg.solve(J, -f)
        except np.linalg.LinAlgError:
            return x, norm, it
        if not np.all(np.isfinite(step)):
            return x, norm, it
        # cap the step: one Newton step should not move more than ~ 2 decades
        scale = min(1.0, 4.0 / max(np.abs(step).max(), 1e-300))
        t = scale
        for _ in range(40):
            x_new = x + t * step
            f_new = F(x_new)
            n_new = np.hypot(*f_new)
            if np.isfinite(n_new) and n_new < norm:
                break
            t *= 0.5
        else:
            return x, norm, it
        x, f, norm = x_new, f_new, n_new
    return x, norm, max_iter


def hb_solve(gains: CsmcGains, W: RationalTF, guess: tuple[float, float] | None = None,
             mu: float | None = None, tol: float = 1e-9, max_iter: int = 100,
             coeffs: DfCoefficients = DF_COEFFS) -> HbSolution:
    """Solve ``N(A, w) W(jw) = -1`` for the limit cycle ``(A, w)``.

    Seeds are tried in order: ``guess``; the closed-form prediction at
    ``KK = 0.5`` when ``mu`` is given; perturbations of those; finally the
    minimum of a coarse grid scan.
    """
    if not W.strictly_proper:
        raise DomainError("W must be strictly proper")
    if guess is not None and (guess[0] <= 0 or guess[1] <= 0):
        raise DomainError("initial guess must be positive")

    def F(x):
        with np.errstate(over="ignore", invalid="ignore"):
            A, w = math.exp(x[0]), math.exp(x[1])
            if not (0 < A < math.inf and 0 < w < math.inf):
                return np.array([np.inf, np.inf])
            r = hb_residual(gains, W, A, w, coeffs)
        return np.array([r.real, r.imag])

    seeds = []
    if guess is not None:
        seeds.append(guess)
    if mu is not None and mu > 0 and gains.L > 0:
        seeds.append(predict_chattering(gains.L, gains.lam[0], mu, 0.5, coeffs.alpha1))
    seeds += [(a * fa, w * fw) for a, w in list(seeds) for fa, fw in ((10, 1), (0.1, 1), (1, 3), (1, 1 / 3))]

    def grid_seed():
        A, w, _, _ = hb_grid_scan(gains, W, n=200, coeffs=coeffs)
        return A, w

    best = None
    non_physical = False
    for seed in seeds + [None]:
        if seed is None:
            seed = grid_seed()
        x, norm, it = _newton(F, np.log(np.asarray(seed, dtype=float)), tol * 0.1, max_iter)
        A, w = math.exp(x[0]), math.exp(x[1])
        if not (0 < A < math.inf and 0 < w < math.inf):
            non_physical = True
            continue
        if best is None or norm < best[2]:
            best = (A, w, norm, it)
        if norm <= tol:
            break
    if best is None:
        raise NonPhysicalSolution("iteration left the positive (A, omega) quadrant")
    A, w, norm, it = best
    if norm > tol:
        if non_physical:
            raise NonPhysicalSolution("no seed converged to a positive solution")
        raise NoConvergence(f"harmonic balance residual {norm:.3e} > {tol:.1e}")
    return HbSolution(A=A, omega=w, residual=float(norm),
                      KK=(w * mu if mu is not None else None), iterations=it)


def csmc_sensitivity(gains: CsmcGains, W: RationalTF, A: float, omega: float,
                     coeffs: DfCoefficients = DF_COEFFS) -> complex:
    """Quasi-linear ``W / (1 + N(A, w) W)`` at one point."""
    Wj = freq_response(W, omega)
    den = 1.0 + describing_function(gains, A, omega, coeffs) * Wj
    if abs(den) < NEAR_LIMIT_CYCLE_TOL:
        raise NearLimitCycle(f"(A={A:g}, omega={omega:g}) lies on the harmonic-balance locus")
    return complex(Wj / den)


def sensitivity_map(gains: CsmcGains, W: RationalTF, omega_grid=DEFAULT_OMEGA_GRID,
                    A_grid=DEFAULT_A_GRID, coeffs: DfCoefficients = DF_COEFFS) -> SensitivityMap:
    """``20 log10 |S_yd,CSMC|`` on the ``A x omega`` grid; NaN where ``|1 + N W| < 1e-6``."""
    w = np.asarray(omega_grid, dtype=float)
    A = np.asarray(A_grid, dtype=float)
    _check_positive(A, w)
    Wj = freq_response(W, w)[None, :]
    den = 1.0 + describing_function(gains, A[:, None], w[None, :], coeffs) * Wj
    with np.errstate(divide="ignore"):
        mag = 20.0 * np.log10(np.abs(Wj / den))
    mag[np.abs(den) < NEAR_LIMIT_CYCLE_TOL] = np.nan
    return SensitivityMap(w.copy(), A.copy(), mag)


def _fmt(x: float) -> str:
    return "NaN" if math.isnan(x) else repr(float(x))


def write_map_csv(smap: SensitivityMap, path) -> None:
    """Header row of omega values, first column A, body in dB (``NaN`` for gaps)."""
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["A\\omega"] + [_fmt(w) for w in smap.omega_grid])
        for a, row in zip(smap.A_grid, smap.magnitude_dB):
            wr.writerow([_fmt(a)] + [_fmt(v) for v in row])


def read_map_csv(path) -> SensitivityMap:
    with open(Path(path), newline="") as fh:
        rows = list(csv.reader(fh))
    omega = np.array([float(x) for x in rows[0][1:]])
    A = np.array([float(r[0]) for r in rows[1:]])
    body = np.array([[float(x) for x in r[1:]] for r in rows[1:]])
    return SensitivityMap(omega, A, body)
