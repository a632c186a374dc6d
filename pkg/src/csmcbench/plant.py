"""Linear plant models of the voice-coil drive.

Polynomials are stored in *ascending* powers of ``s``: ``(a0, a1, a2)`` means
``a0 + a1 s + a2 s^2``.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Union

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import PoleOnAxis

__all__ = [
    "PhysicalParams", "PlantModel", "RationalTF", "LAB_PARAMS", "CANONICAL_PLANT",
    "derive_plant", "gravity_compensation", "plant_tf", "actuator_tf",
    "freq_response", "load_plant", "plant_to_dict",
]

POLE_TOL = 1e-12


@dataclass(frozen=True)
class PhysicalParams:
    m: float            # moving mass [kg]
    sigma: float        # viscous damping [N s/m]
    Psi: float          # back-EMF constant [V s/m]
    R: float            # coil resistance [V/A]
    g: float = 9.81     # gravity [m/s^2]
    mu: float = 1.2e-3  # actuator time constant [s]

    def __post_init__(self):
        for name in ("m", "sigma", "Psi", "R", "mu"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.g < 0:
            raise ValueError("g must be >= 0")


@dataclass(frozen=True)
class PlantModel:
    """``G(s) = K / (s (tau s + 1))`` with optional actuator lag ``1/(mu s + 1)``."""

    K: float
    tau: float
    mu: float = 0.0

    def __post_init__(self):
        if not self.K > 0:
            raise ValueError("K must be positive")
        if self.tau < 0 or self.mu < 0:
            raise ValueError("tau and mu must be >= 0")


#: Identified values of the voice-coil drive.
LAB_PARAMS = PhysicalParams(m=0.538, sigma=80.4884, Psi=17.16, R=5.32, g=9.81, mu=1.2e-3)
#: Model used for all reproduction targets (stated K, not Psi/(R sigma)).
CANONICAL_PLANT = PlantModel(K=0.0408, tau=0.006684, mu=1.2e-3)


def _trim(c) -> tuple:
    c = [float(x) for x in np.atleast_1d(c)]
    while len(c) > 1 and c[-1] == 0.0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class RationalTF:
    num: tuple
    den: tuple

    def __post_init__(self):
        num, den = _trim(self.num), _trim(self.den)
        if not any(den):
            raise ValueError("denominator is identically zero")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @property
    def order(self) -> int:
        return len(self.den) - 1

    @property
    def strictly_proper(self) -> bool:
        return len(_trim(self.num)) < len(self.den) or not any(self.num)

    def __call__(self, s):
        return P.polyval(s, self.num) / P.polyval(s, self.den)

    def __mul__(self, other: "RationalTF") -> "RationalTF":
        if isinstance(other, (int, float)):
            return RationalTF(np.multiply(self.num, other), self.den)
        return RationalTF(P.polymul(self.num, other.num), P.polymul(self.den, other.den))

    __rmul__ = __mul__

    def __add__(self, other: "RationalTF") -> "RationalTF":
        num = P.polyadd(P.polymul(self.num, other.den), P.polymul(other.num, self.den))
        return RationalTF(num, P.polymul(self.den, other.den))

    def feedback(self, other: "RationalTF") -> "RationalTF":
        """``self / (1 + self*other)`` without cancelling common factors."""
        num = P.polymul(self.num, other.den)
        den = P.polyadd(P.polymul(self.den, other.den), P.polymul(self.num, other.num))
        return RationalTF(num, den)

    def freq_response(self, omega):
        return freq_response(self, omega)


def freq_response(tf: RationalTF, omega):
    """Complex gain ``tf(j omega)``; raises :class:`PoleOnAxis` on an imaginary-axis pole."""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise ValueError("omega must be >= 0")
    s = 1j * w
    den = P.polyval(s, tf.den)
    if np.any(np.abs(den) < POLE_TOL * np.linalg.norm(tf.den)):
        raise PoleOnAxis(f"denominator vanishes on the imaginary axis (omega={omega})")
    out = P.polyval(s, tf.num) / den
    return complex(out) if np.ndim(omega) == 0 else out


def derive_plant(params: PhysicalParams) -> PlantModel:
    return PlantModel(K=params.Psi / (params.R * params.sigma),
                      tau=params.m / params.sigma, mu=params.mu)


def gravity_compensation(params: PhysicalParams) -> float:
    """Constant input voltage ``m g R / Psi`` that balances gravity."""
    return params.m * params.g * params.R / params.Psi


def actuator_tf(mu: float) -> RationalTF:
    return RationalTF((1.0,), (1.0, mu))


def plant_tf(model: PlantModel, include_actuator: bool = False) -> RationalTF:
    G = RationalTF((model.K,), (0.0, 1.0, model.tau))
    if include_actuator and model.mu > 0:
        G = G * actuator_tf(model.mu)
    return G


def plant_to_dict(plant: Union[PlantModel, PhysicalParams]) -> dict:
    return asdict(plant)


def load_plant(source) -> Union[PlantModel, PhysicalParams]:
    """Read a plant from a JSON file path or an already-parsed dict.

    ``{K, tau, mu}`` gives a :class:`PlantModel`; ``{m, sigma, Psi, R, g, mu}``
    gives :class:`PhysicalParams`.
    """
    if isinstance(source, (str, Path)):
        source = json.loads(Path(source).read_text())
    data = dict(source)
    cls = PlantModel if "K" in data else PhysicalParams
    return cls(**{k: v for k, v in data.items() if k in cls.__dataclass_fields__})
