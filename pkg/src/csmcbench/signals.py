"""Disturbance and reference signal generators.

Signals are small frozen dataclasses. ``sample`` evaluates them at scalar or
array times; ``lipschitz_bound`` returns an upper bound of ``|d'(t)|`` that is
used to scale the sliding-mode gains.

Angular frequencies are in rad/s throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from scipy.signal import lfilter

from .errors import NoiseNotLipschitz

__all__ = [
    "Sine", "Chirp", "BandLimitedNoise", "Constant", "Sum", "SignalSpec",
    "sample", "sampler", "lipschitz_bound", "signal_to_dict", "signal_from_dict",
]


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


@dataclass(frozen=True)
class Sine:
    """``amplitude * sin(frequency * t)``."""

    amplitude: float
    frequency: float

    def __post_init__(self):
        _require(self.amplitude > 0, "sine amplitude must be positive")
        _require(self.frequency > 0, "sine frequency must be positive")


@dataclass(frozen=True)
class Chirp:
    """Up-chirp ``A sin((w0 + rate*t) t)`` on ``[0, duration]``.

    The instantaneous frequency is ``w0 + 2*rate*t``. After ``duration`` the
    signal continues as a sinusoid at the end frequency with continuous phase.
    """

    amplitude: float
    start_frequency: float
    rate: float
    duration: float

    def __post_init__(self):
        _require(self.amplitude > 0, "chirp amplitude must be positive")
        _require(self.start_frequency >= 0, "chirp start frequency must be >= 0")
        _require(self.rate >= 0, "chirp rate must be >= 0")
        _require(self.duration > 0, "chirp duration must be positive")

    @classmethod
    def from_band(cls, amplitude: float, start_frequency: float,
                  end_frequency: float, duration: float) -> "Chirp":
        """Chirp whose instantaneous frequency reaches ``end_frequency`` at ``duration``."""
        rate = (end_frequency - start_frequency) / (2.0 * duration)
        return cls(amplitude, start_frequency, rate, duration)

    @property
    def end_frequency(self) -> float:
        return self.start_frequency + 2.0 * self.rate * self.duration

    def instantaneous_frequency(self, t):
        t = np.minimum(np.asarray(t, dtype=float), self.duration)
        return self.start_frequency + 2.0 * self.rate * t

    def phase(self, t):
        t = np.asarray(t, dtype=float)
        tc = np.minimum(t, self.duration)
        ph = (self.start_frequency + self.rate * tc) * tc
        return ph + self.end_frequency * np.maximum(t - self.duration, 0.0)


@dataclass(frozen=True)
class BandLimitedNoise:
    """Seeded Gaussian noise through a first-order low-pass.

    The stream is generated on a uniform grid with spacing ``sample_period``
    and held constant in between; ``std_dev`` is the stationary standard
    deviation of the filtered output.
    """

    std_dev: float
    bandwidth: float
    seed: int = 0
    sample_period: float = 2e-4

    def __post_init__(self):
        _require(self.std_dev >= 0, "noise std_dev must be >= 0")
        _require(self.bandwidth > 0, "noise bandwidth must be positive")
        _require(self.sample_period > 0, "noise sample_period must be positive")

    def stream(self, n: int) -> np.ndarray:
        """First ``n`` samples of the noise sequence."""
        rng = np.random.default_rng(self.seed)
        w = rng.standard_normal(max(n, 1))
        a = math.exp(-self.bandwidth * self.sample_period)
        b = self.std_dev * math.sqrt(1.0 - a * a)
        x = np.empty_like(w)
        x[0] = self.std_dev * w[0]
        if len(w) > 1:
            x[1:], _ = lfilter([b], [1.0, -a], w[1:], zi=[a * x[0]])
        return x[:n]


@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True)
class Sum:
    terms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))


SignalSpec = Union[Sine, Chirp, BandLimitedNoise, Constant, Sum]


def sampler(spec: SignalSpec, t_end: float) -> Callable[[np.ndarray], np.ndarray]:
    """Return a vectorised evaluator of ``spec`` valid on ``[0, t_end]``.

    Noise streams are generated once up front, so repeated calls during a long
    simulation stay linear in the run length.
    """
    if isinstance(spec, Sine):
        return lambda t: spec.amplitude * np.sin(spec.frequency * np.asarray(t, dtype=float))
    if isinstance(spec, Chirp):
        return lambda t: spec.amplitude * np.sin(spec.phase(t))
    if isinstance(spec, Constant):
        return lambda t: np.full(np.shape(t), float(spec.value))
    if isinstance(spec, BandLimitedNoise):
        n = int(math.floor(t_end / spec.sample_period + 1e-9)) + 2
        values = spec.stream(n)

        def noise(t):
            idx = np.floor(np.asarray(t, dtype=float) / spec.sample_period + 1e-9).astype(np.int64)
            if np.any(idx < 0) or np.any(idx >= n):
                raise ValueError("noise sampled outside the prepared time range")
            return values[idx]
        return noise
    if isinstance(spec, Sum):
        parts = [sampler(s, t_end) for s in spec.terms]

        def total(t):
            out = np.zeros(np.shape(t))
            for p in parts:
                out = out + p(t)
            return out
        return total
    raise TypeError(f"unknown signal spec {spec!r}")


def sample(spec: SignalSpec, t):
    """Evaluate ``spec`` at time(s) ``t >= 0``; scalar in, float out."""
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise ValueError("signals are defined for t >= 0")
    out = sampler(spec, float(arr.max()) if arr.size else 0.0)(arr)
    return float(out) if np.ndim(t) == 0 else out


def lipschitz_bound(spec: SignalSpec) -> float:
    """Upper bound of ``|d/dt spec(t)|`` over ``t >= 0``."""
    if isinstance(spec, Sine):
        return spec.amplitude * spec.frequency
    if isinstance(spec, Chirp):
        # phase derivative is w0 + 2*rate*t, capped at the end frequency
        return spec.amplitude * (spec.start_frequency + 2.0 * spec.rate * spec.duration)
    if isinstance(spec, Constant):
        return 0.0
    if isinstance(spec, Sum):
        return float(sum(lipschitz_bound(s) for s in spec.terms))
    if isinstance(spec, BandLimitedNoise):
        raise NoiseNotLipschitz("stochastic signals have no Lipschitz bound")
    raise TypeError(f"unknown signal spec {spec!r}")


_TAGS = {Sine: "sine", Chirp: "chirp", BandLimitedNoise: "noise", Constant: "constant", Sum: "sum"}
_CLASSES = {v: k for k, v in _TAGS.items()}


def signal_to_dict(spec: SignalSpec) -> dict:
    if isinstance(spec, Sum):
        return {"type": "sum", "terms": [signal_to_dict(s) for s in spec.terms]}
    out = {"type": _TAGS[type(spec)]}
    out.update({k: getattr(spec, k) for k in spec.__dataclass_fields__})
    return out


def signal_from_dict(data: dict) -> SignalSpec:
    data = dict(data)
    tag = data.pop("type")
    if tag == "sum":
        return Sum(tuple(signal_from_dict(d) for d in data["terms"]))
    if tag == "chirp" and "end_frequency" in data:
        return Chirp.from_band(data["amplitude"], data["start_frequency"],
                               data["end_frequency"], data["duration"])
    try:
        cls = _CLASSES[tag]
    except KeyError:
        raise ValueError(f"unknown signal type {tag!r}") from None
    return cls(**data)
