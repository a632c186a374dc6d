"""JSON (de)serialisation of simulation configs."""
from __future__ import annotations

import json
from pathlib import Path

from .controllers import controller_from_dict, controller_to_dict
from .errors import ConfigError
from .plant import load_plant, plant_to_dict
from .signals import signal_from_dict, signal_to_dict
from .sim import SimConfig

_SCALARS = ("reference", "t_end", "plant_step", "control_period", "initial_y",
            "gravity_comp_enabled", "saturation", "red_r")


def sim_config_to_dict(cfg: SimConfig) -> dict:
    out = {
        "plant": plant_to_dict(cfg.plant),
        "controller": controller_to_dict(cfg.controller),
        "disturbance": signal_to_dict(cfg.disturbance),
        "noise": signal_to_dict(cfg.noise) if cfg.noise is not None else None,
    }
    out.update({k: getattr(cfg, k) for k in _SCALARS})
    mr = cfg.measurement_range
    out["measurement_range"] = list(mr) if mr is not None else None
    return out


def sim_config_from_dict(data: dict) -> SimConfig:
    try:
        kwargs = {
            "plant": load_plant(data["plant"]),
            "controller": controller_from_dict(data["controller"]),
        }
        if data.get("disturbance") is not None:
            kwargs["disturbance"] = signal_from_dict(data["disturbance"])
        if data.get("noise") is not None:
            kwargs["noise"] = signal_from_dict(data["noise"])
        kwargs.update({k: data[k] for k in _SCALARS if k in data})
        if "measurement_range" in data:
            mr = data["measurement_range"]
            kwargs["measurement_range"] = tuple(mr) if mr is not None else None
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid simulation config: {exc}") from exc
    return SimConfig(**kwargs)


def load_sim_config(source) -> SimConfig:
    if isinstance(source, (str, Path)):
        source = json.loads(Path(source).read_text(encoding="utf-8"))
    return sim_config_from_dict(source)


def load_chirp_config(source) -> dict:
    """Keyword arguments for :func:`csmcbench.experiments.compare_chirp` from JSON.

    Recognised keys: ``plant``, ``pid``, ``csmc``, ``chirp``, ``window``, ``noise``.
    Missing keys fall back to the runner's defaults.
    """
    if isinstance(source, (str, Path)):
        source = json.loads(Path(source).read_text(encoding="utf-8"))
    try:
        out = {}
        if source.get("plant") is not None:
            out["plant"] = load_plant(source["plant"])
        for key in ("pid", "csmc"):
            if source.get(key) is not None:
                out[key] = controller_from_dict(source[key])
        for key in ("chirp", "noise"):
            if source.get(key) is not None:
                out[key] = signal_from_dict(source[key])
        if "window" in source:
            out["window"] = float(source["window"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid chirp config: {exc}") from exc
    return out


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
