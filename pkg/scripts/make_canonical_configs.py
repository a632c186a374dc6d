"""Regenerate the canonical JSON configs in configs/paper/."""
from __future__ import annotations

import argparse
from pathlib import Path

from csmcbench import experiments as ex
from csmcbench.config import dump_json, sim_config_to_dict
from csmcbench.controllers import controller_to_dict
from csmcbench.plant import CANONICAL_PLANT, LAB_PARAMS, plant_to_dict
from csmcbench.signals import Sine, signal_to_dict
from csmcbench.sim import SimConfig


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "configs" / "paper"))
    out = Path(ap.parse_args(argv).out)
    out.mkdir(parents=True, exist_ok=True)

    pid = ex.canonical_pid_gains()
    csmc = ex.canonical_csmc_gains()
    dump_json(plant_to_dict(CANONICAL_PLANT), out / "plant.json")
    dump_json(plant_to_dict(LAB_PARAMS), out / "physical_params.json")
    dump_json({"K": CANONICAL_PLANT.K, "tau": CANONICAL_PLANT.tau, "smax_db": ex.DESIGN_SMAX_DB,
               "phi_deg": ex.DESIGN_PHI_DEG, "gamma": ex.DESIGN_GAMMA}, out / "pid_design.json")
    dump_json(controller_to_dict(pid), out / "pid.json")
    dump_json(controller_to_dict(csmc), out / "csmc.json")
    for w in ex.ATTENUATION_FREQS:
        cfg = SimConfig(plant=CANONICAL_PLANT, controller=pid, disturbance=Sine(1.0, w),
                        t_end=max(10.0, 30 * 6.283185307179586 / w))
        dump_json(sim_config_to_dict(cfg), out / f"sim_pid_sine_{w:g}.json")
    cfg = SimConfig(plant=CANONICAL_PLANT, controller=csmc, disturbance=Sine(0.4, 2.0), t_end=30.0)
    dump_json(sim_config_to_dict(cfg), out / "sim_csmc_sine_2.json")
    dump_json({"plant": plant_to_dict(CANONICAL_PLANT), "pid": controller_to_dict(pid),
               "csmc": controller_to_dict(csmc), "chirp": signal_to_dict(ex.canonical_chirp()),
               "window": 2.0, "noise": None}, out / "compare_chirp.json")
    dump_json({"plant": plant_to_dict(CANONICAL_PLANT), "pid": controller_to_dict(pid),
               "csmc": controller_to_dict(csmc), "chirp": signal_to_dict(ex.canonical_chirp()),
               "window": 2.0, "noise": signal_to_dict(ex.CALIBRATED_NOISE)},
              out / "compare_chirp_noisy.json")


if __name__ == "__main__":
    main()
