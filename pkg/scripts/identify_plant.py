"""Closed-loop identification on simulated data and the sigma fit."""
from __future__ import annotations

import argparse
import math

from csmcbench import experiments as ex
from csmcbench.plant import LAB_PARAMS, derive_plant


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--amplitude", type=float, default=1.0)
    args = ap.parse_args(argv)
    truth = derive_plant(LAB_PARAMS)
    runs = ex.identification_experiment(truth, amplitude=args.amplitude)
    points, (sigma, K, tau) = ex.identify(runs)
    for p in points:
        print(f"omega={p.omega:8.2f}  |G|={p.magnitude_dB:8.2f} dB  phase={math.degrees(p.phase):8.2f} deg")
    print(f"sigma={sigma:.4f}  K={K:.6f} (true {truth.K:.6f})  tau={tau:.6f} (true {truth.tau:.6f})")


if __name__ == "__main__":
    main()
