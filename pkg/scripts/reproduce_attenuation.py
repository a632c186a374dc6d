"""Noise-free PID sine runs at 5, 10 and 20 rad/s with the analytic |S_yd| alongside."""
from __future__ import annotations

import argparse

import numpy as np

from csmcbench import experiments as ex
from csmcbench.pid_design import syd_pid_response


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--omegas", nargs="+", type=float, default=list(ex.ATTENUATION_FREQS))
    ap.add_argument("--noise", action="store_true")
    args = ap.parse_args(argv)
    design = ex.canonical_pid_design()
    gains = ex.canonical_pid_gains()
    noise = ex.CALIBRATED_NOISE if args.noise else None
    print(f"{'omega':>7} {'sim_dB':>9} {'theory_dB':>10} {'u_amp':>7}")
    for w in args.omegas:
        _, m = ex.sine_run(gains, w, noise=noise)
        theory = 20 * np.log10(abs(syd_pid_response(ex.CANONICAL_PLANT.K, design.tau, design.gamma, design.T_I, w)))
        print(f"{w:7.2f} {m['attenuation_dB']:9.3f} {theory:10.3f} {m['control_amplitude']:7.3f}")


if __name__ == "__main__":
    main()
