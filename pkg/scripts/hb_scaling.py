"""Limit-cycle amplitude and frequency versus actuator time constant."""
from __future__ import annotations

import argparse

from csmcbench.controllers import csmc_gains_from_L
from csmcbench.hb_analysis import hb_solve
from csmcbench.plant import RationalTF


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--L", type=float, default=0.4)
    ap.add_argument("--mus", nargs="+", type=float, default=[0.5e-3, 1e-3, 1.2e-3, 2e-3])
    args = ap.parse_args(argv)
    gains = csmc_gains_from_L(args.L)
    print(f"{'mu':>9} {'A':>12} {'omega':>10} {'A/mu^3':>12}")
    for mu in args.mus:
        sol = hb_solve(gains, RationalTF((1.0,), (0.0, 0.0, 1.0, mu)), mu=mu)
        print(f"{mu:9.2e} {sol.A:12.4e} {sol.omega:10.2f} {sol.A / mu**3:12.4e}")


if __name__ == "__main__":
    main()
