"""PID vs CSMC on the canonical up-chirp; prints the windowed metrics table."""
from __future__ import annotations

import argparse
from pathlib import Path

from csmcbench.cli import main as cli_main

CONFIG = Path(__file__).resolve().parents[1] / "configs" / "paper" / "compare_chirp.json"


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/compare_chirp")
    ap.add_argument("--noise", action="store_true")
    args = ap.parse_args(argv)
    flags = ["compare-chirp", "--config", str(CONFIG), "--out", args.out]
    if args.noise:
        flags.append("--noise")
    cli_main(flags)
    print((Path(args.out) / "metrics.csv").read_text())


if __name__ == "__main__":
    main()
