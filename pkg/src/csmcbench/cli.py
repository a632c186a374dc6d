"""Command-line front end.

Subcommands: identify, design-pid, design-csmc, analyze-sens, hb-solve,
simulate, compare-chirp. Domain errors exit with status 1 and a JSON record
on stderr; usage errors exit with status 2.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import experiments as ex
from .config import dump_json, load_chirp_config, load_sim_config
from .controllers import DEFAULT_LAMBDA, csmc_gains_from_L
from .errors import WorkbenchError
from .hb_analysis import hb_solve, sensitivity_map, write_map_csv
from .pid_design import conservativeness, design_pid, syd_sweep, to_parallel
from .plant import CANONICAL_PLANT, LAB_PARAMS, PlantModel, RationalTF, load_plant, plant_tf
from .sim import simulate
from .sysid import fit_plant, estimate_frf_point, read_io_csv, write_frf_csv, write_io_csv


def _outdir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _emit(obj, out: Path | None, name: str) -> None:
    text = dump_json(obj)
    sys.stdout.write(text)
    if out is not None:
        (out / name).write_text(text, encoding="utf-8")


def _write_columns(path, columns: dict) -> None:
    keys = list(columns)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(keys)
        for row in zip(*(columns[k] for k in keys)):
            wr.writerow([repr(float(v)) for v in row])


def _plant_model(path) -> PlantModel:
    if path is None:
        return CANONICAL_PLANT
    plant = load_plant(path)
    if isinstance(plant, PlantModel):
        return plant
    from .plant import derive_plant
    return derive_plant(plant)


def cmd_identify(args) -> int:
    out = _outdir(args.out) if args.out else None
    params = load_plant(args.params) if args.params else LAB_PARAMS
    if args.trace:
        runs = []
        for path, omega in args.trace:
            t, u, y = read_io_csv(path)
            runs.append((float(omega), t, u, y))
    else:
        runs = ex.identification_experiment(amplitude=args.amplitude)
        if out is not None and args.save_traces:
            for w, t, u, y in runs:
                write_io_csv(out / f"id_trace_w{w:.4g}.csv", t, u, y)
    points = []
    for w, t, u, y in runs:
        rate = args.sample_rate or 1.0 / float(np.median(np.diff(t)))
        points.append(estimate_frf_point(u, y, w, rate, args.periods))
    sigma, K, tau = fit_plant(points, tuple(args.fit_range), params)
    if out is not None:
        write_frf_csv(points, out / "frf.csv")
    _emit({"sigma": sigma, "K": K, "tau": tau, "mu": params.mu}, out, "fit.json")
    return 0


def cmd_design_pid(args) -> int:
    out = _outdir(args.out) if args.out else None
    d = design_pid(args.K, args.tau, args.smax_db, args.phi_deg, gamma=args.gamma)
    g = to_parallel(d)
    cons = conservativeness(args.K, args.tau, d.gamma, d.T_I)
    result = {"type": "pid", "gamma": d.gamma, "T_I": d.T_I, "omega_s": d.omega_s,
              "Phi_deg": math.degrees(d.Phi), "Kp": g.Kp, "Ki": g.Ki, "Kd": g.Kd,
              "conservativeness": cons}
    _emit(result, out, "pid_design.json")
    if out is not None:
        w = np.logspace(-2, 4, 600)
        _write_columns(out / "syd_sweep.csv",
                       syd_sweep(args.K, args.tau, d.gamma, [0.01, 0.1, d.T_I, 1.0, 10.0], w))
    return 0


def cmd_design_csmc(args) -> int:
    gains = csmc_gains_from_L(args.L, tuple(args.lam))
    _emit({"type": "csmc", "L": gains.L, "lambda": list(gains.lam),
           "k1": gains.k1, "k2": gains.k2, "k3": gains.k3},
          _outdir(args.out) if args.out else None, "csmc_gains.json")
    return 0


def _loop_tf(args) -> RationalTF:
    if args.normalized:
        return RationalTF((1.0,), np.polynomial.polynomial.polymul([0, 0, 1.0], [1.0, args.mu]))
    model = _plant_model(args.plant)
    if args.mu is not None:
        model = PlantModel(model.K, model.tau, args.mu)
    return plant_tf(model, include_actuator=True)


def cmd_analyze_sens(args) -> int:
    gains = csmc_gains_from_L(args.L)
    W = _loop_tf(args)
    w = np.logspace(math.log10(args.w_range[0]), math.log10(args.w_range[1]), args.n_w)
    if args.amplitudes:
        A = np.array(args.amplitudes, dtype=float)
    else:
        A = np.logspace(math.log10(args.A_range[0]), math.log10(args.A_range[1]), args.n_A)
    smap = sensitivity_map(gains, W, w, A)
    path = Path(args.out)
    path.parent.mkdir(parents=True, exist_ok=True)
    write_map_csv(smap, path)
    return 0


def cmd_hb_solve(args) -> int:
    gains = csmc_gains_from_L(args.L)
    W = _loop_tf(args)
    mu = args.mu if args.mu is not None else (None if args.normalized else _plant_model(args.plant).mu)
    sol = hb_solve(gains, W, guess=tuple(args.guess) if args.guess else None, mu=mu)
    _emit(asdict(sol), _outdir(args.out) if args.out else None, "hb_solution.json")
    return 0


def cmd_simulate(args) -> int:
    cfg = load_sim_config(args.config)
    trace = simulate(cfg)
    path = Path(args.out)
    path.parent.mkdir(parents=True, exist_ok=True)
    trace.to_csv(path)
    return 0


def cmd_compare_chirp(args) -> int:
    out = _outdir(args.out)
    kwargs = {"window": args.window}
    if args.config:
        kwargs.update(load_chirp_config(args.config))
    if args.noise:
        kwargs["noise"] = ex.CALIBRATED_NOISE
    traces, table = ex.compare_chirp(**kwargs)
    for name, tr in traces.items():
        tr.to_csv(out / f"{name}_trace.csv")
    _write_columns(out / "metrics.csv", table)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="csmcbench", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("identify", help="FRF estimation and plant fit")
    s.add_argument("--trace", nargs=2, action="append", metavar=("CSV", "OMEGA"),
                   help="t,u,y record and its excitation frequency (repeatable); "
                        "without it the closed-loop experiment is simulated")
    s.add_argument("--params", help="physical parameter JSON used for the fit")
    s.add_argument("--fit-range", nargs=2, type=float, default=[4.0, 380.0])
    s.add_argument("--sample-rate", type=float, help="[Hz]; inferred from the t column if omitted")
    s.add_argument("--periods", type=int, default=20)
    s.add_argument("--amplitude", type=float, default=1.0)
    s.add_argument("--save-traces", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_identify)

    s = sub.add_parser("design-pid", help="two-step robust PID design")
    s.add_argument("--K", type=float, required=True)
    s.add_argument("--tau", type=float, required=True)
    s.add_argument("--smax-db", type=float, required=True)
    s.add_argument("--phi-deg", type=float, required=True)
    s.add_argument("--gamma", type=float, help="override 1/S_max (e.g. 400)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_design_pid)

    s = sub.add_parser("design-csmc", help="CSMC gains from the Lipschitz bound")
    s.add_argument("--L", type=float, required=True)
    s.add_argument("--lambda", dest="lam", nargs=3, type=float, default=list(DEFAULT_LAMBDA))
    s.add_argument("--out")
    s.set_defaults(func=cmd_design_csmc)

    for name, func, helptext in (("analyze-sens", cmd_analyze_sens, "CSMC sensitivity map"),
                                 ("hb-solve", cmd_hb_solve, "harmonic-balance limit cycle")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--L", type=float, default=ex.DESIGN_L)
        s.add_argument("--plant", help="plant JSON (default: canonical identified plant)")
        s.add_argument("--mu", type=float, help="actuator time constant override [s]")
        s.add_argument("--normalized", action="store_true", help="use W = 1/(s^2 (mu s + 1))")
        s.set_defaults(func=func)
        if name == "analyze-sens":
            s.add_argument("--w-range", nargs=2, type=float, default=[1.0, 2000.0])
            s.add_argument("--n-w", type=int, default=60)
            s.add_argument("--A-range", nargs=2, type=float, default=[1e-5, 1e-2])
            s.add_argument("--n-A", type=int, default=40)
            s.add_argument("--amplitudes", nargs="+", type=float)
            s.add_argument("--out", required=True, help="CSV path")
        else:
            s.add_argument("--guess", nargs=2, type=float, metavar=("A", "OMEGA"))
            s.add_argument("--out")

    s = sub.add_parser("simulate", help="closed-loop simulation from a JSON config")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True, help="trace CSV path")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("compare-chirp", help="PID vs CSMC on the canonical up-chirp")
    s.add_argument("--out", required=True)
    s.add_argument("--config", help="JSON with plant, pid, csmc, chirp, window, noise")
    s.add_argument("--window", type=float, default=2.0)
    s.add_argument("--noise", action="store_true", help="add calibrated sensor noise")
    s.set_defaults(func=cmd_compare_chirp)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "normalized", False) and args.mu is None:
        args.mu = CANONICAL_PLANT.mu
    try:
        return args.func(args)
    except (WorkbenchError, ValueError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
