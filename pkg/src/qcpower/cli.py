"""Command-line front end.

Exit codes: 0 on success, 1 for bad input (flags, files, parameter ranges),
2 when an optimiser reports non-convergence (``superact`` also returns 2 when
one of its asserted checks fails).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import channels as chs
from .correlations import deficit_BA, discord_BA
from .qcp import deficit_basis_sweep, qcp_ad_deficit, qcp_ad_discord, qcp_numeric
from .qcore import binary_h
from .serialization import (
    SchemaError,
    channel_from_dict,
    channel_to_dict,
    read_json,
    state_from_dict,
    state_to_dict,
    write_json,
)
from .states import CCInput, ProjectiveBasis, cc_state, rank2_qc_state
from .superact import build_scenario

PARAMETRISED = {"ad": chs.amplitude_damping, "pd": chs.phase_damping}
DELTA_MAX = 2 * binary_h(1 / math.sqrt(2)) - 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def make_channel(spec: str, p: float | None):
    if spec in PARAMETRISED:
        if p is None:
            raise UsageError(f"--p is required for channel {spec!r}")
        try:
            return PARAMETRISED[spec](p)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if spec == "maxqcp":
        return chs.max_qcp_channel()
    if spec == "identity":
        return chs.identity_channel()
    if spec.startswith("file:"):
        return channel_from_dict(read_json(spec[5:]))
    raise UsageError(f"unknown channel {spec!r}")


def analytic_qcp(spec: str, p: float | None, measure: str) -> float:
    if spec == "ad":
        return qcp_ad_discord(p) if measure == "discord" else qcp_ad_deficit(p).value
    if spec in ("pd", "identity"):
        return 0.0  # unital qubit channels create no correlation
    if spec == "maxqcp" and measure == "discord":
        return DELTA_MAX
    raise UsageError(f"no closed form for channel {spec!r} with measure {measure!r}")


def _numeric_payload(res) -> dict:
    q = res.optimal_input.weights
    theta, phi = res.optimal_input.basis_a.angles
    chi, mphi = res.optimal_measurement.angles
    return {
        "value": res.value,
        "input": {"q": [float(q[0]), float(q[1])], "theta": theta, "phi": phi},
        "measurement": {"chi": chi, "phi": mphi},
        "diagnostics": res.diagnostics,
    }


def cmd_qcp(args) -> int:
    ch = make_channel(args.channel, args.p)
    out = {"channel": args.channel, "p": args.p, "measure": args.measure}
    status = 0
    if args.method in ("numeric", "both"):
        res = qcp_numeric(ch, args.measure)
        out["numeric"] = _numeric_payload(res)
        if not res.converged:
            status = 2
    if args.method in ("analytic", "both"):
        out["analytic"] = analytic_qcp(args.channel, args.p, args.measure)
    if args.method == "both":
        out["abs_diff"] = abs(out["numeric"]["value"] - out["analytic"])
    if args.json:
        print(json.dumps(out, indent=2))
    else:
        if "numeric" in out:
            print(f"numeric   {_fmt(out['numeric']['value'])}")
        if "analytic" in out:
            print(f"analytic  {_fmt(out['analytic'])}")
        if "abs_diff" in out:
            print(f"|diff|    {out['abs_diff']:.3e}")
        if status:
            print("warning: optimiser did not converge", file=sys.stderr)
    return status


def _fold_chi(chi: float) -> float:
    return min(chi, math.pi / 2 - chi)


def _sweep_point(task):
    channel, p, measures, method = task
    ch = make_channel(channel, p)
    row, converged = {}, True
    for m in measures:
        if method in ("numeric", "both"):
            res = qcp_numeric(ch, m)
            row[f"num_{m}"] = res.value
            converged &= res.converged
            if m == "deficit":
                row["num_chi"] = _fold_chi(res.optimal_measurement.angles[0])
        if method in ("analytic", "both"):
            row[f"ana_{m}"] = analytic_qcp(channel, p, m)
    return row, converged


def cmd_sweep(args) -> int:
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    if args.channel not in PARAMETRISED:
        raise UsageError("sweep supports the parametrised channels 'ad' and 'pd'")
    if not (0.0 <= args.start <= 1.0 and 0.0 <= args.end <= 1.0):
        raise UsageError("sweep range must lie inside [0, 1]")
    measures = ["discord", "deficit"] if args.measure == "both" else [args.measure]
    if args.chi and "deficit" not in measures:
        raise UsageError("--chi needs the deficit measure")
    grid = np.linspace(args.start, args.end, args.steps)
    tasks = [(args.channel, float(p), measures, args.method) for p in grid]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(t) for t in tasks]
    chis = None
    if args.chi and args.method != "numeric":
        if args.channel != "ad":
            raise UsageError("the closed-form chi column is defined for 'ad' only")
        chis = [r.chi for r in deficit_basis_sweep(grid)]
    primary = "num" if args.method == "numeric" else "ana"
    header = ["p"] + [f"qcp_{m}" for m in measures]
    if args.chi:
        header.append("chi")
    if args.method == "both":
        header += [f"qcp_{m}_numeric" for m in measures]
    try:
        fh = open(args.out, "w", newline="") if args.out != "-" else sys.stdout
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc}") from exc
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i, (p, (row, _)) in enumerate(zip(grid, results)):
            line = [_fmt(p)] + [_fmt(row[f"{primary}_{m}"]) for m in measures]
            if args.chi:
                line.append(_fmt(chis[i] if chis is not None else row["num_chi"]))
            if args.method == "both":
                line += [_fmt(row[f"num_{m}"]) for m in measures]
            writer.writerow(line)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0 if all(ok for _, ok in results) else 2


def superact_payload(report) -> dict:
    return {
        "p": report.p,
        "commutator": {
            "norm": report.commutator_norm,
            "predicted_norm": report.predicted_norm,
            "match": report.commutator_match,
            "sign": report.commutator_sign,
            "prefactor": "(i/8) p sqrt(1-p)",
        },
        "pairwise_checks": {
            name: {"passed": ok, "residual": res} for name, (ok, res) in report.pairwise_checks.items()
        },
        "deficit_upper_bound": report.deficit_bound,
        "correlation_witnessed": report.deficit_bound is not None and report.deficit_bound > 1e-4,
        "all_checks_pass": report.all_checks_pass,
    }


def cmd_superact(args) -> int:
    if not 0.0 <= args.p <= 1.0:
        raise UsageError(f"p={args.p} outside [0, 1]")
    report = build_scenario(args.p, samples=args.samples, seed=args.seed)
    text = json.dumps(superact_payload(report), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0 if report.all_checks_pass else 2


def cmd_measure(args) -> int:
    path = args.state[5:] if args.state.startswith("file:") else args.state
    rho, dims = state_from_dict(read_json(path))
    if dims != [2, 2]:
        raise UsageError(f"measure needs a two-qubit state, got dims {dims}")
    measures = ["discord", "deficit"] if args.measure == "both" else [args.measure]
    out, status = {}, 0
    for m in measures:
        res = discord_BA(rho) if m == "discord" else deficit_BA(rho)
        out[m] = {"value": res.value, "chi": res.chi, "phi": res.phi}
        if not res.converged:
            status = 2
    if args.json:
        print(json.dumps(out, indent=2))
    else:
        for m, r in out.items():
            print(f"{m:8s} {_fmt(r['value'])}  chi={_fmt(r['chi'])} phi={_fmt(r['phi'])}")
    return status


def named_state(name: str, t: float, phi: float) -> np.ndarray:
    if name == "bell":
        v = np.array([1, 0, 0, 1]) / math.sqrt(2)
        return np.outer(v, v)
    if name == "cc":
        return cc_state(CCInput(np.array([0.5, 0.5]), ProjectiveBasis.computational()))
    if name == "rank2":
        return rank2_qc_state(t, phi)
    raise UsageError(f"unknown state {name!r}")


def cmd_export(args) -> int:
    if args.kind == "channel":
        obj = channel_to_dict(make_channel(args.name, args.p))
    else:
        obj = state_to_dict(named_state(args.name, args.t, args.phi), [2, 2])
    write_json(obj, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qcpower", description="Quantum correlations and quantum-correlating power.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("qcp", help="QCP of a single-qubit channel")
    q.add_argument("--channel", required=True, help="ad | pd | maxqcp | identity | file:<path>")
    q.add_argument("--p", type=float)
    q.add_argument("--measure", choices=["discord", "deficit"], default="discord")
    q.add_argument("--method", choices=["numeric", "analytic", "both"], default="numeric")
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_qcp)

    s = sub.add_parser("sweep", help="CSV of QCP against the channel parameter")
    s.add_argument("--channel", default="ad", choices=sorted(PARAMETRISED))
    s.add_argument("--start", type=float, default=0.0)
    s.add_argument("--end", type=float, default=1.0)
    s.add_argument("--steps", type=int, default=101)
    s.add_argument("--measure", choices=["discord", "deficit", "both"], default="both")
    s.add_argument("--method", choices=["numeric", "analytic", "both"], default="analytic")
    s.add_argument("--chi", action="store_true", help="add the optimal deficit basis angle")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_sweep)

    a = sub.add_parser("superact", help="phase-damping super-activation report")
    a.add_argument("--p", type=float, required=True)
    a.add_argument("--samples", type=int, default=4)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--out")
    a.set_defaults(func=cmd_superact)

    m = sub.add_parser("measure", help="discord / deficit of a two-qubit state file")
    m.add_argument("--state", required=True, help="file:<path> or <path>")
    m.add_argument("--measure", choices=["discord", "deficit", "both"], default="both")
    m.add_argument("--json", action="store_true")
    m.set_defaults(func=cmd_measure)

    e = sub.add_parser("export", help="write a channel or state JSON file")
    e.add_argument("kind", choices=["channel", "state"])
    e.add_argument("name", help="channel: ad|pd|maxqcp|identity; state: bell|cc|rank2")
    e.add_argument("--p", type=float)
    e.add_argument("--t", type=float, default=0.0)
    e.add_argument("--phi", type=float, default=math.pi / 4)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SchemaError, OSError) as exc:
        print(f"qcpower: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"qcpower: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
