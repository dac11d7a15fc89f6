"""Command-line front end.

Subcommands::

    cvmonogamy scenario '{"r": 2, "eta0": 0.5, "etaB": 0.5}' [--closed-form] [--json]
    cvmonogamy sweep --preset fig3b [--out PATH] [--closed-form]
    cvmonogamy fuzz [TRIALS SEED DEPTH] [--trials N --seed N --depth N --workers N] [--out PATH]
    cvmonogamy mc '{"r": 1, "eta0": 0.5}' [COUNT SEED] [--json]

Parameter JSON may be given inline, as a file path, or as ``-`` for stdin.

Exit codes: 0 ok, 1 inequality or consistency failure, 2 bad input,
3 non-physical parameters, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Dict, List

from .fuzz import fuzz_monogamy
from .gaussian import conditional_variance
from .montecarlo import empirical_conditional_variance, regression_conditional_variance, sample_wigner
from .network import (
    MODE_A,
    MODE_B,
    MODE_C,
    CircuitParams,
    NoClosedFormError,
    NonPhysicalParameters,
    build_circuit,
    closed_form_report,
    scenario_family,
)
from .quantifiers import RESIDUAL_TOL, check_monogamy, optimal_inference
from .sweep import SweepSpec, get_preset, run_sweep, to_csv

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NONPHYSICAL, EXIT_IO = 0, 1, 2, 3, 4

# Loose enough for r ~ 4, where cosh 2r ~ 1500 amplifies roundoff.
CONSISTENCY_TOL = 1e-9
MC_SIGMAS = 5.0


class InputError(Exception):
    pass


def _load_params(text: str) -> CircuitParams:
    if text == "-":
        text = sys.stdin.read()
    elif os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed parameter JSON: {exc}") from exc
    try:
        return CircuitParams.from_dict(data)
    except (KeyError, TypeError) as exc:
        raise InputError(f"invalid parameters: {exc}") from exc


def _emit(text: str, out: str = None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)


def _table(rows: Dict[str, float]) -> str:
    width = max(len(k) for k in rows)
    return "".join(f"{k:<{width}}  {v:.12g}\n" for k, v in rows.items())


# -- subcommands --------------------------------------------------------------------


def cmd_scenario(args) -> int:
    params = _load_params(args.params)
    report = check_monogamy(build_circuit(params), MODE_B, MODE_A, MODE_C)
    payload = {"params": params.to_dict(), "report": report.to_dict()}
    status = EXIT_OK if report.min_residual >= -RESIDUAL_TOL else EXIT_FAIL
    if args.closed_form:
        try:
            oracle = closed_form_report(params)
        except NoClosedFormError as exc:
            raise InputError(str(exc)) from exc
        worst = max(abs(v - getattr(oracle, k)) for k, v in report.to_dict().items())
        payload.update(family=scenario_family(params), closed_form=oracle.to_dict(), max_abs_discrepancy=worst)
        if worst > CONSISTENCY_TOL:
            status = EXIT_FAIL
    if args.json:
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        text = _table(payload["report"])
        if args.closed_form:
            text += f"\nclosed form ({payload['family']}):\n" + _table(payload["closed_form"])
            text += f"\nmax |constructive - closed form| = {payload['max_abs_discrepancy']:.3g}\n"
        _emit(text, args.out)
    return status


def _load_spec(text: str) -> SweepSpec:
    try:
        if os.path.isfile(text):
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        data = json.loads(text)
        data["range"] = tuple(data["range"])
        return SweepSpec(**data)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"invalid sweep spec: {exc}") from exc


def cmd_sweep(args) -> int:
    if (args.preset is None) == (args.spec is None):
        raise InputError("give exactly one of --preset or --spec")
    if args.preset is not None:
        try:
            spec = get_preset(args.preset)
        except KeyError as exc:
            raise InputError(exc.args[0]) from exc
    else:
        spec = _load_spec(args.spec)
    rows = run_sweep(spec, closed_form=args.closed_form)
    _emit(to_csv(spec, rows), args.out)
    ok = all(r.finite() and r.residuals_ok() for r in rows)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_fuzz(args) -> int:
    trials = args.trials if args.trials is not None else args.pos_trials
    seed = args.seed if args.seed is not None else args.pos_seed
    depth = args.depth if args.depth is not None else args.pos_depth
    if trials < 1 or depth < 0 or args.workers < 1:
        raise InputError("need trials >= 1, depth >= 0 and workers >= 1")
    report = fuzz_monogamy(trials, seed, depth, workers=args.workers)
    payload = report.to_dict()
    if not args.json:
        # Recipes are long; keep them only for failing checks unless --json asks for everything.
        bad = report.violations()
        payload["worst_state_params"] = {k: v for k, v in payload["worst_state_params"].items() if k in bad}
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK if report.ok else EXIT_FAIL


def mc_comparison(params: CircuitParams, count: int, seed: int) -> List[Dict]:
    """Exact (Schur) inference variances against regression and binned estimates from samples."""
    state = build_circuit(params)
    batch = sample_wigner(state, count, seed)
    rows = []
    variances = {}
    for label, steerers in (("A", [MODE_A]), ("C", [MODE_C]), ("AC", [MODE_A, MODE_C])):
        for qname, angle in (("X", 0.0), ("P", math.pi / 2)):
            target = (MODE_B, angle)
            exact, angles = optimal_inference(state, target, steerers)
            conds = [(m, a) for m, a in zip(steerers, angles)]
            schur = conditional_variance(state, target, conds)
            reg, reg_se = regression_conditional_variance(batch, target, conds, return_stderr=True)
            binned, bin_se = empirical_conditional_variance(batch, target, conds, return_stderr=True)
            variances[(label, qname)] = (exact, reg, reg_se)
            rows.append({"quantity": f"Var_inf({qname}_B|{label})", "exact": exact, "schur_at_angles": schur,
                         "regression": reg, "regression_se": reg_se, "binned": binned, "binned_se": bin_se})
    for label in ("A", "C", "AC"):
        ex_x, reg_x, se_x = variances[(label, "X")]
        ex_p, reg_p, se_p = variances[(label, "P")]
        S = math.sqrt(reg_x * reg_p)
        rel = 0.5 * math.hypot(se_x / reg_x, se_p / reg_p)
        rows.append({"quantity": f"S_B|{label}", "exact": math.sqrt(ex_x * ex_p), "regression": S, "regression_se": S * rel})
    for row in rows:
        row["z"] = (row["regression"] - row["exact"]) / row["regression_se"]
        row["ok"] = abs(row["z"]) <= MC_SIGMAS
    return rows


def cmd_mc(args) -> int:
    params = _load_params(args.params)
    count = args.count if args.count is not None else args.pos_count
    seed = args.seed if args.seed is not None else args.pos_seed
    if count < 1000:
        raise InputError("need at least 1000 samples")
    rows = mc_comparison(params, count, seed)
    if args.json:
        _emit(json.dumps({"params": params.to_dict(), "count": count, "seed": seed, "rows": rows}, indent=2) + "\n", args.out)
    else:
        lines = [f"{'quantity':<18}{'exact':>14}{'regression':>14}{'se':>11}{'binned':>14}{'z':>8}  ok"]
        for r in rows:
            binned = f"{r['binned']:14.6g}" if "binned" in r else " " * 14
            lines.append(f"{r['quantity']:<18}{r['exact']:14.6g}{r['regression']:14.6g}{r['regression_se']:11.2g}"
                         f"{binned}{r['z']:8.2f}  {'yes' if r['ok'] else 'NO'}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if all(r["ok"] for r in rows) else EXIT_FAIL


# -- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cvmonogamy", description="Monogamy checks for tripartite Gaussian states.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="emit JSON")
        p.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")

    p = sub.add_parser("scenario", help="evaluate one circuit configuration")
    p.add_argument("params", help="parameter JSON, a path to it, or - for stdin")
    p.add_argument("--closed-form", action="store_true", help="also evaluate the analytic expressions and compare")
    common(p)
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("sweep", help="sweep one parameter and write CSV")
    p.add_argument("--preset", metavar="NAME", help="figure preset, e.g. fig3b")
    p.add_argument("--spec", metavar="JSON", help="custom sweep spec (inline JSON or path)")
    p.add_argument("--closed-form", action="store_true", help="use the analytic expressions instead of the circuit")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fuzz", help="random-state search for monogamy violations")
    p.add_argument("pos_trials", nargs="?", type=int, default=10000, metavar="TRIALS")
    p.add_argument("pos_seed", nargs="?", type=int, default=0, metavar="SEED")
    p.add_argument("pos_depth", nargs="?", type=int, default=6, metavar="DEPTH")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--workers", type=int, default=1, help="worker processes; results do not depend on it")
    common(p)
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("mc", help="compare inference variances with Monte Carlo estimates")
    p.add_argument("params", help="parameter JSON, a path to it, or - for stdin")
    p.add_argument("pos_count", nargs="?", type=int, default=1_000_000, metavar="COUNT")
    p.add_argument("pos_seed", nargs="?", type=int, default=0, metavar="SEED")
    p.add_argument("--count", type=int)
    p.add_argument("--seed", type=int)
    common(p)
    p.set_defaults(func=cmd_mc)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NonPhysicalParameters as exc:
        print(f"error: non-physical parameters: {exc}", file=sys.stderr)
        return EXIT_NONPHYSICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
