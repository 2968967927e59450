"""Command line: certify, bound, sharpness and run.

Exit codes: 0 when nothing is violated, 2 when a bound row fails (or a
certification is refuted, or a suite check fails), 1 on config or I/O errors.
"""
from __future__ import annotations

import argparse
import csv
import sys
from typing import List, Optional

from ..bounds import BoundId
from ..invex import (
    InvalidInput,
    InvexSegment,
    SamplingPlan,
    check_condition_c,
    check_invex_set,
    check_preinvex,
    derivative_power,
)
from ..registry import get_eta, get_function
from ..sharpness import Inconclusive, best_constant_search, ratio_sweep
from .config import ConfigError, ExperimentConfig, load_config
from .report import emit_report, to_csv, to_json
from .runner import run_suite
from .suite import suite_checks, suite_configs

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2


def _function_spec(text: str):
    # "square" or a polynomial "poly:0,0,1" (ascending coefficients)
    if text.startswith("poly:"):
        try:
            return [float(c) for c in text[5:].split(",")]
        except ValueError:
            raise InvalidInput(f"bad polynomial coefficients in {text!r}") from None
    return text


def _function_arg(text: str):
    return get_function(_function_spec(text))


def _plan(args) -> SamplingPlan:
    return SamplingPlan(n_space=args.n_space, n_t=args.n_t)


def cmd_certify(args) -> int:
    eta = get_eta(args.eta)
    plan = _plan(args)
    reports = []
    if "invex" in args.check:
        reports.append(check_invex_set(eta, plan))
    if "condition_c" in args.check:
        reports.append(check_condition_c(eta, plan))
    if "preinvex" in args.check:
        if args.function is None or args.region is None:
            raise InvalidInput("--check preinvex needs --function and --region LO HI")
        f = _function_arg(args.function)
        target = f if args.target == "f" else derivative_power(f, args.q)
        reports.append(check_preinvex(target, eta, tuple(args.region), plan))
    for report in reports:
        print(report.describe())
    return EXIT_VIOLATION if any(r.refuted for r in reports) else EXIT_OK


def cmd_bound(args) -> int:
    config = ExperimentConfig(
        functions=[_function_spec(args.function)],
        eta_maps=[args.eta], segments=[(args.a, args.b)], bounds=args.bound,
        q_values=args.q_values, x_resolution=args.x_resolution, M=args.M,
        x_points=args.x, tolerances={"n_space": args.n_space, "n_t": args.n_t},
    )
    return _write(run_suite([config], name="bound"), args)


def cmd_sharpness(args) -> int:
    eta = get_eta(args.eta)
    seg = InvexSegment(eta, args.a, args.b)
    family = [_function_arg(name) for name in args.functions]
    if args.bound == BoundId.THM22_21.value:
        try:
            best = best_constant_search(seg, family)
        except Inconclusive as exc:
            print(f"inconclusive: {exc}")
            return EXIT_OK
        print(f"best constant estimate: {best.estimate!r}")
        for label, ratio in best.member_max.items():
            print(f"  {label}: max lhs/rhs = {ratio!r}")
        print(f"  attained by: {', '.join(best.attaining)}")
    rows = []
    sound = True
    for f in family:
        surface = ratio_sweep(f, seg, args.bound, q_grid=args.q_values, M=args.M)
        sound &= surface.sound()
        if args.bound != BoundId.THM22_21.value:
            print(f"{f.label}: max ratio {surface.max_ratio!r} at {surface.argmax}")
        for s in sorted(surface.samples, key=lambda s: (s.q or 0.0, s.x)):
            rows.append([f.label, args.bound, repr(s.x), "" if s.q is None else repr(s.q), repr(s.ratio)])
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["function", "bound_id", "x", "q", "ratio"])
            writer.writerows(rows)
    return EXIT_OK if sound else EXIT_VIOLATION


def cmd_run(args) -> int:
    if args.suite == "paper":
        report = run_suite(suite_configs(), name="paper")
        checks = suite_checks()
        report.summary["checks"] = {c.name: {"passed": bool(c.passed), "detail": c.detail} for c in checks}
        for c in checks:
            print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}", file=sys.stderr)
        code = _write(report, args)
        return EXIT_VIOLATION if code == EXIT_OK and not all(c.passed for c in checks) else code
    config = load_config(args.config)
    if args.out is None:
        args.out = config.output.get("path")
    if args.format is None:
        args.format = config.output.get("format", "csv")
    return _write(run_suite([config], name=config.name), args)


def _write(report, args) -> int:
    fmt = args.format or "csv"
    if args.out:
        emit_report(report, args.out, fmt)
    else:
        sys.stdout.write(to_csv(report) if fmt == "csv" else to_json(report))
    s = report.summary
    print(f"rows={s['rows']} holds={s['holds']} violations={s['violations']} skips={s['skips']}", file=sys.stderr)
    return EXIT_VIOLATION if report.violations else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ostrowski", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output path (stdout when omitted)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--seed", type=int, default=0, help="reserved; every pipeline is deterministic")
        p.add_argument("--n-space", type=int, default=64)
        p.add_argument("--n-t", type=int, default=32)

    p = sub.add_parser("certify", help="sampled certification of invexity, condition C, preinvexity")
    common(p)
    p.add_argument("--eta", required=True)
    p.add_argument("--check", nargs="+", choices=("invex", "condition_c", "preinvex"), default=["invex", "condition_c"])
    p.add_argument("--function")
    p.add_argument("--target", choices=("f", "abs_deriv"), default="f")
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--region", type=float, nargs=2, metavar=("LO", "HI"))
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("bound", help="evaluate bounds for one function, eta-map and segment")
    common(p)
    p.add_argument("--function", required=True)
    p.add_argument("--eta", default="trivial")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--bound", nargs="+", default=["THM22_21"], choices=list(BoundId.__members__))
    p.add_argument("--x", type=float, nargs="+", help="evaluation points (default: an evenly spaced grid)")
    p.add_argument("--q", dest="q_values", type=float, nargs="+", default=[2.0])
    p.add_argument("--x-resolution", type=int, default=33)
    p.add_argument("--M", type=float)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sharpness", help="worst-case lhs/rhs ratios and the best-constant estimate")
    common(p)
    p.add_argument("--functions", nargs="+", default=["identity", "square", "cube"])
    p.add_argument("--eta", default="trivial")
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--bound", default="THM22_21", choices=list(BoundId.__members__))
    p.add_argument("--q", dest="q_values", type=float, nargs="+", default=[2.0])
    p.add_argument("--M", type=float)
    p.set_defaults(func=cmd_sharpness)

    p = sub.add_parser("run", help="run an experiment config or the built-in suite")
    common(p)
    p.add_argument("--config", help="experiment config (YAML or JSON)")
    p.add_argument("--suite", choices=("paper",))
    p.set_defaults(func=cmd_run)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "run" and not (args.config or args.suite):
        parser.error("run needs --config or --suite")
    try:
        return args.func(args)
    except (ConfigError, InvalidInput, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
