"""``divcurve`` command-line front end.

Exit codes: 0 success, 2 bad input, 3 mathematical degeneracy, 4 output failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .analysis import Plane, Setting, classify_risky, classify_riskfree, sample_curve
from .errors import DegeneracyError, InputError
from .market import (
    compute_scalars,
    estimate_universe,
    fixture_risk_free_rates,
    load_universe,
    read_returns_csv,
    save_universe,
    sharpe_scalar,
)
from .report import AnalysisReport, scalar_report, weights_entry, write_curve_csv, write_figures

EXIT_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_IO = 4


class OutputError(Exception):
    pass


def _load(args):
    return load_universe(args.universe, mu_set=args.mu_set)


def _rate(args, u) -> Optional[float]:
    return args.rf if args.rf is not None else u.risk_free


def _emit(report: AnalysisReport) -> None:
    print(report.to_json())


def cmd_scalars(args) -> None:
    u = _load(args)
    rates = []
    for rf in [u.risk_free, *fixture_risk_free_rates(args.universe), *(args.rf or [])]:
        if rf is not None and rf not in rates:
            rates.append(rf)
    _emit(scalar_report(compute_scalars(u), rates))


def cmd_classify(args) -> None:
    u = _load(args)
    s = compute_scalars(u)
    regimes = [classify_risky(s)]
    rf = _rate(args, u)
    if rf is not None:
        regimes.append(classify_riskfree(s, sharpe_scalar(s, rf), rf))
    _emit(AnalysisReport(regimes=regimes))


def cmd_weights(args) -> None:
    u = _load(args)
    s = compute_scalars(u)
    entries = [weights_entry(s, u, tau, _rate(args, u)) for tau in args.tau]
    _emit(AnalysisReport(weights=entries))


def cmd_curve(args) -> None:
    u = _load(args)
    s = compute_scalars(u)
    setting = Setting(args.setting)
    sh = rf = None
    if setting is Setting.WITH_RISK_FREE:
        rf = _rate(args, u)
        if rf is None:
            raise InputError("--setting rf needs --rf or a universe risk_free rate")
        sh = sharpe_scalar(s, rf)
    elif Plane(args.plane) is Plane.VARIANCE:
        s.require_nondegenerate()
    xs, ys = sample_curve(s, setting, Plane(args.plane), args.lo, args.hi, args.samples, sh=sh, mu_f=rf)
    try:
        write_curve_csv(args.out, xs, ys)
    except OSError as exc:
        raise OutputError(f"cannot write {args.out}: {exc.strerror}") from None


def cmd_figures(args) -> None:
    if args.fixture != "paper4":
        raise InputError(f"unknown fixture {args.fixture!r}")
    try:
        written = write_figures(args.out, samples=args.samples)
    except OSError as exc:
        raise OutputError(f"cannot write figures to {args.out}: {exc.strerror}") from None
    for path in written:
        print(path)


def cmd_estimate(args) -> None:
    u = estimate_universe(read_returns_csv(args.returns), mu_f=args.rf)
    try:
        save_universe(u, args.out)
    except OSError as exc:
        raise OutputError(f"cannot write {args.out}: {exc.strerror}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="divcurve", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def universe_cmd(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("universe", help="universe JSON file")
        sp.add_argument("--mu-set", help="use an alternative mean vector from the file's scenarios table")
        sp.set_defaults(func=func)
        return sp

    sp = universe_cmd("scalars", cmd_scalars, "print the scalars A..F and S per risk-free rate")
    sp.add_argument("--rf", type=float, action="append", help="extra risk-free rate (repeatable)")

    sp = universe_cmd("classify", cmd_classify, "classify the risk/diversification regime")
    sp.add_argument("--rf", type=float)

    sp = universe_cmd("weights", cmd_weights, "optimal weights, variance and EDM")
    sp.add_argument("--tau", type=float, action="append", required=True, help="risk tolerance (repeatable)")
    sp.add_argument("--rf", type=float)

    sp = universe_cmd("curve", cmd_curve, "sample an EDM curve to CSV")
    sp.add_argument("--setting", choices=[s.value for s in Setting], default="risky")
    sp.add_argument("--plane", choices=[p.value for p in Plane], default="tau")
    sp.add_argument("--lo", type=float, required=True)
    sp.add_argument("--hi", type=float, required=True)
    sp.add_argument("--samples", type=int, default=401)
    sp.add_argument("--rf", type=float)
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("figures", help="write the four-asset figure datasets")
    sp.add_argument("--fixture", default="paper4", choices=["paper4"])
    sp.add_argument("--samples", type=int, default=401)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_figures)

    sp = sub.add_parser("estimate", help="estimate a universe from a returns CSV")
    sp.add_argument("returns")
    sp.add_argument("--rf", type=float)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_estimate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "tau", None) and any(t < 0 for t in args.tau):
        print("divcurve: error: --tau must be >= 0", file=sys.stderr)
        return EXIT_INPUT
    try:
        args.func(args)
    except InputError as exc:
        print(f"divcurve: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegeneracyError as exc:
        print(f"divcurve: degenerate: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except OutputError as exc:
        print(f"divcurve: error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
