"""Command-line interface.

Subcommands: eval (one operating point as JSON), sweep (one-axis CSV from a
spec file), figure (named preset sweeps as CSV), verify (oracle-equivalence
suites) and report (algebraic consistency report).

Exit codes: 0 success (including above-threshold data answers), 1 usage or
domain error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .errors import CblsimError
from .model import SystemParams
from .report import consistency_report
from .sweeps import FIGURE_NAMES, SweepSpec, eval_point_json, run_figure, run_sweep
from .verify import PROFILES, verify_scope


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad usage; route through our own codes
    def error(self, message):
        raise UsageError(message)


def _add_param_flags(parser: argparse.ArgumentParser, required: bool) -> None:
    parser.add_argument("--A", type=float, required=required, help="linear gain coefficient")
    parser.add_argument("--kappa", type=float, required=required, help="cavity damping, in (0, 1]")
    parser.add_argument("--eta", type=float, required=required, help="superposition parameter in [-1, 1]")
    parser.add_argument("--omega", type=float, required=required, help="drive amplitude over gamma")
    parser.add_argument("--N", type=float, required=required, help="biased-noise intensity")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="cblsim",
        description="Squeezing and intensity of a coherent beat laser in a biased-noise environment",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one operating point, JSON to stdout")
    _add_param_flags(p_eval, required=True)
    p_eval.add_argument("--out", help="write to this path instead of stdout")

    p_sweep = sub.add_parser("sweep", help="run a one-axis sweep from a JSON spec, CSV out")
    p_sweep.add_argument("--spec", required=True, help="path to a sweep spec JSON file")
    _add_param_flags(p_sweep, required=False)
    p_sweep.add_argument("--out", help="write to this path instead of stdout")

    p_fig = sub.add_parser("figure", help="run a named preset sweep, CSV out")
    p_fig.add_argument("name", choices=list(FIGURE_NAMES))
    p_fig.add_argument("--out", help="write to this path instead of stdout")

    p_verify = sub.add_parser("verify", help="run oracle-equivalence suites")
    p_verify.add_argument("scope", choices=["langevin", "master", "all"])
    p_verify.add_argument(
        "--tolerance-profile",
        default="default",
        choices=sorted(PROFILES),
        help="tolerance and effort preset",
    )
    p_verify.add_argument("--out", help="write to this path instead of stdout")

    p_report = sub.add_parser("report", help="print the algebraic consistency report")
    p_report.add_argument("--out", help="write to this path instead of stdout")

    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _params_from_args(args) -> SystemParams:
    return SystemParams(A=args.A, kappa=args.kappa, eta=args.eta, omega=args.omega, N=args.N)


def _load_spec(args) -> SweepSpec:
    try:
        with open(args.spec, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as err:
        raise UsageError(f"cannot read spec file: {err}") from err
    spec = SweepSpec.from_json(text)
    overrides = {
        name: getattr(args, name)
        for name in ("A", "kappa", "eta", "omega", "N")
        if getattr(args, name) is not None
    }
    if not overrides:
        return spec
    if spec.axis in overrides:
        raise UsageError(f"--{spec.axis} conflicts with the sweep axis")
    fixed = dict(spec.fixed)
    fixed.update(overrides)
    return SweepSpec(fixed=fixed, axis=spec.axis, grid=spec.grid, outputs=spec.outputs)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "eval":
            _emit(eval_point_json(_params_from_args(args)) + "\n", args.out)
            return 0
        if args.command == "sweep":
            _emit(run_sweep(_load_spec(args)), args.out)
            return 0
        if args.command == "figure":
            _emit(run_figure(args.name), args.out)
            return 0
        if args.command == "verify":
            text, ok = verify_scope(args.scope, args.tolerance_profile)
            _emit(text, args.out)
            return 0 if ok else 2
        if args.command == "report":
            _emit(consistency_report(), args.out)
            return 0
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as err:
        print(f"cblsim: error: {err}", file=sys.stderr)
        return 1
    except (ValueError, CblsimError) as err:
        print(f"cblsim: error: {err}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())
