"""Command-line interface: analyze, counterexample, sweep, ppt.

Exit codes are stable: 0 success, 1 usage/parse error, 2 invariant violation
(bad state), 3 precondition unmet (entangled input without override),
4 internal numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .correlations import CorrelationReport, analyze
from .errors import (
    InvalidSpecError,
    InvariantViolationError,
    ParseError,
    SepcorrError,
    UnsupportedDimsError,
)
from .states import counterexample_state, load_state, ppt_check
from .sweep import SweepConfig, run_sweep, summary_line, write_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVARIANT = 2
EXIT_PRECONDITION = 3
EXIT_NUMERICAL = 4

PAPER_VALUES = (("T", 0.601), ("Q", 0.5), ("C", 0.311), ("L", 0.210))
PAPER_TOL = 1e-3
RESIDUAL_TOL = 1e-8


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return format(x, ".12g")


def _print_matrix(mat: np.ndarray, out) -> None:
    for row in np.asarray(mat):
        out.write(" ".join(f"{z.real:.6f}{z.imag:+.6f}j" for z in row) + "\n")


def _matrix_doc(mat: np.ndarray) -> dict:
    m = np.asarray(mat)
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def _report_doc(report: CorrelationReport, forced: bool) -> dict:
    axis_a, axis_b = report.axes
    return {
        "t": report.t,
        "q": report.q,
        "c": report.c,
        "l": report.l,
        "identity_residual": report.identity_residual,
        "axes": {
            "theta_a": axis_a.theta,
            "phi_a": axis_a.phi,
            "theta_b": axis_b.theta,
            "phi_b": axis_b.phi,
        },
        "superadditive": report.superadditive,
        "force_sigma_eq_rho": forced,
        "chi": _matrix_doc(report.chi.rho.mat),
        "pi_rho": _matrix_doc(report.pi_rho.mat),
        "pi_chi": _matrix_doc(report.pi_chi.mat),
    }


def _print_report(report: CorrelationReport, forced: bool, out) -> None:
    axis_a, axis_b = report.axes
    if forced:
        out.write("note: input failed the PPT gate; forced sigma=rho diagnostic mode\n")
    out.write(f"T = {_fmt(report.t)}\n")
    out.write(f"Q = {_fmt(report.q)}\n")
    out.write(f"C = {_fmt(report.c)}\n")
    out.write(f"L = {_fmt(report.l)}\n")
    out.write(f"identity_residual = {_fmt(report.identity_residual)}\n")
    out.write(
        f"axes: theta_a={_fmt(axis_a.theta)} phi_a={_fmt(axis_a.phi)}"
        f" theta_b={_fmt(axis_b.theta)} phi_b={_fmt(axis_b.phi)}\n"
    )
    out.write("SUPERADDITIVE (T <= Q+C)\n" if report.superadditive else "VIOLATION\n")
    out.write("chi:\n")
    _print_matrix(report.chi.rho.mat, out)
    out.write("pi_rho:\n")
    _print_matrix(report.pi_rho.mat, out)
    out.write("pi_chi:\n")
    _print_matrix(report.pi_chi.mat, out)


def cmd_analyze(args) -> int:
    rho = load_state(args.path)
    ppt = ppt_check(rho)
    if not ppt.separable and not args.force_sigma_eq_rho:
        sys.stderr.write(
            f"input is not PPT (min eigenvalue {_fmt(ppt.min_eigenvalue)}): the analysis "
            "assumes a separable state, whose closest separable state is itself; "
            "pass --force-sigma-eq-rho to run the sigma=rho pipeline anyway (diagnostics only)\n"
        )
        return EXIT_PRECONDITION
    forced = bool(not ppt.separable and args.force_sigma_eq_rho)
    report = analyze(rho, args.grid_n, not args.no_refine)
    if args.json:
        sys.stdout.write(json.dumps(_report_doc(report, forced), indent=2) + "\n")
    else:
        _print_report(report, forced, sys.stdout)
    return EXIT_OK


def cmd_counterexample(args) -> int:
    report = analyze(counterexample_state(), args.grid_n, True)
    computed = {"T": report.t, "Q": report.q, "C": report.c, "L": report.l}
    sys.stdout.write(f"{'quantity':<10}{'computed':<20}{'paper':<10}{'|delta|':<16}\n")
    ok = True
    for name, paper in PAPER_VALUES:
        delta = abs(computed[name] - paper)
        ok = ok and delta <= PAPER_TOL
        sys.stdout.write(f"{name:<10}{_fmt(computed[name]):<20}{paper:<10}{_fmt(delta):<16}\n")
    ok = ok and report.identity_residual <= RESIDUAL_TOL
    sys.stdout.write(
        f"identity_residual = {_fmt(report.identity_residual)} (must be <= {RESIDUAL_TOL})\n"
    )
    if not ok:
        sys.stderr.write("counterexample reproduction missed its tolerances\n")
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = SweepConfig(
        n=args.n,
        master_seed=args.seed,
        k_min=args.k_min,
        k_max=args.k_max,
        grid_n=args.grid_n,
        refine=not args.no_refine,
        include_bell_diagonal=args.include_bell_diagonal,
    )
    records, summary = run_sweep(cfg, append_counterexample=args.append_counterexample)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            write_csv(records, cfg, fh, append_counterexample=args.append_counterexample)
    sys.stdout.write(
        f"n={summary.n_records}"
        f" strict_l_gt_{1e-6:g}={summary.strict_superadditive}"
        f" mean_l={_fmt(summary.mean_l)}"
        f" max_l={_fmt(summary.max_l)}\n"
    )
    sys.stdout.write(summary_line(summary) + "\n")
    return EXIT_OK


def cmd_ppt(args) -> int:
    rho = load_state(args.path)
    ppt = ppt_check(rho)
    sys.stdout.write(
        f"min_eig={_fmt(ppt.min_eigenvalue)} separable={str(ppt.separable).lower()}\n"
    )
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="sepcorr", description=__doc__)
    parser.add_argument("--version", action="version", version=f"sepcorr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="analyze one state file")
    p_an.add_argument("path")
    p_an.add_argument("--grid-n", type=int, default=32, dest="grid_n")
    p_an.add_argument("--no-refine", action="store_true")
    p_an.add_argument("--force-sigma-eq-rho", action="store_true")
    p_an.add_argument("--json", action="store_true")
    p_an.set_defaults(handler=cmd_analyze)

    p_ce = sub.add_parser("counterexample", help="reproduce the paper's counterexample table")
    p_ce.add_argument("--grid-n", type=int, default=64, dest="grid_n")
    p_ce.set_defaults(handler=cmd_counterexample)

    p_sw = sub.add_parser("sweep", help="Monte-Carlo sweep over random separable states")
    p_sw.add_argument("--n", type=int, required=True)
    p_sw.add_argument("--seed", type=int, default=1)
    p_sw.add_argument("--k-min", type=int, default=1, dest="k_min")
    p_sw.add_argument("--k-max", type=int, default=4, dest="k_max")
    p_sw.add_argument("--grid-n", type=int, default=16, dest="grid_n")
    p_sw.add_argument("--out", default=None)
    p_sw.add_argument("--no-refine", action="store_true")
    p_sw.add_argument("--include-bell-diagonal", action="store_true")
    p_sw.add_argument("--append-counterexample", action="store_true")
    p_sw.set_defaults(handler=cmd_sweep)

    p_ppt = sub.add_parser("ppt", help="PPT separability check for one state file")
    p_ppt.add_argument("path")
    p_ppt.set_defaults(handler=cmd_ppt)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.handler is cmd_sweep:
        if args.n < 1:
            parser.error("--n must be >= 1")
        if not (1 <= args.k_min <= args.k_max <= 8):
            parser.error("need 1 <= --k-min <= --k-max <= 8")
        if args.grid_n < 8:
            parser.error("--grid-n must be >= 8")
    if getattr(args, "grid_n", 8) < 8:
        parser.error("--grid-n must be >= 8")
    try:
        return args.handler(args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (InvalidSpecError, InvariantViolationError, UnsupportedDimsError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVARIANT
    except SepcorrError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERICAL


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
