"""``matlog`` command line.

Exit codes: 0 pass, 1 configuration or I/O error, 2 domain error (e.g. an
eigenvalue on the cut), 3 mathematical flag (counterexample candidate or
violated invariant).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import DEFAULT
from .errors import BoundaryTooCloseError, CountMismatchError, MatlogError
from .io import dumps, format_complex, matrix_from_json, matrix_to_json, parse_complex, rows_to_csv
from .matfun import mat_exp, mat_log_principal, mat_phi
from .scalar import TWO_PI, Rectangle, default_u_band, scan_u_roots, winding_zero_count
from .verify import TARGETS, run_target

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_FLAG = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _tol(text: str):
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    return name, float(value)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="matlog", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name in ("exp", "log", "phi"):
        s = sub.add_parser(name, help=f"matrix {name} of a JSON matrix file")
        s.add_argument("-i", "--input", required=True)
        s.add_argument("-o", "--output")

    v = sub.add_parser("verify", help="run a seeded verification suite")
    v.add_argument("target", choices=TARGETS)
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=_seed, default=0)
    v.add_argument("--tol", type=_tol, action="append", default=[], metavar="NAME=VALUE")
    v.add_argument("--n", type=int, nargs="+", help="matrix sizes (thm2, prop4, arg-law, prop3)")
    v.add_argument("-o", "--output")
    v.add_argument("--csv", help="per-trial CSV summary (thm1/thm2/prop4)")

    z = sub.add_parser("zeros", help="zero census of e^z - lambda z - 1 in a rectangle")
    z.add_argument("--lambda", dest="lam", required=True)
    z.add_argument("--rect", type=float, nargs=4, required=True,
                   metavar=("RE_LO", "RE_HI", "IM_LO", "IM_HI"))

    r = sub.add_parser("roots-u", help="roots of e^u = 1 + u")
    r.add_argument("--count", type=int, required=True)
    r.add_argument("--band", type=float, nargs=4, metavar=("RE_LO", "RE_HI", "IM_LO", "IM_HI"))
    return p


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_matfun(args) -> int:
    try:
        a = matrix_from_json(json.loads(Path(args.input).read_text()))
    except (OSError, ValueError) as exc:
        print(f"matlog: cannot read matrix: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    fn = {"exp": mat_exp, "log": mat_log_principal, "phi": mat_phi}[args.command]
    try:
        result = fn(a)
    except MatlogError as exc:
        print(f"matlog {args.command}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    try:
        _write(dumps(matrix_to_json(result)), args.output)
    except OSError as exc:
        print(f"matlog: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def _cmd_verify(args) -> int:
    try:
        tols = DEFAULT.replace(**dict(args.tol))
    except (KeyError, ValueError) as exc:
        print(f"matlog verify: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.trials is not None and args.trials < 1:
        print("matlog verify: --trials must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    if args.n is not None and min(args.n) < 1:
        print("matlog verify: --n must be positive", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report, rows = run_target(args.target, args.trials, args.seed, tols, args.n,
                                  keep_rows=bool(args.csv))
    except ValueError as exc:
        print(f"matlog verify: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        _write(dumps(report), args.output)
        if args.csv:
            Path(args.csv).write_text(
                rows_to_csv(("n", "trial", "law_residual", "commutator", "verdict"), rows))
    except OSError as exc:
        print(f"matlog: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for v in report["violations"]:
        print(f"matlog verify {args.target}: {v.get('reason', 'VIOLATION')} {v}", file=sys.stderr)
    return EXIT_FLAG if report["violations"] else EXIT_OK


def _cmd_zeros(args) -> int:
    try:
        lam = parse_complex(args.lam)
        rect = Rectangle(*args.rect)
    except ValueError as exc:
        print(f"matlog zeros: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        census = winding_zero_count(lam, rect)
    except BoundaryTooCloseError as exc:
        hint = exc.suggestion.to_json() if exc.suggestion else None
        print(f"matlog zeros: {exc}; try rect {hint}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"matlog zeros: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    sys.stdout.write(dumps({
        "lambda": format_complex(census.lambda_),
        "rect": census.rect.to_json(),
        "count": census.count,
        "boundary_min_abs": census.boundary_min_abs,
        "segments": census.segments,
    }))
    return EXIT_OK


def _cmd_roots_u(args) -> int:
    if args.count < 1:
        print("matlog roots-u: --count must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        band = Rectangle(*args.band) if args.band else default_u_band(args.count)
        scan = scan_u_roots(band)
    except CountMismatchError as exc:
        print(f"matlog roots-u: {exc}", file=sys.stderr)
        return EXIT_FLAG
    except BoundaryTooCloseError as exc:
        print(f"matlog roots-u: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"matlog roots-u: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    status = EXIT_OK
    for root, res in list(zip(scan.roots, scan.residuals))[:args.count]:
        print(f"{format_complex(root)} {res:.3e}")
        if abs(root.imag) <= TWO_PI:
            print(f"matlog roots-u: root {format_complex(root)} has |Im| <= 2*pi", file=sys.stderr)
            status = EXIT_FLAG
    return status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command in ("exp", "log", "phi"):
        return _cmd_matfun(args)
    if args.command == "verify":
        return _cmd_verify(args)
    if args.command == "zeros":
        return _cmd_zeros(args)
    return _cmd_roots_u(args)


if __name__ == "__main__":
    sys.exit(main())
