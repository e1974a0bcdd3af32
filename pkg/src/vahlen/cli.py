"""Command line front end.

Exit codes: 0 success, 1 usage or parse error, 2 validation failure,
3 f not diagonal hyperbolic, 4 iteration diverged, 5 iteration budget
exhausted without convergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .clifford import DEFAULT_TOL, FLOAT, RATIONAL, ParseError, format_scalar, format_number
from .jorgensen import (
    DEFAULT_OVERFLOW_BOUND,
    NotDiagonalHyperbolic,
    iterate,
    jorgensen_value,
    scan_grid,
    strictness_certificate,
)
from .moebius import Level, ValidationError, dumps_matrix, read_matrix, validate

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_NOT_DIAGONAL, EXIT_DIVERGED, EXIT_BUDGET = range(6)

TRACE_HEADER = ["m", "w_re", "w_norm", "alpha", "J_m", "entry_max_norm"]
SCAN_HEADER = ["r", "w0", "K", "J", "outcome", "m", "alpha", "steps_to_contraction"]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    scalar_mode: str | None = None
    tolerance: float = DEFAULT_TOL
    max_steps: int = 100
    overflow_bound: float = DEFAULT_OVERFLOW_BOUND
    seed: int | None = None
    csv_path: str | None = None

    def __post_init__(self):
        if not self.tolerance > 0:
            raise UsageError("--tol must be > 0")
        if self.max_steps < 1:
            raise UsageError("--max-steps must be >= 1")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--mode", choices=[RATIONAL, FLOAT], default=None,
                   help="scalar mode; overrides the matrix files' scalar_mode")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--max-steps", type=int, default=100)
    p.add_argument("--overflow-bound", type=float, default=DEFAULT_OVERFLOW_BOUND)
    p.add_argument("--seed", type=int, default=None,
                   help="accepted for reproducible pipelines; core commands are deterministic")
    p.add_argument("--csv", dest="csv_path", default=None, metavar="PATH")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="vahlen", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common], help="check the SL(Gamma) conditions")
    p.add_argument("matrix")
    p.add_argument("--level", choices=["determinant", "certified"], default="determinant")
    p.add_argument("--echo", action="store_true", help="print the parsed matrix record")

    p = sub.add_parser("jorgensen", parents=[common], help="evaluate the Jorgensen functional")
    p.add_argument("f")
    p.add_argument("g")

    p = sub.add_parser("iterate", parents=[common], help="run g_{m+1} = g_m f g_m^-1")
    p.add_argument("f")
    p.add_argument("g")

    p = sub.add_parser("certificate", parents=[common], help="strictness certificate")
    p.add_argument("f")
    p.add_argument("g")

    p = sub.add_parser("scan", parents=[common], help="certificate over a (r, w0) grid")
    p.add_argument("--r-range", required=True, help="start:stop:step, a,b,c or a single value")
    p.add_argument("--w0-range", required=True)
    p.add_argument("--steps", type=int, default=None, help="iteration budget (default --max-steps)")
    p.add_argument("--workers", type=int, default=1)
    return parser


def parse_range(text: str, mode: str) -> list:
    """``start:stop:step`` (inclusive), ``a,b,c`` or a single value.

    Grid points are computed exactly and converted once, so float grids
    carry no accumulated drift.
    """
    conv = Fraction if mode == RATIONAL else float
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            start, stop, step = (Fraction(s.strip()) for s in parts)
            if step <= 0:
                raise UsageError(f"range step must be > 0: {text!r}")
            if start > stop:
                return []
            count = int((stop - start) / step) + 1
            return [conv(start + i * step) for i in range(count)]
        return [conv(Fraction(s.strip())) for s in text.split(",") if s.strip()]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad range {text!r}") from None


def _emit(text: str, path: str | None, out) -> None:
    if path:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _cell(x):
    if x is None:
        return ""
    if isinstance(x, (Fraction, float, int)) and not isinstance(x, bool):
        return format_scalar(x)
    return str(x)


def _load(path, cfg: RunConfig, level=Level.DETERMINANT_CHECKED):
    g = read_matrix(path, cfg.scalar_mode)
    return validate(g, level, tol=cfg.tolerance)


def _flag(J, tol: float, exact: bool) -> str:
    if exact:
        return "J = 1" if J == 1 else ("J < 1" if J < 1 else "J > 1")
    if abs(J - 1) <= tol:
        return "J = 1"
    return "J < 1" if J < 1 else "J > 1"


def trace_rows(tr) -> list:
    rows = []
    for s in tr.states:
        rows.append([s.m, _cell(s.w.real_part()), _cell(s.w_abs), _cell(s.alpha), _cell(s.J),
                     repr(s.entry_max_norm)])
    return rows


def cmd_validate(args, cfg, out) -> int:
    g = read_matrix(args.matrix, cfg.scalar_mode)
    level = Level.FULLY_CERTIFIED if args.level == "certified" else Level.DETERMINANT_CHECKED
    try:
        v = validate(g, level, tol=cfg.tolerance)
    except ValidationError as exc:
        out.write(f"{exc}\n")
        return EXIT_INVALID
    out.write(f"{v.level.label}, Δ={format_number(v.delta())}\n")
    if args.echo:
        out.write(dumps_matrix(v) + "\n")
    return EXIT_OK


def cmd_jorgensen(args, cfg, out) -> int:
    f, g = _load(args.f, cfg), _load(args.g, cfg)
    rep = jorgensen_value(f, g, cfg.tolerance)
    if rep.K is None:
        raise NotDiagonalHyperbolic("f must be diag(r, 1/r) with |r| != 1")
    rec = rep.to_record()
    rec["flag"] = _flag(rep.J, cfg.tolerance, f.mode == RATIONAL)
    out.write(json.dumps(rec, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_iterate(args, cfg, out) -> int:
    f, g = _load(args.f, cfg), _load(args.g, cfg)
    tr = iterate(f, g, cfg.max_steps, cfg.tolerance, cfg.overflow_bound)
    _emit(_csv_text(TRACE_HEADER, trace_rows(tr)), cfg.csv_path, out)
    last = tr.states[-1]
    msg = f"status: {tr.status} at m={last.m}" + (f" ({tr.detail})" if tr.detail else "")
    (out if cfg.csv_path else sys.stderr).write(msg + "\n")
    return {"converged": EXIT_OK, "diverged": EXIT_DIVERGED}.get(tr.status, EXIT_BUDGET)


def cmd_certificate(args, cfg, out) -> int:
    f, g = _load(args.f, cfg), _load(args.g, cfg)
    cert = strictness_certificate(f, g, cfg.max_steps, cfg.tolerance, cfg.overflow_bound)
    out.write(json.dumps(cert.to_record(), sort_keys=True) + "\n")
    return EXIT_OK


def cmd_scan(args, cfg, out) -> int:
    mode = cfg.scalar_mode or FLOAT
    rs = parse_range(args.r_range, mode)
    ws = parse_range(args.w0_range, mode)
    steps = args.steps if args.steps is not None else cfg.max_steps
    if steps < 1:
        raise UsageError("--steps must be >= 1")
    rows = scan_grid(rs, ws, steps, mode, cfg.tolerance, workers=max(1, args.workers))
    text = _csv_text(SCAN_HEADER, [[_cell(r[k]) for k in SCAN_HEADER] for r in rows])
    _emit(text, cfg.csv_path, out)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "jorgensen": cmd_jorgensen,
    "iterate": cmd_iterate,
    "certificate": cmd_certificate,
    "scan": cmd_scan,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.mode, args.tol, args.max_steps, args.overflow_bound,
                        args.seed, args.csv_path)
        return COMMANDS[args.command](args, cfg, out)
    except UsageError as exc:
        sys.stderr.write(f"vahlen: error: {exc}\n")
        return EXIT_USAGE
    except ParseError as exc:
        sys.stderr.write(f"vahlen: parse error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"vahlen: {exc}\n")
        return EXIT_USAGE
    except NotDiagonalHyperbolic as exc:
        sys.stderr.write(f"vahlen: NotDiagonalHyperbolic: {exc}\n")
        return EXIT_NOT_DIAGONAL
    except ValidationError as exc:
        sys.stderr.write(f"vahlen: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
