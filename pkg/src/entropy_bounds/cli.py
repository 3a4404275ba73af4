"""Command-line front end.

Subcommands: ``coeffs`` exports exact coefficient tables as JSON, ``bounds``
evaluates sandwich bounds over parameter grids, ``verify`` cross-checks the
bounds against the brute-force oracles, and ``figure`` emits gap/bound
columns for external plotting.

Exit codes: 0 success, 1 verification failure (a sandwich missed its
oracle, which the theorems rule out for a correct build), 2 usage error.
Identical invocations produce byte-identical output; the environment
variable ``ENTROPY_BOUNDS_BITS`` overrides the default 256-bit precision.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import mpmath

from . import bounds, coefficients, oracle
from .coefficients import BinomialCoeffSet, PoissonCoeffSet
from .symbolic import (
    DomainError,
    LaurentPoly,
    LogLaurent,
    PrecisionContext,
    parse_rational,
    rational_str,
    to_mpf,
)

_DEFAULT_POISSON_POINTS = "0.1,0.5,1,2,5,10,20,50,100"
_DEFAULT_P_POINTS = "0.05,0.2,0.5,0.8,0.95"


class UsageError(ValueError):
    """Bad command-line input; mapped to exit code 2."""


def _digits(bits: int) -> int:
    # enough decimal digits for a lossless round-trip at the given precision
    return math.ceil(bits * 0.3010) + 2


def _fmt(x, bits: int) -> str:
    return mpmath.nstr(x, _digits(bits))


def _default_bits() -> int:
    raw = os.environ.get("ENTROPY_BOUNDS_BITS")
    if raw is None:
        return 256
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"ENTROPY_BOUNDS_BITS must be an integer, got {raw!r}") from exc


def _context(args) -> PrecisionContext:
    bits = args.bits if args.bits is not None else _default_bits()
    try:
        return PrecisionContext(bits=bits, target_rel_err=args.rel_err)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _parse_points(spec: str) -> list[Fraction]:
    try:
        points = [Fraction(tok) for tok in spec.split(",") if tok.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad points list {spec!r}") from exc
    if not points:
        raise UsageError("empty points list")
    return points


def _parse_grid(spec: str) -> list[Fraction]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be start:stop:step, got {spec!r}")
    try:
        start, stop, step = (Fraction(tok) for tok in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad grid spec {spec!r}") from exc
    if step <= 0 or stop < start:
        raise UsageError(f"grid requires stop >= start and step > 0, got {spec!r}")
    points = []
    x = start
    while x <= stop:
        points.append(x)
        x += step
    return points


def _grid_points(args, default: str | None = None) -> list[Fraction]:
    if getattr(args, "grid", None) and getattr(args, "points", None):
        raise UsageError("give either --grid or --points, not both")
    if getattr(args, "grid", None):
        return _parse_grid(args.grid)
    if getattr(args, "points", None):
        return _parse_points(args.points)
    if default is not None:
        return _parse_points(default)
    raise UsageError("a --grid or --points argument is required")


def _parse_m_list(spec: str) -> list[int]:
    try:
        ms = [int(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"bad m list {spec!r}") from exc
    if not ms or any(m < 1 for m in ms):
        raise UsageError(f"orders must be positive integers, got {spec!r}")
    return ms


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# --- coeffs ---------------------------------------------------------------


def _loglaurent_json(f: LogLaurent) -> dict:
    return {
        "terms": {str(e): rational_str(c) for e, c in f.laurent.terms()},
        "log": rational_str(f.log_coeff),
    }


def _loglaurent_from_json(obj: dict) -> LogLaurent:
    terms = LaurentPoly((int(e), parse_rational(c)) for e, c in obj["terms"].items())
    return LogLaurent(terms, parse_rational(obj["log"]))


def coeffs_to_json(kind: str, m: int | None, kmax: int | None, ctx: PrecisionContext) -> dict:
    if kind == "poisson":
        cs = coefficients.poisson_coeffs(m)
        return {
            "kind": kind,
            "m": m,
            "a": {str(k): rational_str(v) for k, v in sorted(cs.a.items())},
            "b": {str(k): rational_str(v) for k, v in sorted(cs.b.items())},
        }
    if kind == "binomial":
        cs = coefficients.binomial_coeffs(m)
        return {
            "kind": kind,
            "m": m,
            "a": {str(k): _loglaurent_json(v) for k, v in sorted(cs.a_tilde.items())},
            "b": {str(k): _loglaurent_json(v) for k, v in sorted(cs.b_tilde.items())},
        }
    if kind == "small-lambda":
        return {
            "kind": kind,
            "kmax": kmax,
            "bits": ctx.bits,
            "c": {str(k): _fmt(coefficients.c_coeff(k, ctx), ctx.bits) for k in range(2, kmax + 1)},
        }
    raise UsageError(f"unknown coefficient kind {kind!r}")


def coeffs_from_json(obj: dict) -> PoissonCoeffSet | BinomialCoeffSet | dict:
    """Re-parse an exported coefficient table to its structured form."""
    kind = obj["kind"]
    if kind == "poisson":
        return PoissonCoeffSet(
            m=obj["m"],
            b={int(k): parse_rational(v) for k, v in obj["b"].items()},
            a={int(k): parse_rational(v) for k, v in obj["a"].items()},
        )
    if kind == "binomial":
        return BinomialCoeffSet(
            m=obj["m"],
            b_tilde={int(k): _loglaurent_from_json(v) for k, v in obj["b"].items()},
            a_tilde={int(k): _loglaurent_from_json(v) for k, v in obj["a"].items()},
        )
    if kind == "small-lambda":
        return {int(k): v for k, v in obj["c"].items()}
    raise ValueError(f"unknown coefficient kind {kind!r}")


def _cmd_coeffs(args) -> int:
    ctx = _context(args)
    if args.kind in ("poisson", "binomial"):
        if args.m is None:
            raise UsageError(f"--m is required for kind {args.kind}")
        payload = coeffs_to_json(args.kind, args.m, None, ctx)
    else:
        if args.kmax is None or args.kmax < 2:
            raise UsageError("--kmax >= 2 is required for kind small-lambda")
        payload = coeffs_to_json(args.kind, None, args.kmax, ctx)
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    return 0


# --- bounds ---------------------------------------------------------------


def _poisson_report(lam, method: str, m, ctx: PrecisionContext):
    if method == "small-lambda":
        fn = bounds.entropy_poisson_small
    elif method == "large-lambda":
        fn = bounds.entropy_poisson_large
    else:
        raise UsageError(f"unknown poisson method {method!r}")
    if m == "auto":
        return bounds.best_interval(fn, lam, ctx=ctx)
    return fn(lam, m, ctx)


def _binomial_report(n: int, p, method: str, m, ctx: PrecisionContext):
    if method == "stirling-m1":
        return bounds.entropy_binomial_stirling_m1(n, p, ctx)
    if method != "corollary":
        raise UsageError(f"unknown binomial method {method!r}")
    if m == "auto":
        return bounds.best_interval(bounds.entropy_binomial_bounds, n, p, ctx=ctx)
    return bounds.entropy_binomial_bounds(n, p, m, ctx)


def _relative_report(n: int, p, m, ctx: PrecisionContext):
    if m == "auto":
        return bounds.best_interval(bounds.relative_entropy_bounds, n, p, ctx=ctx)
    return bounds.relative_entropy_bounds(n, p, m, ctx)


def _parse_order(spec: str):
    if spec == "auto":
        return "auto"
    try:
        m = int(spec)
    except ValueError as exc:
        raise UsageError(f"--m must be an integer or 'auto', got {spec!r}") from exc
    if m < 1:
        raise UsageError(f"--m must be >= 1, got {m}")
    return m


def _require_n(args) -> int:
    if args.n is None:
        raise UsageError(f"--n is required for target {args.target}")
    if args.n < 1:
        raise UsageError(f"--n must be >= 1, got {args.n}")
    return args.n


def _cmd_bounds(args) -> int:
    ctx = _context(args)
    m = _parse_order(args.m)
    bits = ctx.bits
    rows: list[list[str]] = []
    failures = 0

    if args.target == "poisson-entropy":
        header = ["lambda", "m", "method", "lower", "upper", "midpoint", "gap", "error"]
        points = _grid_points(args, _DEFAULT_POISSON_POINTS)
        for lam in points:
            lam_str = _fmt(to_mpf(lam), bits)
            if args.method == "cover-thomas":
                try:
                    upper = bounds.entropy_poisson_ct(lam, ctx)
                    rows.append([lam_str, "", args.method, "", _fmt(upper, bits), "", "", ""])
                except DomainError as exc:
                    failures += 1
                    rows.append([lam_str, "", args.method, "", "", "", "", str(exc)])
                continue
            try:
                rep = _poisson_report(lam, args.method, m, ctx)
                rows.append(
                    [lam_str, str(rep.m), rep.method, _fmt(rep.lower, bits), _fmt(rep.upper, bits),
                     _fmt(rep.midpoint, bits), _fmt(rep.gap, bits), ""]
                )
            except DomainError as exc:
                failures += 1
                rows.append([lam_str, str(m), args.method, "", "", "", "", str(exc)])
    else:
        n = _require_n(args)
        header = ["n", "p", "m", "method", "lower", "upper", "midpoint", "gap", "error"]
        points = _grid_points(args, _DEFAULT_P_POINTS)
        for p in points:
            p_str = _fmt(to_mpf(p), bits)
            try:
                if args.target == "relative-entropy":
                    rep = _relative_report(n, p, m, ctx)
                else:
                    rep = _binomial_report(n, p, args.method, m, ctx)
                rows.append(
                    [str(n), p_str, str(rep.m), rep.method, _fmt(rep.lower, bits),
                     _fmt(rep.upper, bits), _fmt(rep.midpoint, bits), _fmt(rep.gap, bits), ""]
                )
            except DomainError as exc:
                failures += 1
                rows.append([str(n), p_str, str(m), args.method or "", "", "", "", "", str(exc)])

    if failures == len(rows):
        raise UsageError("every grid point failed with a domain error")
    if args.format == "json":
        payload = [dict(zip(header, row)) for row in rows]
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        _emit(_csv_text(header, rows), args.out)
    return 0


# --- verify ---------------------------------------------------------------


def _cmd_verify(args) -> int:
    ctx = _context(args)
    bits = ctx.bits
    m_list = _parse_m_list(args.m_list)
    rows: list[list[str]] = []
    violations = 0

    def record(point_cols: list[str], m: int, method: str, oracle_value, report) -> None:
        nonlocal violations
        contained = report.interval.contains(oracle_value)
        if not contained:
            violations += 1
        margin = min(oracle_value - report.lower, report.upper - oracle_value)
        rows.append(
            point_cols
            + [str(m), method, _fmt(oracle_value, bits), _fmt(report.lower, bits),
               _fmt(report.upper, bits), str(contained).lower(), _fmt(margin, bits)]
        )

    if args.target == "poisson-entropy":
        header = ["lambda", "m", "method", "oracle", "lower", "upper", "contained", "margin"]
        for lam in _grid_points(args, _DEFAULT_POISSON_POINTS):
            value, _ = oracle.poisson_entropy_oracle(lam, ctx)
            for m in m_list:
                rep = _poisson_report(lam, args.method, m, ctx)
                record([_fmt(to_mpf(lam), bits)], m, rep.method, value, rep)
    else:
        n = _require_n(args)
        header = ["n", "p", "m", "method", "oracle", "lower", "upper", "contained", "margin"]
        for p in _grid_points(args, _DEFAULT_P_POINTS):
            point = [str(n), _fmt(to_mpf(p), bits)]
            if args.target == "relative-entropy":
                value = oracle.relative_entropy_oracle(n, p, ctx)
                for m in m_list:
                    record(point, m, "relative-entropy", value, _relative_report(n, p, m, ctx))
            else:
                value = oracle.binomial_entropy_oracle(n, p, ctx)
                if args.method == "stirling-m1":
                    rep = bounds.entropy_binomial_stirling_m1(n, p, ctx)
                    record(point, 1, rep.method, value, rep)
                else:
                    for m in m_list:
                        record(point, m, "binomial-corollary", value,
                               bounds.entropy_binomial_bounds(n, p, m, ctx))

    _emit(_csv_text(header, rows), args.out)
    return 1 if violations else 0


# --- figure ---------------------------------------------------------------


def _cmd_figure(args) -> int:
    ctx = _context(args)
    bits = ctx.bits
    m_list = _parse_m_list(args.m_list)
    points = _grid_points(args)
    if any(lam <= 0 for lam in points):
        raise UsageError("figure range requires lambda > 0")

    if args.fig == "gaps":
        header = ["lambda"] + [f"gap_m{m}" for m in m_list]
    else:
        header = ["lambda"]
        for m in m_list:
            header += [f"lower_m{m}", f"upper_m{m}"]

    rows = []
    for lam in points:
        row = [_fmt(to_mpf(lam), bits)]
        for m in m_list:
            rep = bounds.entropy_poisson_large(lam, m, ctx)
            if args.fig == "gaps":
                row.append(_fmt(rep.gap, bits))
            else:
                row += [_fmt(rep.lower, bits), _fmt(rep.upper, bits)]
        rows.append(row)
    _emit(_csv_text(header, rows), args.out)
    return 0


# --- parser ---------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--bits", type=int, default=None,
                        help="working precision in bits (default 256 or $ENTROPY_BOUNDS_BITS)")
    parser.add_argument("--rel-err", type=float, default=1e-30,
                        help="certified series truncation target (default 1e-30)")
    parser.add_argument("--out", default=None, help="output file (default stdout)")


def _add_grid(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--grid", default=None, help="range start:stop:step")
    parser.add_argument("--points", default=None, help="comma-separated points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entropy-bounds",
        description="Exact expansion coefficients and certified entropy bounds "
                    "for the Poisson and binomial laws.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="export exact coefficient tables as JSON")
    p.add_argument("kind", choices=["poisson", "binomial", "small-lambda"])
    p.add_argument("--m", type=int, default=None, help="expansion order")
    p.add_argument("--kmax", type=int, default=None, help="largest k for small-lambda c(k)")
    _add_common(p)
    p.set_defaults(handler=_cmd_coeffs)

    p = sub.add_parser("bounds", help="evaluate sandwich bounds over a grid")
    p.add_argument("target", choices=["poisson-entropy", "binomial-entropy", "relative-entropy"])
    p.add_argument("--method", default=None,
                   help="poisson-entropy: small-lambda|large-lambda|cover-thomas; "
                        "binomial-entropy: corollary|stirling-m1")
    p.add_argument("--m", default="2", help="expansion order, or 'auto' for the narrowest of 1..6")
    p.add_argument("--n", type=int, default=None, help="number of trials (binomial targets)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    _add_grid(p)
    _add_common(p)
    p.set_defaults(handler=_cmd_bounds)

    p = sub.add_parser("verify", help="cross-check bounds against brute-force oracles")
    p.add_argument("target", choices=["poisson-entropy", "binomial-entropy", "relative-entropy"])
    p.add_argument("--method", default=None, help="as for the bounds command")
    p.add_argument("--m-list", default="1,2,3,4,5", help="comma-separated orders")
    p.add_argument("--n", type=int, default=None, help="number of trials (binomial targets)")
    _add_grid(p)
    _add_common(p)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("figure", help="CSV data for gap/bound plots over a lambda range")
    p.add_argument("fig", choices=["gaps", "bounds"])
    p.add_argument("--m-list", default="1,2,3", help="comma-separated orders")
    _add_grid(p)
    _add_common(p)
    p.set_defaults(handler=_cmd_figure)

    return parser


def _normalize_method(args) -> None:
    if getattr(args, "method", "missing") is None:
        if args.target == "poisson-entropy":
            args.method = "large-lambda"
        elif args.target == "binomial-entropy":
            args.method = "corollary"


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _normalize_method(args)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"entropy-bounds: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
