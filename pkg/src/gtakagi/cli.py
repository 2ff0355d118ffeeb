"""Command-line entry point: ``gtakagi <verb> …``.

Exit status is 0 on success, 1 when a check fails and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction
from pathlib import Path

from .decomposition import (
    Decomposition,
    DecompositionError,
    build_c0_counterexample,
    build_counterexample,
    build_divisor_chain,
    build_radix,
    build_uneven,
    dumps,
    load,
    validate,
)
from .derivatives import (
    DEFAULT_TOLERANCE,
    DEFAULT_ZETAS,
    classify,
    dini,
    subdifferential_estimate,
    superdifferential_estimate,
)
from .evaluation import GeneralizedTakagi, InsufficientDepth, UncertifiedTail, parse_weights
from .harness import run_suite
from .numerics import RatInterval, format_rational, parse_rational
from .sequences import (
    delta_trace,
    generic_chord_trace,
    midpoint_chord_trace,
    reduce_to_D1,
    write_trace_csv,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# stored depth per generator when --levels is not given
DEFAULT_LEVELS = {"radix": 64, "chain": 64, "counterexample": 40, "uneven": 14, "c0": 60}


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(t) for t in text.split(",") if t.strip()]


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from None


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


# -- instance flags -------------------------------------------------------------

def _add_decomposition_flags(p: argparse.ArgumentParser, file_positional: bool = False) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--radix", type=int, metavar="R", help="r-adic grid D_n = {k r^-n}")
    g.add_argument("--chain", type=_int_list, metavar="1,R1,R2,…", help="divisor chain (periodic extension)")
    g.add_argument("--counterexample", action="store_true", help="the [-1,1] counterexample")
    g.add_argument("--counterexample-zero", action="store_true", help="counterexample with 0 in D_0")
    g.add_argument("--uneven", action="store_true", help="split-rule decomposition with uneven gaps")
    g.add_argument("--c0", action="store_true", help="tripled dyadic levels (pairs with 'triple' weights)")
    if file_positional:
        p.add_argument("file", nargs="?", help="decomposition file")
    else:
        g.add_argument("--file", help="decomposition file")
    p.add_argument("--levels", type=_nonneg_int, help="stored depth of the generated decomposition")


def _add_instance_flags(p: argparse.ArgumentParser) -> None:
    _add_decomposition_flags(p)
    p.add_argument("--weights", default="const 1", help="weight rule, e.g. 'const 1', 'alt 1', 'geom 1 1/2'")


def _decomposition(args, levels: int | None = None) -> Decomposition:
    lv = levels if levels is not None else args.levels

    def pick(kind):
        return DEFAULT_LEVELS[kind] if lv is None else lv

    try:
        if getattr(args, "file", None):
            return load(args.file)
        if args.radix is not None:
            return build_radix(args.radix, pick("radix"))
        if args.chain is not None:
            return build_divisor_chain(args.chain, pick("chain"))
        if args.counterexample or args.counterexample_zero:
            return build_counterexample(pick("counterexample"), args.counterexample_zero)
        if args.uneven:
            return build_uneven(pick("uneven"))
        if args.c0:
            return build_c0_counterexample(pick("c0"))
    except (DecompositionError, OSError) as exc:
        raise UsageError(str(exc)) from None
    raise UsageError("no decomposition given (use --radix, --chain, --counterexample, … or a file)")


def _instance(args) -> GeneralizedTakagi:
    try:
        w = parse_weights(args.weights)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad weight rule: {exc}") from None
    try:
        return GeneralizedTakagi(_decomposition(args), w)
    except UncertifiedTail as exc:
        raise UsageError(f"uncertified tail: {exc}") from None


def _points(args) -> list[Fraction]:
    pts = [p for group in (args.x or []) for p in group]
    if not pts:
        raise UsageError("at least one --x is required")
    return pts


# -- verbs ------------------------------------------------------------------------

def cmd_build(args) -> int:
    d = _decomposition(args, args.depth)
    text = dumps(d)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {d.describe()} to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_validate(args) -> int:
    d = _decomposition(args)
    top = d.depth if args.max_level is None else min(args.max_level, d.depth)
    try:
        rep = validate(d, rho=args.rho, max_level=top)
    except DecompositionError as exc:
        print(f"invalid: {exc}")
        return EXIT_FAIL
    cols = ["n", "alpha", "min_gap", "rho_n", "axiom3", "axiom4", "cond1", "cond2a", "cond2b", "a_le_rho"]
    print(f"{d.describe()}: rho = {format_rational(rep.rho)} ({rep.rho_source}), "
          f"inf rho_n = {format_rational(rep.rho_inf)}")
    print("  ".join(cols))
    for row in rep.summary_rows():
        print("  ".join(_cell(row[c]) for c in cols))
    ok = rep.holds("axiom3_ok") is not False and rep.holds("axiom4_ok") is not False
    for flag in ("axiom3_ok", "axiom4_ok"):
        bad = rep.first_failure(flag)
        if bad is not None:
            a, b = bad.witnesses[flag.removesuffix("_ok")]
            print(f"{flag.removesuffix('_ok')} fails at level {bad.n}: gap ({_cell(a)}, {_cell(b)})")
    print("axioms hold" if ok else "axioms fail")
    return EXIT_OK if ok else EXIT_FAIL


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "T" if v else "F"
    if isinstance(v, Fraction):
        return format_rational(v)
    return str(v)


def cmd_eval(args) -> int:
    T = _instance(args)
    for x in _points(args):
        if not (T.decomposition.lo <= x <= T.decomposition.hi):
            raise UsageError(f"x = {format_rational(x)} outside the carrier interval")
        exact = T.exact_value(x)
        if exact is not None:
            print(f"{format_rational(x)}\t{RatInterval.point(exact)}\texact")
            continue
        try:
            iv = T.evaluate(x, args.eps)
        except InsufficientDepth as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        print(f"{format_rational(x)}\t{iv}\twidth {format_rational(iv.width)} ~ {float(iv.midpoint):.12g}")
    return EXIT_OK


def _trace_rows(T: GeneralizedTakagi, x: Fraction, depth: int, side: str):
    pc = classify(T.decomposition, x, depth)
    if pc.kind == "in_D":
        S = reduce_to_D1(T, x).instance
        sides = ("right", "left") if side == "both" else (side,)
        rows = []
        for s in sides:
            rows.extend(delta_trace(S, x, s, depth).rows)
        return pc.kind, rows
    if pc.kind == "in_D_tilde":
        return pc.kind, midpoint_chord_trace(T, x, depth)
    return pc.kind, generic_chord_trace(T, x, depth)


def cmd_trace(args) -> int:
    T = _instance(args)
    x = _points(args)[0]
    kind, rows = _trace_rows(T, x, args.depth, args.side)
    if args.out:
        write_trace_csv(rows, args.out)
        print(f"{kind}: wrote {len(rows)} rows to {args.out}")
    else:
        write_trace_csv(rows, sys.stdout)
    return EXIT_OK


def cmd_dini(args) -> int:
    T = _instance(args)
    for x in _points(args):
        est = dini(T, x, args.depth, eps=args.eps)
        print(f"x = {format_rational(x)} (horizon {est.horizon}, {est.samples} samples)")
        print(f"  D- in {est.D_minus}  ~ {float(est.D_minus.midpoint):.12g}")
        print(f"  d+ in {est.d_plus}  ~ {float(est.d_plus.midpoint):.12g}")
        cert = est.certified_empty_depths()
        if cert:
            print(f"  left quotient exceeds right quotient at {len(cert)} depth(s)")
    return EXIT_OK


def cmd_subdiff(args) -> int:
    T = _instance(args)
    fn = superdifferential_estimate if args.super else subdifferential_estimate
    name = "superdifferential" if args.super else "subdifferential"
    for x in _points(args):
        res = fn(T, x, args.depth, zetas=tuple(args.zeta), tolerance=args.tolerance)
        print(f"{name} at {format_rational(x)} [{res.point_class.kind}]: {res.describe()}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if not args.all and args.filter is None:
        raise UsageError("verify needs --all or --filter")
    summary = run_suite(None if args.all else args.filter, depth=args.depth,
                        counter_depth=args.counter_depth, seed=args.seed,
                        report_path=args.report, csv_path=args.csv)
    sys.stdout.write(summary.text(timings=args.timings))
    return summary.exit_code


# -- plot --------------------------------------------------------------------------

def _dec(v: Fraction) -> str:
    return f"{float(v):.12g}"


def _svg(points: list[tuple[Fraction, Fraction]], title: str, width: int = 800, height: int = 400,
         pad: int = 40) -> str:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    sx = Fraction(width - 2 * pad) / (x1 - x0)
    sy = Fraction(height - 2 * pad) / (y1 - y0)
    coords = " ".join(f"{_dec(pad + (x - x0) * sx)},{_dec(height - pad - (y - y0) * sy)}" for x, y in points)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'<title>{title}</title>\n'
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>\n'
        f'<text x="{pad}" y="{pad // 2}" font-size="12">{title}; '
        f'x in [{_dec(x0)}, {_dec(x1)}], y in [{_dec(y0)}, {_dec(y1)}]</text>\n'
        f'<polyline fill="none" stroke="black" stroke-width="1" points="{coords}"/>\n'
        f'</svg>\n'
    )


def plot(T: GeneralizedTakagi, resolution: int, depth: int, out, base_point=None) -> list[Path]:
    """Grid enclosures ``partial_sum(depth) ± tail_bound(depth)``, exact on ``D``.

    Writes ``<out>.csv`` and ``<out>.svg``; with ``base_point`` also
    ``<out>_quotients.csv`` and ``<out>_quotients.svg`` (``n`` against the
    difference quotient at that point).
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    d = T.decomposition
    tail = T.tail_bound(depth)
    stem = Path(out)
    if stem.suffix in (".csv", ".svg"):
        stem = stem.with_suffix("")
    rows = []
    for j in range(resolution):
        x = d.lo + (d.hi - d.lo) * Fraction(j, resolution - 1)
        v = T.exact_value(x)
        if v is not None:
            lo = hi = v
        else:
            s = T.partial_sum(depth, x)
            lo, hi = s - tail, s + tail
        rows.append((x, lo, hi))
    csv_path, svg_path = stem.with_name(stem.name + ".csv"), stem.with_name(stem.name + ".svg")
    with open(csv_path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["x", "lower", "upper"])
        for x, lo, hi in rows:
            wr.writerow([format_rational(x), format_rational(lo), format_rational(hi)])
    title = f"T_w for {d.describe()}; w = {T.weights.describe()}"
    svg_path.write_text(_svg([(x, (lo + hi) / 2) for x, lo, hi in rows], title))
    written = [csv_path, svg_path]
    if base_point is not None:
        kind, trows = _trace_rows(T, Fraction(base_point), depth, "right")
        pts = [(Fraction(r.n), r.Delta if kind == "in_D" else r.quotient) for r in trows]
        qcsv = stem.with_name(stem.name + "_quotients.csv")
        qsvg = stem.with_name(stem.name + "_quotients.svg")
        write_trace_csv(trows, qcsv)
        if len(pts) >= 1:
            qsvg.write_text(_svg(pts, f"difference quotients at x = {format_rational(Fraction(base_point))}"))
            written.append(qsvg)
        written.append(qcsv)
    return written


def cmd_plot(args) -> int:
    T = _instance(args)
    try:
        files = plot(T, args.resolution, args.depth, args.out, args.base_point)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for f in files:
        print(f"wrote {f}")
    return EXIT_OK


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gtakagi", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    b = sub.add_parser("build", help="generate a decomposition and write it in text form")
    _add_decomposition_flags(b)
    b.add_argument("--depth", type=_nonneg_int, default=8, help="number of stored levels")
    b.add_argument("--out", help="output file (default stdout)")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("validate", help="check axioms and theorem hypotheses level by level")
    _add_decomposition_flags(v, file_positional=True)
    v.add_argument("--rho", type=_rational)
    v.add_argument("--max-level", type=_nonneg_int)
    v.set_defaults(func=cmd_validate)

    e = sub.add_parser("eval", help="certified enclosure of T_w(x)")
    _add_instance_flags(e)
    e.add_argument("--x", type=_rational_list, action="append", help="point(s), comma-separated")
    e.add_argument("--eps", type=_rational, default=Fraction(1, 10 ** 6))
    e.set_defaults(func=cmd_eval)

    t = sub.add_parser("trace", help="exact difference-quotient trace as CSV")
    _add_instance_flags(t)
    t.add_argument("--x", type=_rational_list, action="append")
    t.add_argument("--depth", type=_nonneg_int, default=12)
    t.add_argument("--side", choices=("right", "left", "both"), default="both")
    t.add_argument("--out")
    t.set_defaults(func=cmd_trace)

    dn = sub.add_parser("dini", help="Dini derivative enclosures D- and d+")
    _add_instance_flags(dn)
    dn.add_argument("--x", type=_rational_list, action="append")
    dn.add_argument("--depth", type=_nonneg_int, default=16)
    dn.add_argument("--eps", type=_rational)
    dn.set_defaults(func=cmd_dini)

    s = sub.add_parser("subdiff", help="subdifferential (or --super superdifferential) verdict")
    _add_instance_flags(s)
    s.add_argument("--x", type=_rational_list, action="append")
    s.add_argument("--depth", type=_nonneg_int, default=16)
    s.add_argument("--super", action="store_true")
    s.add_argument("--zeta", type=_rational_list, default=list(DEFAULT_ZETAS),
                   help="slopes tried by the local-minimum sweep (default 0,1,-1,10,-10)")
    s.add_argument("--tolerance", type=_rational, default=DEFAULT_TOLERANCE,
                   help="width below which the enclosure is reported as a derivative candidate")
    s.set_defaults(func=cmd_subdiff)

    vf = sub.add_parser("verify", help="run the check suite")
    vf.add_argument("--all", action="store_true")
    vf.add_argument("--filter")
    vf.add_argument("--depth", type=_nonneg_int, default=15)
    vf.add_argument("--counter-depth", type=_nonneg_int, default=10)
    vf.add_argument("--seed", type=int, default=0)
    vf.add_argument("--report", help="plain-text report path")
    vf.add_argument("--csv", help="CSV report path")
    vf.add_argument("--timings", action="store_true", help="show wall times (not byte-deterministic)")
    vf.set_defaults(func=cmd_verify)

    pl = sub.add_parser("plot", help="grid enclosures as CSV plus an SVG polyline")
    _add_instance_flags(pl)
    pl.add_argument("--resolution", type=int, default=257)
    pl.add_argument("--depth", type=_nonneg_int, default=12)
    pl.add_argument("--base-point", type=_rational)
    pl.add_argument("--out", required=True, help="output stem (writes <stem>.csv and <stem>.svg)")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
