"""Command-line entry point: spectra, series, bounds, witnesses, plots, verify."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from typing import Optional, Sequence

from . import bounds, checks, figures, pgst
from .dynamics import series_values, spectrum_of
from .errors import DomainError
from .model import PathSpec

DEFAULT_STEPS = 2000
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def fmt(x) -> str:
    """Round-trip float text, independent of locale; empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, str)):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return ""
    return format(x, ".17g")


def _json_value(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def to_csv(header: Sequence[str], rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def to_json(header: Sequence[str], rows, meta: Optional[dict] = None) -> str:
    doc = dict(meta or {})
    doc["rows"] = [{k: _json_value(v) for k, v in zip(header, row)} for row in rows]
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def write_text(text: str, out: Optional[str]) -> None:
    """Write to ``out`` atomically (temp file + rename), or to stdout."""
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    target = os.path.abspath(out)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target), prefix=".tmp-", suffix=os.path.basename(target))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        mask = os.umask(0)
        os.umask(mask)
        os.chmod(tmp, 0o666 & ~mask)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(args, header, rows, meta=None) -> None:
    text = to_json(header, rows, meta) if args.format == "json" else to_csv(header, rows)
    write_text(text, args.out)


# -- commands -------------------------------------------------------------------


def _spec(args, relaxed: bool = False) -> PathSpec:
    return PathSpec(args.n, args.w, relaxed=relaxed)


def _t_max(args, spec: PathSpec) -> float:
    if args.t_max is not None:
        return args.t_max
    return 10.0 * math.pi / spectrum_of(spec).gap


def cmd_spectrum(args) -> int:
    spec = _spec(args)
    sp = spectrum_of(spec)
    rows = [
        (k + 1, float(sp.lambdas[k]), float(sp.thetas[k]), float(sp.v1sq[k]), int(sp.parity[k]))
        for k in range(sp.n)
    ]
    emit(args, ("index", "lambda", "theta", "v1sq", "parity"), rows, {"n": spec.n, "w": spec.w, "gap": sp.gap})
    return EXIT_OK


def _series(args, kind: str, column: str) -> int:
    spec = _spec(args)
    ts, vals = series_values(spec, _t_max(args, spec), args.steps, kind)
    emit(args, ("t", column), zip(ts.tolist(), vals.tolist()), {"n": spec.n, "w": spec.w})
    return EXIT_OK


def cmd_fidelity(args) -> int:
    return _series(args, "fidelity", "value")


def cmd_sensitivity(args) -> int:
    if args.kind == "time":
        return _series(args, "dpdt", "dpdt")
    return _series(args, "dpdw", "dpdw")


def cmd_bounds(args) -> int:
    spec = _spec(args)
    sp = spectrum_of(spec)
    rep = bounds.bounds_report(spec, float(sp.lambdas[0]), float(sp.lambdas[1]), sp.gap)
    emit(args, ("name", "value", "valid", "note"), rep.rows(), {"n": spec.n, "w": spec.w})
    return EXIT_OK


def cmd_pgst_nogo(args) -> int:
    spec = _spec(args, relaxed=True)
    rows = []
    failed = 0
    for j, r in enumerate(pgst.witness_rows(spec, spec.w, args.count), start=1):
        if isinstance(r, Exception):
            failed += 1
            print(f"row {j}: solve failed: {r}", file=sys.stderr)
            rows.append((j, None, None, None, None))
        else:
            rows.append((j, r.w, r.p, r.q, r.residual))
    emit(args, ("j", "w", "p", "q", "residual"), rows, {"n": spec.n, "w_star": spec.w})
    return EXIT_FAIL if failed == len(rows) else EXIT_OK


def cmd_plot(args) -> int:
    spec = _spec(args)
    t_max = _t_max(args, spec)
    if args.kind == "time":
        svg = figures.time_panel(spec, t_max, args.steps).svg(spec)
    else:
        svg = figures.weight_panel(spec, t_max, args.steps).svg(spec)
    write_text(svg, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    keys = args.check or [k for k, _, _ in checks.CHECKS]
    failed = []
    for key in keys:
        res = checks.run_check(key, args.inject_fault)
        print(res.line(), flush=True)
        if not res.passed:
            failed.append(f"{res.key} {res.name}")
    if failed:
        print("failed: " + "; ".join(failed), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _finite(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite, got {text}")
    return v


def _positive(text: str) -> float:
    v = _finite(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pathloops", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_, series=False, tabular=True):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--n", type=int, required=True, help="number of vertices (>= 3)")
        w_help = "target weight w* (>= 1)" if name == "pgst-nogo" else "end-loop weight (> 1)"
        p.add_argument("--w", type=_finite, required=True, help=w_help)
        if series:
            p.add_argument("--t-max", type=_positive, default=None, help="end time (default 10*pi/gap)")
            p.add_argument("--steps", type=_positive_int, default=DEFAULT_STEPS, help="grid intervals")
        if tabular:
            p.add_argument("--format", choices=("csv", "json"), default="csv")
            p.add_argument("--out", default=None, help="output path (default stdout)")
        return p

    add("spectrum", cmd_spectrum, "eigenvalues, angles and squared end entries")
    add("fidelity", cmd_fidelity, "end-to-end fidelity series", series=True)
    p = add("sensitivity", cmd_sensitivity, "dp/dt or dp/dw series", series=True)
    p.add_argument("--kind", choices=("time", "weight"), default="time")
    add("bounds", cmd_bounds, "analytic bound report with validity flags")
    p = add("pgst-nogo", cmd_pgst_nogo, "weights above w* with no pretty good state transfer")
    p.add_argument("--count", type=_positive_int, default=3)
    p = add("plot", cmd_plot, "SVG figure", series=True, tabular=False)
    p.add_argument("--kind", choices=("time", "weight"), default="time")
    p.add_argument("--out", required=True, help="SVG output path")

    v = sub.add_parser("verify", help="run the invariant suite")
    v.set_defaults(func=cmd_verify)
    v.add_argument(
        "--inject-fault",
        type=_finite,
        nargs="?",
        const=1e-6,
        default=0.0,
        metavar="EPS",
        help="shift computed eigenvalues by EPS (default 1e-6) to exercise failure paths",
    )
    v.add_argument("--check", type=int, action="append", choices=[k for k, _, _ in checks.CHECKS])
    return parser


def validate(parser: argparse.ArgumentParser, args) -> None:
    if args.command == "verify":
        return
    if args.n < 3:
        parser.error(f"--n must be >= 3, got {args.n}")
    if args.command == "pgst-nogo":
        if args.w < 1.0:
            parser.error(f"--w (w*) must be >= 1, got {args.w}")
    elif args.w <= 1.0:
        parser.error(f"--w must be > 1, got {args.w}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    validate(parser, args)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
