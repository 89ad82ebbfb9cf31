"""Command-line entry point: expansions, reductions, statistics and figures."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__

SIG_DIGITS = 12


def _git_revision() -> str:
    try:
        out = subprocess.run(["git", "rev-parse", "--short", "HEAD"], capture_output=True, text=True,
                             cwd=Path(__file__).resolve().parent, timeout=5)
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    return out.stdout.strip() if out.returncode == 0 and out.stdout.strip() else "unknown"


def _round(obj):
    """Round every float to 12 significant digits, recursively."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(f"{obj:.{SIG_DIGITS}g}")
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalars
        return _round(obj.item())
    return obj


def dumps(obj) -> str:
    return json.dumps(_round(obj), indent=2, sort_keys=False) + "\n"


def _config(args: argparse.Namespace) -> dict:
    out = {k: v for k, v in vars(args).items() if k != "func"}
    out["version"] = __version__
    out["revision"] = _git_revision()
    return out


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def parse_gaussian(text: str):
    """Parse '3', '-2+5i', '1-i' or 'i' as a Gaussian integer."""
    from .gaussian import GaussianInteger

    s = text.replace(" ", "").replace("j", "i")
    m = re.fullmatch(r"([+-]?\d+)?(?:([+-]?\d*)i)?", s)
    if not s or m is None or (m.group(1) is None and m.group(2) is None):
        raise argparse.ArgumentTypeError(f"not a Gaussian integer: {text!r}")
    re_part = int(m.group(1)) if m.group(1) else 0
    im = m.group(2)
    if im is None:
        im_part = 0
    elif im in ("", "+"):
        im_part = 1
    elif im == "-":
        im_part = -1
    else:
        im_part = int(im)
    return GaussianInteger(re_part, im_part)


# -- subcommands ---------------------------------------------------------------------------

def cmd_expand(args: argparse.Namespace) -> int:
    from .dynamics import convergents, expand
    from .gaussian import GaussianProjectivePoint

    if args.rational:
        p, q = (parse_gaussian(t) for t in args.rational)
        z = GaussianProjectivePoint(p, q).canonical()
        res = expand(args.side, z, args.steps)
        point = {"p": str(p), "q": str(q)}
    elif args.exact:
        z = GaussianProjectivePoint.from_rationals(Fraction(args.point[0]), Fraction(args.point[1]))
        res = expand(args.side, z, args.steps)
        point = {"x": args.point[0], "y": args.point[1], "exact": True}
    else:
        z = complex(float(args.point[0]), float(args.point[1]))
        res = expand(args.side, z, args.steps if args.steps is not None else 64)
        point = {"x": z.real, "y": z.imag, "exact": False}
    out = {"config": _config(args), "input": point, **res.to_json(),
           "word_text": " ".join(l.name for l in res.word)}
    if args.convergents:
        conv = convergents(res.word)
        out["convergents"] = {k: [str(v) for v in vs] for k, vs in conv.items()}
    _emit(dumps(out), args.out)
    return 0


def cmd_reduce(args: argparse.Namespace) -> int:
    from . import quadruples as qd

    x = tuple(args.entries)
    if args.kind == "lorentz":
        trace = qd.t_l_reduce(x)
    elif args.kind == "descartes-swap":
        trace = qd.t_s_reduce(x)
    elif args.kind == "descartes-invert":
        trace = qd.t_i_reduce(x)
    else:
        trace = qd.t_d_reduce(x)
    out = {"config": _config(args), **trace.to_json(), "path_length": len(trace),
           "word_text": " ".join(trace.tokens())}
    if args.kind == "descartes-invert":
        out["swap_run_end"] = list(qd.swap_run_end(x))
        out["swap_run_end_is_root"] = qd.swap_run_root_check(x)
    _emit(dumps(out), args.out)
    return 0


def _write_report(report, prefix: str | None, plot: bool, config: dict, extra: dict | None = None) -> None:
    payload = {"config": config, **report.to_json()}
    if extra:
        payload.update(extra)
    if prefix is None:
        sys.stdout.write(dumps(payload))
        return
    Path(prefix + ".json").write_text(dumps(payload))
    Path(prefix + ".csv").write_text(report.to_csv())
    if plot:
        from .plotting import frequency_bars

        frequency_bars(report.observed, report.predicted, prefix + ".png", report.experiment)


def cmd_stats(args: argparse.Namespace) -> int:
    from . import experiments as ex
    from . import measure as me

    config = _config(args)
    if args.mode == "quadruples":
        rep = ex.experiment_bounded_quadruples(args.max_a)
        _write_report(rep, args.out, args.plot, config, {"published": ex.PUBLISHED_BOUNDED})
    elif args.mode == "random":
        rep = ex.experiment_random_points(args.count, args.steps, args.seed, args.side,
                                          exact=not args.float)
        _write_report(rep, args.out, args.plot, config, {"published": ex.PUBLISHED_RANDOM})
    elif args.mode == "predict":
        pred = me.predicted_frequencies(args.max_run)
        rows = [["pattern", "conjectural_value"]] + [[k, f"{v:.12g}"] for k, v in pred.items()]
        if args.out:
            Path(args.out + ".json").write_text(dumps({"config": config, "conjectural": pred}))
            buf = io.StringIO()
            csv.writer(buf, lineterminator="\n").writerows(rows)
            Path(args.out + ".csv").write_text(buf.getvalue())
        else:
            sys.stdout.write(dumps({"config": config, "conjectural": pred}))
    else:
        summary = me.transfer_summary(args.grid)
        _emit(dumps({"config": config, **summary.to_json()}), args.out)
    return 0


def cmd_render(args: argparse.Namespace) -> int:
    from .geometry import render_elements, render_svg

    clip = tuple(Fraction(v) for v in args.clip)
    elements = render_elements(args.depth, clip, args.side) if args.depth > 0 else []
    svg = render_svg(args.depth, clip, args.side, args.size, args.max_depth, elements)
    _emit(svg, args.out)
    if args.png:
        from .plotting import packing_png

        packing_png(elements, clip, args.png)
    return 0


def cmd_density(args: argparse.Namespace) -> int:
    import numpy as np

    from .measure import density_grid

    nx, ny = args.grid
    x0, y0, x1, y1 = args.range
    # cell centres, so the grid never lands exactly on a tangency point
    xs = x0 + (np.arange(nx) + 0.5) * (x1 - x0) / nx
    ys = y0 + (np.arange(ny) + 0.5) * (y1 - y0) / ny
    vals = density_grid(args.side, xs, ys)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", f"f_{args.side}"])
    for j, y in enumerate(ys):
        for i, x in enumerate(xs):
            w.writerow([f"{x:.12g}", f"{y:.12g}", f"{vals[j, i]:.12g}"])
    _emit(buf.getvalue(), args.out)
    if args.png:
        from .plotting import density_heatmap

        density_heatmap(xs, ys, vals, args.png, args.side)
    return 0


def cmd_gcd(args: argparse.Namespace) -> int:
    from .realline import euclid_reduce, romik_euclid

    p, q = args.p, args.q
    reflective = euclid_reduce(p, q)
    comparison = romik_euclid(p, q) if p > q >= 0 else None
    if args.format == "json":
        out = {"config": _config(args), "reflective": reflective.to_json(),
               "comparison": comparison.to_json() if comparison else None}
        _emit(dumps(out), args.out)
        return 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", "reflective_letter", "reflective_p", "reflective_q",
                "comparison_letter", "comparison_p", "comparison_q"])
    left = reflective.states
    right = comparison.states if comparison else []
    for k in range(max(len(left), len(right))):
        row = [k]
        for trace, states in ((reflective, left), (comparison, right)):
            if k < len(states):
                row += [trace.letters[k - 1] if k else "", *states[k]]
            else:
                row += ["", "", ""]
        w.writerow(row)
    _emit(buf.getvalue(), args.out)
    return 0


# -- parser --------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superapollonian",
                                     description="Reflective Gaussian continued fractions and quadruple reductions.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__} (git {_git_revision()})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="expand a planar point or Gaussian rational")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--rational", nargs=2, metavar=("P", "Q"), help="p/q with Gaussian integers like 2+3i")
    src.add_argument("--point", nargs=2, metavar=("X", "Y"), help="the point x + iy")
    p.add_argument("--exact", action="store_true", help="read --point as exact decimal rationals")
    p.add_argument("--side", choices=("A", "B"), default="B")
    p.add_argument("--steps", type=int, default=None, help="maximum number of letters")
    p.add_argument("--convergents", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("reduce", help="reduce an integer quadruple")
    p.add_argument("kind", choices=("lorentz", "descartes-swap", "descartes-invert", "height"))
    p.add_argument("entries", nargs=4, type=int, metavar="N")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("stats", help="frequency experiments and predictions")
    p.add_argument("mode", choices=("quadruples", "random", "predict", "transfer"))
    p.add_argument("--max-a", type=int, default=200)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--side", choices=("A", "B"), default="B")
    p.add_argument("--float", action="store_true", help="float expansions instead of exact dyadic points")
    p.add_argument("--max-run", type=int, default=3)
    p.add_argument("--grid", type=int, default=400_000, help="sphere grid size for 'transfer'")
    p.add_argument("--out", help="output prefix; writes PREFIX.json and PREFIX.csv")
    p.add_argument("--plot", action="store_true", help="also write PREFIX.png")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("render", help="draw Farey region outlines as SVG")
    p.add_argument("--depth", type=int, default=5)
    p.add_argument("--clip", nargs=4, default=["0", "0", "1", "1"], metavar=("X0", "Y0", "X1", "Y1"))
    p.add_argument("--side", choices=("A", "B"), default="B")
    p.add_argument("--size", type=int, default=800)
    p.add_argument("--max-depth", type=int, default=7)
    p.add_argument("--out")
    p.add_argument("--png", help="also write a raster version here")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("density", help="sample the invariant density on a grid")
    p.add_argument("--side", choices=("A", "B"), default="B")
    p.add_argument("--grid", nargs=2, type=int, default=[200, 200], metavar=("NX", "NY"))
    p.add_argument("--range", nargs=4, type=float, default=[-0.5, -0.5, 1.5, 1.5],
                   metavar=("X0", "Y0", "X1", "Y1"))
    p.add_argument("--out")
    p.add_argument("--png", help="also write a heatmap here")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("gcd", help="trace both Euclidean algorithms side by side")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gcd)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - reported, not hidden
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
