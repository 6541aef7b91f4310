"""Command-line front end.

Subcommands: ``eval`` (one operator value), ``sweep`` (operator over an x
grid, CSV or JSON lines), ``verify`` (the identity suites, with report
files), ``norm`` (weighted norm or the boundedness constant), ``figures``
(the integral/derivative surface data of the eigenfunction family, one CSV
per map, plus a gnuplot script).  No math lives here; every command maps
onto library calls.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
failure.  ``FRACOP_SEED`` overrides the default verify seed; ``--config``
reads flat ``key = value`` defaults mirroring the long flags.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from fracop import catalogue, spaces, verify
from fracop.monotone import parse_map
from fracop.operators import OperatorKind, OperatorSpec, Side, evaluate_with_error
from fracop.quadrature import QuadratureConfig, QuadratureError

_KINDS = {
    "integral": OperatorKind.INTEGRAL,
    "deriv-rl": OperatorKind.DERIVATIVE_RL,
    "deriv-caputo": OperatorKind.DERIVATIVE_CAPUTO,
}

USAGE_ERROR, VERIFY_FAILURE, NUMERICAL_FAILURE = 2, 1, 3


def _default_seed() -> int:
    env = os.environ.get("FRACOP_SEED", "").strip()
    return int(env) if env else verify.DEFAULT_SEED


def _add_operator_args(p: argparse.ArgumentParser):
    p.add_argument("--kind", choices=sorted(_KINDS), default="integral")
    p.add_argument("--psi", default="identity", help="map spec, e.g. identity, exp, power:2")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--a", type=float, default=None, help="left anchor")
    p.add_argument("--b", type=float, default=None, help="right anchor (side=right)")
    p.add_argument("--side", choices=["left", "right"], default="left")
    p.add_argument("--f", default="const:1", help="integrand spec, e.g. logpow:nu=2")


def _add_quad_args(p: argparse.ArgumentParser):
    p.add_argument("--nodes", type=int, default=64)
    p.add_argument("--max-subdivisions", type=int, default=12)
    p.add_argument("--abs-tol", type=float, default=1e-10)
    p.add_argument("--rel-tol", type=float, default=1e-9)


def _quad_config(args) -> QuadratureConfig:
    return QuadratureConfig(
        jacobi_nodes=args.nodes,
        max_subdivisions=args.max_subdivisions,
        abs_tol=args.abs_tol,
        rel_tol=args.rel_tol,
    )


def _operator_setup(args):
    m = parse_map(args.psi)
    side = Side.LEFT if args.side == "left" else Side.RIGHT
    anchor = args.a if side is Side.LEFT else args.b
    if anchor is None:
        raise SystemExit2(f"--{'a' if side is Side.LEFT else 'b'} is required")
    spec = OperatorSpec(_KINDS[args.kind], args.mu, args.s, m, anchor, side)
    f = catalogue.parse_integrand(args.f, m, args.s, anchor, args.side)
    return spec, f


class SystemExit2(Exception):
    """Usage error carried to the top-level handler (exit code 2)."""


def _cmd_eval(args) -> int:
    spec, f = _operator_setup(args)
    value, err = evaluate_with_error(spec, f, args.x, _quad_config(args))
    estimate = "n/a" if math.isnan(err) else f"{err:.3e}"
    print(f"{value:.12g}  (quadrature error estimate {estimate})")
    return 0


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _cmd_sweep(args) -> int:
    spec, f = _operator_setup(args)
    config = _quad_config(args)
    mus = [float(v) for v in args.mu_list.split(",")] if args.mu_list else [args.mu]
    xs = np.linspace(args.x_min, args.x_max, args.points)
    rows = []
    failures = 0
    for mu in sorted(mus):
        sp = spec.with_(mu=mu)
        try:
            vals, _ = evaluate_with_error(sp, f, xs, config)
            vals = np.atleast_1d(np.asarray(vals, dtype=float))
        except (QuadratureError, ValueError, RuntimeError):
            vals = np.full(xs.shape, math.nan)
        for x, v in zip(xs, vals):
            if math.isnan(v):
                failures += 1
            rows.append((float(x), float(mu), float(v)))
    rows.sort(key=lambda r: (r[0], r[1]))
    out = Path(args.out)
    if args.format == "csv":
        text = "x,mu,value\n" + "\n".join(
            f"{_fmt(x)},{_fmt(mu)},{_fmt(v)}" for x, mu, v in rows
        ) + "\n"
    else:
        text = "\n".join(
            json.dumps({"x": x, "mu": mu, "value": v}, sort_keys=True)
            for x, mu, v in rows
        ) + "\n"
    out.write_text(text, encoding="utf-8")
    print(f"wrote {len(rows)} rows to {out}")
    return NUMERICAL_FAILURE if failures else 0


_FIGURE_MAPS = (("sqrt", "sqrt"), ("identity", "identity"), ("power2", "power:2"))

_GNUPLOT = """\
# Render the surface data: gnuplot plot_figures.gnuplot
set datafile separator ','
set dgrid3d 81,9
set hidden3d
set xlabel 'x'
set ylabel 'order'
do for [fig in "figure1 figure2"] {
  do for [m in "sqrt identity power2"] {
    set output sprintf('%s_%s.svg', fig, m)
    set terminal svg size 640,480
    splot sprintf('%s_%s.csv', fig, m) every ::1 using 1:2:3 with lines notitle
  }
}
"""


def _cmd_figures(args) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    xs = np.linspace(args.x_min, args.x_max, args.points)
    mus = [round(0.1 * k, 1) for k in range(1, 10)]
    config = _quad_config(args)
    failures = 0
    for label, mapspec in _FIGURE_MAPS:
        m = parse_map(mapspec)
        f = catalogue.logpow(2.0, m, 1.0, 1.0)
        for fig, kind in (("figure1", OperatorKind.INTEGRAL), ("figure2", OperatorKind.DERIVATIVE_RL)):
            rows = []
            for mu in mus:
                spec = OperatorSpec(kind, mu, 1.0, m, 1.0)
                pts = xs
                if kind is OperatorKind.DERIVATIVE_RL:
                    pts = np.where(xs == 1.0, np.nan, xs)
                try:
                    vals = np.full(xs.shape, math.nan)
                    ok = ~np.isnan(pts)
                    out_vals, _ = evaluate_with_error(spec, f, pts[ok], config)
                    vals[ok] = np.atleast_1d(np.asarray(out_vals, dtype=float))
                except (QuadratureError, ValueError, RuntimeError):
                    vals = np.full(xs.shape, math.nan)
                for x, v in zip(xs, vals):
                    if math.isnan(v) and not (kind is OperatorKind.DERIVATIVE_RL and x == 1.0):
                        failures += 1
                    rows.append((float(x), float(mu), float(v)))
            rows.sort(key=lambda r: (r[0], r[1]))
            path = outdir / f"{fig}_{label}.csv"
            path.write_text(
                "x,mu,value\n"
                + "\n".join(f"{_fmt(x)},{_fmt(mu)},{_fmt(v)}" for x, mu, v in rows)
                + "\n",
                encoding="utf-8",
            )
    (outdir / "plot_figures.gnuplot").write_text(_GNUPLOT, encoding="utf-8")
    print(f"wrote figure CSVs and plot script to {outdir}")
    return NUMERICAL_FAILURE if failures else 0


def _cmd_verify(args) -> int:
    names = sorted(verify.SUITES) if args.suite == "all" else [args.suite]
    outdir = Path(args.out) if args.out else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)
    all_pass = True
    for name in names:
        report = verify.run_suite(name, seed=args.seed, tol_scale=args.tol_scale)
        all_pass &= report.passed
        print(
            f"suite={name} cases={len(report.cases)} "
            f"max-residual={report.max_residual:.3e} "
            f"status={'PASS' if report.passed else 'FAIL'} "
            f"({report.wall_time:.1f}s)"
        )
        if outdir:
            (outdir / f"{name}.report.txt").write_text(
                verify.report_text(report), encoding="utf-8"
            )
            (outdir / f"{name}.report.json").write_text(
                verify.report_json(report), encoding="utf-8"
            )
    return 0 if all_pass else VERIFY_FAILURE


def _cmd_norm(args) -> int:
    m = parse_map(args.psi)
    space = spaces.SpaceSpec(
        math.inf if args.p == "inf" else float(args.p), args.c, (args.a, args.b), m
    )
    if args.bound:
        value = spaces.bound_constant_k(args.mu, args.s, args.c, space)
    else:
        f = catalogue.parse_integrand(args.f, m, args.s, args.a)
        value = spaces.x_norm(space, f)
    print(f"{value:.12g}")
    return 0


def _apply_config_file(argv, parser):
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    try:
        path = argv[i + 1]
    except IndexError:
        raise SystemExit2("--config needs a path") from None
    defaults = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        defaults[key.strip().replace("-", "_")] = value.strip()
    parser.set_defaults(**defaults)
    return argv[:i] + argv[i + 2 :]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracop",
        description="Tempered and Hadamard-type fractional operators with "
        "respect to monotone maps",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one operator value")
    _add_operator_args(p)
    _add_quad_args(p)
    p.add_argument("--x", type=float, required=True)
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("sweep", help="evaluate over an x grid, write CSV/JSON lines")
    _add_operator_args(p)
    _add_quad_args(p)
    p.add_argument("--x-min", type=float, required=True)
    p.add_argument("--x-max", type=float, required=True)
    p.add_argument("--points", type=int, default=81)
    p.add_argument("--mu-list", default=None, help="comma list overriding --mu")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["csv", "json-lines"], default="csv")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("verify", help="run identity verification suites")
    p.add_argument(
        "--suite",
        choices=sorted(verify.SUITES) + ["all"],
        default="all",
    )
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--tol-scale", type=float, default=1.0)
    p.add_argument("--out", default=None, help="directory for report files")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("norm", help="weighted norm or the boundedness constant")
    p.add_argument("--p", default="2")
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--psi", default="identity")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--f", default="const:1")
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--mu", type=float, default=0.5)
    p.add_argument("--bound", action="store_true", help="print the constant instead")
    p.set_defaults(fn=_cmd_norm)

    p = sub.add_parser("figures", help="surface data of the eigenfunction example")
    _add_quad_args(p)
    p.add_argument("--out", default="figures")
    p.add_argument("--x-min", type=float, default=1.0)
    p.add_argument("--x-max", type=float, default=5.0)
    p.add_argument("--points", type=int, default=81)
    p.set_defaults(fn=_cmd_figures)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config_file(argv, parser)
        args = parser.parse_args(argv)
        return args.fn(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (QuadratureError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_FAILURE


if __name__ == "__main__":
    sys.exit(main())
