"""Command-line front end.

Exit codes: 0 success, 1 a verify check failed, 2 invalid arguments,
3 numerical failure, 4 output directory not writable.
"""

import argparse
import csv
import io
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import oracle
from .errors import DomainError, InvalidProfileError
from .optimizer import (
    GOLDEN_A,
    classify,
    closed_form_resistance,
    default_workers,
    envelopes,
    newton_limit,
    regime_boundaries,
    solve,
    sweep,
    sweep_csv,
)
from .pressure import Medium, PressureSide, Side
from .quadrature import QuadratureConfig
from .svgplot import line_plot

EXIT_OK, EXIT_CHECK, EXIT_ARGS, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def parse_range(text):
    """``start:stop:step`` (inclusive, half-step slack), a comma list, or one number."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"range must be start:stop:step, got {text!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise UsageError(f"bad number in range {text!r}") from None
        if not (step > 0 and math.isfinite(start) and math.isfinite(stop)) or stop < start:
            raise UsageError(f"range needs step > 0 and stop >= start, got {text!r}")
        n = int(math.floor((stop - start) / step + 0.5)) + 1
        return [start + i * step for i in range(n)]
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"bad number list {text!r}") from None


def _fmt(x):
    return f"{x:.6g}"


def _write_text(path, text):
    path.write_text(text, encoding="utf-8", newline="")


def _ensure_dir(path):
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {path}: {exc}") from exc
    if not os.access(path, os.W_OK):
        raise OSError(f"output directory {path} is not writable")
    return path


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([f"{x:.17g}" if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def _one(values, name):
    if len(values) != 1:
        raise UsageError(f"--{name} takes a single value here")
    return values[0]


# ---------------------------------------------------------------- commands


def cmd_pressure(args, cfg):
    V = _one(args.v, "v")
    medium = Medium(V)
    fr, re_ = PressureSide(Side.FRONT, medium, cfg), PressureSide(Side.REAR, medium, cfg)
    us = args.u
    if any(u < 0 for u in us):
        raise DomainError("slope u must be nonnegative")
    u_arr = np.array(us)
    p_f, p_r = np.atleast_1d(fr.eval(u_arr)), np.atleast_1d(re_.eval(u_arr))
    d_f, d_r = np.atleast_1d(fr.deriv(u_arr)), np.atleast_1d(re_.deriv(u_arr))
    if len(us) == 1:
        print(f"V = {_fmt(V)}  u = {_fmt(us[0])}")
        print(f"p+  = {_fmt(p_f[0])}")
        print(f"p-  = {_fmt(p_r[0])}")
        print(f"p+' = {_fmt(d_f[0])}")
        print(f"p-' = {_fmt(d_r[0])}")
        return EXIT_OK
    rows = [(V, float(u), float(a), float(b), float(c), float(d))
            for u, a, b, c, d in zip(us, p_f, p_r, d_f, d_r)]
    text = _csv_text(["V", "u", "p_plus", "p_minus", "dp_plus", "dp_minus"], rows)
    _emit(text, args.out)
    return EXIT_OK


def _emit(text, out):
    if out:
        path = Path(out)
        _ensure_dir(path.parent if str(path.parent) else ".")
        _write_text(path, text)
    else:
        sys.stdout.write(text)


def cmd_solve(args, cfg):
    V, h = _one(args.v, "v"), _one(args.h, "h")
    if not h > 0:
        raise UsageError(f"height must be positive, got {h}")
    if not V > 0:
        raise UsageError(f"speed must be positive, got {V}")
    sol = solve(Medium(V), h, cfg)
    print(f"regime = {sol.regime.value} (case {sol.regime.case})")
    print(f"h+ = {_fmt(sol.h_plus)}")
    print(f"h- = {_fmt(sol.h_minus)}")
    print(f"R  = {_fmt(sol.R)}")
    print(f"R~ = {_fmt(sol.R_reduced)}")
    out = _ensure_dir(args.out_dir)
    _write_text(out / "front_profile.csv", sol.body.front.to_csv())
    _write_text(out / "rear_profile.csv", sol.body.rear.to_csv())
    return EXIT_OK


def cmd_sweep(args, cfg):
    if any(v <= 0 for v in args.v) or any(h <= 0 for h in args.h):
        raise UsageError("sweep needs V > 0 and h > 0 everywhere")
    rows = sweep(args.v, args.h, cfg, workers=args.workers)
    _emit(sweep_csv(rows), args.out)
    bad = [r for r in rows if r.error]
    for r in bad:
        print(f"error at V={_fmt(r.V)} h={_fmt(r.h)}: {r.error}", file=sys.stderr)
    return EXIT_NUMERIC if bad else EXIT_OK


def cmd_boundaries(args, cfg):
    if any(v <= 0 for v in args.v):
        raise UsageError("boundaries need V > 0")
    if len(args.v) == 1:
        lo, mid, hi = regime_boundaries(args.v[0], cfg)
        print(f"V = {_fmt(args.v[0])}")
        print(f"u0+      = {_fmt(lo)}")
        print(f"u*       = {_fmt(mid)}")
        print(f"u* + u0- = {_fmt(hi)}")
        return EXIT_OK
    rows = [(V, *map(float, regime_boundaries(V, cfg))) for V in args.v]
    _emit(_csv_text(["V", "u0_plus", "u_star", "u_star_plus_u0_minus"], rows), args.out)
    return EXIT_OK


# ---------------------------------------------------------------- figures

FIG1_V = tuple(float(v) for v in np.round(np.geomspace(0.05, 25.0, 60), 12))
FIG2_V = (0.1, 0.2, 0.5, 1.0)
FIG3_V = (2.0, 3.0, 5.0)


def _boundary_column(args):
    V, cfg = args
    return regime_boundaries(V, cfg)


def _figure_curves(Vs, hs, cfg, workers):
    rows = sweep(Vs, hs, cfg, workers=workers)
    bad = [r for r in rows if r.error]
    if bad:
        raise ArithmeticError(f"figure sweep failed at V={bad[0].V}, h={bad[0].h}: {bad[0].error}")
    out = [(r.V, r.h, r.regime, r.R_reduced) for r in rows]
    out += [(math.inf, float(h), "Limit", float(newton_limit(h))) for h in hs]
    return out


def _curve_series(rows):
    series = []
    for V in dict.fromkeys(r[0] for r in rows):
        pts = [(r[1], r[3]) for r in rows if r[0] == V]
        label = "V = inf" if math.isinf(V) else f"V = {V:g}"
        series.append((label, [p[0] for p in pts], [p[1] for p in pts]))
    return series


def cmd_figures(args, cfg):
    out = _ensure_dir(args.out_dir)
    workers = args.workers if args.workers is not None else default_workers()
    want_csv = args.format in ("csv", "both")
    want_svg = args.format in ("svg", "both")

    jobs = [(V, cfg) for V in FIG1_V]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            bounds = list(pool.map(_boundary_column, jobs))
    else:
        bounds = [_boundary_column(j) for j in jobs]
    fig1 = [(V, float(a), float(b), float(c)) for V, (a, b, c) in zip(FIG1_V, bounds)]

    h2 = [round(0.05 * k, 12) for k in range(1, 71)]
    h3 = [round(0.05 * k, 12) for k in range(1, 121)]
    fig2 = _figure_curves(FIG2_V, h2, cfg, workers)
    fig3 = _figure_curves(FIG3_V, h3, cfg, workers)

    fig_header = ["V", "h", "regime", "R_reduced"]
    if want_csv:
        _write_text(out / "fig1.csv", _csv_text(["V", "u0_plus", "u_star", "u_star_plus_u0_minus"], fig1))
        _write_text(out / "fig2.csv", _csv_text(fig_header, fig2))
        _write_text(out / "fig3.csv", _csv_text(fig_header, fig3))
    if want_svg:
        Vs = [r[0] for r in fig1]
        s1 = [
            ("h = u0+", Vs, [r[1] for r in fig1]),
            ("h = u*", Vs, [r[2] for r in fig1]),
            ("h = u* + u0-", Vs, [r[3] for r in fig1]),
        ]
        _write_text(out / "fig1.svg", line_plot(s1, "V", "h", "Regime boundaries: height h versus velocity V"))
        _write_text(out / "fig2.svg", line_plot(_curve_series(fig2), "h", "R~", "Reduced resistance versus height"))
        _write_text(out / "fig3.svg", line_plot(_curve_series(fig3), "h", "R~", "Reduced resistance versus height"))
    print(f"wrote figures to {out} (a = {_fmt(GOLDEN_A)})")
    return EXIT_OK


# ---------------------------------------------------------------- verify


def _check(results, name, ok, detail):
    results.append(ok)
    print(f"CHECK {name} {'PASS' if ok else 'FAIL'} {detail}")


def cmd_verify(args, cfg):
    results = []
    rng = np.random.Generator(np.random.Philox(key=args.seed))
    us = np.array([0.0, 0.5, 1.0, 2.0, 10.0])

    zero = Medium(0.0)
    bal = np.abs(PressureSide(Side.FRONT, zero, cfg).eval(us) + PressureSide(Side.REAR, zero, cfg).eval(us))
    _check(results, "zero_speed_balance", bal.max() <= 1e-10, f"max={bal.max():.3e}")

    worst = 0.0
    for V in (0.1, 1.0, 5.0):
        for side in Side:
            ps = PressureSide(side, Medium(V), cfg)
            for u in (0.0, 1.0, 5.0):
                worst = max(worst, abs(ps.eval(u) - ps.eval_direct(u)))
    _check(results, "oracle_direct", worst <= 1e-8, f"max|eval-direct|={worst:.3e}")

    worst_p, worst_d = 0.0, 0.0
    ugrid = np.linspace(0.0, 20.0, 81)
    for V in (0.05, 0.5, 2.0, 10.0, 30.0):
        for side in Side:
            ps = PressureSide(side, Medium(V), cfg)
            ref = oracle.projected_pressure(side.sign, ugrid, V)
            dref = oracle.projected_pressure_deriv(side.sign, ugrid, V)
            scale = 1.0 + V * V
            worst_p = max(worst_p, float(np.max(np.abs(ps.eval(ugrid) - ref))) / scale)
            worst_d = max(worst_d, float(np.max(np.abs(ps.deriv(ugrid) - dref))) / scale)
    _check(results, "oracle_projection", worst_p <= 1e-10 and worst_d <= 1e-10,
           f"max rel|eval-ref|={worst_p:.3e} max rel|deriv-ref|={worst_d:.3e}")

    mc = oracle.McConfig(200_000, args.seed)
    zmax = 0.0
    for _ in range(4):
        V, u = float(rng.uniform(0.1, 3.0)), float(rng.uniform(0.0, 3.0))
        side = Side.FRONT if rng.uniform() < 0.5 else Side.REAR
        ps = PressureSide(side, Medium(V), cfg)
        est, se = oracle.mc_pressure(ps, u, mc)
        z = abs(est - ps.eval(u)) / se
        zmax = max(zmax, z)
        print(f"MC side={side.symbol} V={V:.6g} u={u:.6g} estimate={est:.17g} stderr={se:.17g}")
    _check(results, "oracle_monte_carlo", zmax <= 4.0, f"max z={zmax:.3f}")

    Vs = (0.1, 0.5, 1.0, 2.0, 5.0)
    grid = np.linspace(0.0, 20.0, 1001)[1:]
    sign_ok, c_worst, d_margin, unimodal, b_ok = True, 0.0, math.inf, True, True
    for V in Vs:
        m = Medium(V)
        fr, re_ = PressureSide(Side.FRONT, m, cfg), PressureSide(Side.REAR, m, cfg)
        pf, pr = fr.eval(grid), re_.eval(grid)
        sign_ok &= bool(np.all(pf >= 0) and np.all(pr <= 0))
        c_worst = max(c_worst, abs(fr.deriv(0.0)), abs(re_.deriv(0.0)))
        df, dr = fr.deriv(grid), re_.deriv(grid)
        d_margin = min(d_margin, float(np.min(dr - df)))
        sign_ok &= bool(np.all(dr <= 1e-12))
        for d in (df, dr):
            k = int(np.argmin(d))
            unimodal &= bool(np.all(np.diff(d[: k + 1]) < 0) and np.all(np.diff(d[k:]) > 0))
        for ps in (fr, re_):
            lim = ps.limit()
            d3, d4 = abs(ps.eval(1e3) - lim), abs(ps.eval(1e4) - lim)
            b_ok &= bool(d4 < d3 and 5.0 < d3 / max(d4, 1e-300) < 20.0)
    _check(results, "property_a_signs", sign_ok, "p+ >= 0, p- <= 0, p-' <= 0")
    _check(results, "property_b_limit", b_ok, "|p(u) - p(1e6)| decays like 1/u")
    _check(results, "property_c_zero_slope", c_worst <= 1e-8, f"max|p'(0)|={c_worst:.3e}")
    _check(results, "property_d_order", d_margin > 10 * cfg.abs_tol, f"min(p-' - p+')={d_margin:.3e}")
    _check(results, "property_e_unimodal", unimodal, "derivative decreases then increases")

    worst_cf, worst_scan, seen = 0.0, 0.0, set()
    for _ in range(12):
        V = float(np.exp(rng.uniform(math.log(0.05), math.log(5.0))))
        env = envelopes(Medium(V), cfg)
        lo, mid, hi = env.boundaries
        for h in (0.5 * lo, 0.5 * (lo + mid), 0.5 * (mid + hi), 1.5 * hi):
            sol = solve(Medium(V), h, cfg)
            seen.add(sol.regime)
            cf = closed_form_resistance(env, h, sol.regime, sol.h_plus)
            _, scan = oracle.scan_split(env.front, env.rear, h)
            worst_cf = max(worst_cf, abs(cf - sol.R))
            worst_scan = max(worst_scan, abs(scan - sol.R))
            if classify(env, h) is not sol.regime:
                seen.add(None)
    ok = worst_cf <= 1e-8 and worst_scan <= 1e-6 and len(seen) == 4
    _check(results, "regime_consistency", ok,
           f"closed_form={worst_cf:.3e} scan={worst_scan:.3e} regimes={len(seen)}")

    passed = sum(results)
    print(f"SUMMARY {passed}/{len(results)} checks passed")
    return EXIT_OK if all(results) else EXIT_CHECK


# ---------------------------------------------------------------- parser


def _ranged(text):
    try:
        return parse_range(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    p = argparse.ArgumentParser(prog="newtonres", description="Minimal resistance in a Gaussian medium.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-12, help="quadrature tolerance (abs and rel)")
    common.add_argument("--workers", type=int, default=None, help="worker processes (default: $NEWTONRES_WORKERS or CPU count)")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("pressure", parents=[common], help="pressures and derivatives at (u, V)")
    sp.add_argument("--v", type=_ranged, required=True)
    sp.add_argument("--u", type=_ranged, required=True, help="slope, list, or start:stop:step")
    sp.add_argument("--out", help="CSV path for ranges (default stdout)")
    sp.set_defaults(func=cmd_pressure)

    sp = sub.add_parser("solve", parents=[common], help="optimal body of height h at speed V")
    sp.add_argument("--v", type=_ranged, required=True)
    sp.add_argument("--h", type=_ranged, required=True)
    sp.add_argument("--out-dir", default=".")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("sweep", parents=[common], help="solve over a (V, h) grid, CSV out")
    sp.add_argument("--v", type=_ranged, required=True)
    sp.add_argument("--h", type=_ranged, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("boundaries", parents=[common], help="regime boundaries at speed V")
    sp.add_argument("--v", type=_ranged, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_boundaries)

    sp = sub.add_parser("figures", parents=[common], help="write fig1..fig3 as CSV and/or SVG")
    sp.add_argument("--out-dir", default="figures")
    sp.add_argument("--format", choices=("csv", "svg", "both"), default="both")
    sp.set_defaults(func=cmd_figures)

    sp = sub.add_parser("verify", parents=[common], help="run the oracle and property checks")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if not (args.tol > 0 and math.isfinite(args.tol)):
            raise UsageError("--tol must be positive")
        if args.workers is not None and args.workers < 1:
            raise UsageError("--workers must be at least 1")
        if getattr(args, "seed", 0) < 0:
            raise UsageError("--seed must be nonnegative")
        cfg = QuadratureConfig(abs_tol=args.tol, rel_tol=args.tol)
        return args.func(args, cfg)
    except (UsageError, DomainError, InvalidProfileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ArithmeticError, ValueError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
