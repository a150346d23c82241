"""Minimal-resistance bodies of fixed height in a Gaussian medium.

The problem separates: each side, given its own height, is solved by its
convexified pressure (a flat segment followed by the critical slope, or a
single straight segment). The total height is then divided between the sides
by minimising ``pbar_+(z) + pbar_-(h - z)`` over ``0 <= z <= h``. Comparing
``h`` with ``u0_+``, ``u*`` and ``u* + u0_-`` gives four shape families.
"""

import csv
import enum
import functools
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .envelope import EnvelopeData, Threshold, critical_slope, pbar, pbar_deriv, u_star
from .errors import DomainError, InconsistentPressureError
from .pressure import Medium, PressureSide, Side
from .quadrature import QuadratureConfig
from .shapes import Body, ConvexProfile, body_resistance

__all__ = [
    "Regime",
    "Envelopes",
    "OptimalBody",
    "SweepRow",
    "GOLDEN_A",
    "envelopes",
    "solve_one_side",
    "classify",
    "split_height",
    "closed_form_resistance",
    "solve",
    "regime_boundaries",
    "sweep",
    "sweep_csv",
    "newton_limit",
    "slow_limit",
    "WORKERS_ENV",
]

#: sqrt of the golden ratio: the critical slope and the first two regime
#: boundaries as V -> 0.
GOLDEN_A = math.sqrt((1.0 + math.sqrt(5.0)) / 2.0)

#: Environment variable holding the worker count for sweeps.
WORKERS_ENV = "NEWTONRES_WORKERS"


class Regime(enum.Enum):
    TRAPEZIUM = "Trapezium"
    TRIANGLE = "Triangle"
    TRIANGLE_TRAPEZIUM = "TriangleTrapezium"
    DOUBLE_TRIANGLE = "DoubleTriangle"

    @property
    def case(self):
        return list(Regime).index(self) + 1


@dataclass(frozen=True)
class Envelopes:
    """Everything about a medium that does not depend on the height."""

    medium: Medium
    front: EnvelopeData
    rear: EnvelopeData
    threshold: Threshold

    @property
    def boundaries(self):
        us = self.threshold.u_star
        return (self.front.u0, us, us + self.rear.u0)


@functools.lru_cache(maxsize=512)
def envelopes(medium, quad=QuadratureConfig()):
    """Envelope data of both sides and ``u*`` (cached per medium and config)."""
    if medium.V <= 0.0:
        raise DomainError("the optimisation needs V > 0")
    fr = critical_slope(PressureSide(Side.FRONT, medium, quad))
    re = critical_slope(PressureSide(Side.REAR, medium, quad))
    return Envelopes(medium, fr, re, u_star(fr, re))


def solve_one_side(data, h):
    """Optimal profile of one side with height ``h``.

    Below the critical slope the profile is flat and then rises at slope
    ``u0``; otherwise it is one straight segment. Its resistance is ``pbar(h)``.
    """
    h = float(h)
    if not h >= 0.0:
        raise DomainError(f"height must be nonnegative, got {h!r}")
    if h == 0.0:
        return ConvexProfile.flat(0.0)
    if h >= data.u0:
        return ConvexProfile([0.0, 1.0], [-h, 0.0])
    t0 = 1.0 - h / data.u0
    return ConvexProfile([0.0, t0, 1.0], [-h, -h, 0.0])


def classify(env, h):
    """Regime of height ``h``; a tie with a boundary goes to the lower case."""
    lower, middle, upper = env.boundaries
    if h <= lower:
        return Regime.TRAPEZIUM
    if h <= middle:
        return Regime.TRIANGLE
    if h <= upper:
        return Regime.TRIANGLE_TRAPEZIUM
    return Regime.DOUBLE_TRIANGLE


def _env_of(front, rear, ustar):
    return Envelopes(front.medium, front, rear, ustar)


def split_height(front, rear, ustar, h):
    """Optimal ``(h_plus, h_minus, regime)`` for total height ``h``.

    In the first two regimes the whole height goes to the front. Otherwise the
    split solves ``pbar_+'(z) = pbar_-'(h - z)``; the left side of that equation
    minus the right is increasing in ``z``, so the root is bracketed by
    ``[u0_+, h]``.
    """
    h = float(h)
    if not h > 0.0:
        raise DomainError(f"height must be positive, got {h!r}")
    regime = classify(_env_of(front, rear, ustar), h)
    if regime in (Regime.TRAPEZIUM, Regime.TRIANGLE):
        return h, 0.0, regime

    def phi(z):
        return pbar_deriv(front, z) - pbar_deriv(rear, h - z)

    lo, hi = front.u0, h
    f_lo, f_hi = phi(lo), phi(hi)
    if not (f_lo < 0.0 < f_hi):
        if f_hi == 0.0:
            return h, 0.0, regime
        raise InconsistentPressureError(
            f"height split is not bracketed on [{lo}, {hi}]: phi = ({f_lo}, {f_hi})"
        )
    z = optimize.brentq(phi, lo, hi, xtol=1e-13, rtol=4 * np.finfo(float).eps)
    return z, h - z, regime


def closed_form_resistance(env, h, regime, h_plus=None):
    """Minimal resistance from the explicit formula of each regime."""
    fr, re = env.front, env.rear
    if regime is Regime.TRAPEZIUM:
        return fr.p0 - fr.B * h + re.p0
    if regime is Regime.TRIANGLE:
        return fr.side.eval(h) + re.p0
    us = env.threshold.u_star
    if regime is Regime.TRIANGLE_TRAPEZIUM:
        return fr.side.eval(us) + re.p0 - re.B * (h - us)
    if h_plus is None:
        raise ValueError("the double-triangle formula needs the front height")
    return fr.side.eval(h_plus) + re.side.eval(h - h_plus)


@dataclass(frozen=True)
class OptimalBody:
    V: float
    h: float
    regime: Regime
    h_plus: float
    h_minus: float
    body: Body
    R: float
    R_reduced: float

    @property
    def profiles(self):
        return self.body.front, self.body.rear


def solve(medium, h, cfg=QuadratureConfig()):
    """Optimal body of height ``h`` moving at ``medium.V``."""
    if not medium.V > 0.0:
        raise DomainError("the optimisation needs V > 0")
    h = float(h)
    if not (math.isfinite(h) and h > 0.0):
        raise DomainError(f"height must be positive, got {h!r}")
    env = envelopes(medium, cfg)
    h_plus, h_minus, regime = split_height(env.front, env.rear, env.threshold, h)
    body = Body(solve_one_side(env.front, h_plus), solve_one_side(env.rear, h_minus))
    R = pbar(env.front, h_plus) + pbar(env.rear, h_minus)
    return OptimalBody(
        V=medium.V,
        h=h,
        regime=regime,
        h_plus=h_plus,
        h_minus=h_minus,
        body=body,
        R=float(R),
        R_reduced=float(R) / medium.V ** 2,
    )


def regime_boundaries(V, cfg=QuadratureConfig()):
    """The three curves ``(u0_+, u*, u* + u0_-)`` separating the regimes at speed ``V``."""
    return envelopes(Medium(V), cfg).boundaries


def newton_limit(h):
    """Reduced resistance ``R/V**2`` as ``V -> inf``."""
    h = np.asarray(h, dtype=float)
    out = np.where(h <= 1.0, 1.0 - 0.5 * h, 1.0 / (1.0 + h * h))
    return float(out) if out.ndim == 0 else out


def slow_limit(h):
    """Limit of ``R / (sqrt(2/pi) V)`` as ``V -> 0``.

    Equals ``2 - h/a**5`` up to ``h = 2a`` and ``4/sqrt(4 + h**2)`` beyond,
    with ``a = GOLDEN_A``.
    """
    h = np.asarray(h, dtype=float)
    a = GOLDEN_A
    out = np.where(h <= 2.0 * a, 2.0 - h / a ** 5, 4.0 / np.sqrt(4.0 + h * h))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SweepRow:
    V: float
    h: float
    regime: str
    h_plus: float
    h_minus: float
    R: float
    R_reduced: float
    error: str = ""


def _sweep_column(args):
    V, hs, cfg = args
    rows = []
    for h in hs:
        try:
            sol = solve(Medium(V), h, cfg)
            rows.append(SweepRow(V, h, sol.regime.value, sol.h_plus, sol.h_minus, sol.R, sol.R_reduced))
        except (ArithmeticError, ValueError) as exc:
            nan = float("nan")
            rows.append(SweepRow(V, h, "Error", nan, nan, nan, nan, f"{type(exc).__name__}: {exc}"))
    return rows


def default_workers():
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def sweep(V_values, h_values, cfg=QuadratureConfig(), workers=None):
    """Solve every ``(V, h)`` pair; rows come out in input order (V major).

    A cell that fails is recorded with regime ``"Error"`` and the message in
    ``error``; the sweep carries on.
    """
    V_values = [float(v) for v in V_values]
    h_values = [float(h) for h in h_values]
    if not V_values or not h_values:
        raise ValueError("sweep ranges must be nonempty")
    workers = default_workers() if workers is None else int(workers)
    jobs = [(V, h_values, cfg) for V in V_values]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            columns = list(pool.map(_sweep_column, jobs))
    else:
        columns = [_sweep_column(job) for job in jobs]
    return [row for col in columns for row in col]


SWEEP_HEADER = ["V", "h", "regime", "h_plus", "h_minus", "R", "R_reduced"]


def sweep_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow([
            f"{r.V:.17g}", f"{r.h:.17g}", r.regime, f"{r.h_plus:.17g}",
            f"{r.h_minus:.17g}", f"{r.R:.17g}", f"{r.R_reduced:.17g}",
        ])
    return buf.getvalue()
