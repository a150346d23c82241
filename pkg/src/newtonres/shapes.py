"""Piecewise-linear convex profiles and the resistance functional.

A side of the body is described by its generatrix ``f`` on ``[0, 1]``:
convex, nondecreasing, nonpositive, with ``f(0) = -h``. For a piecewise-linear
profile the resistance ``int_0^1 p(f'(t)) dt`` is an exact finite sum.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import InvalidProfileError
from .pressure import PressureSide, Side
from .quadrature import QuadratureConfig

__all__ = ["ConvexProfile", "Body", "resistance_functional", "body_resistance", "CONVEXITY_TOL"]

#: Slack allowed on slope monotonicity and sign to absorb rounding.
CONVEXITY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ConvexProfile:
    """Knots ``(t_i, f_i)`` with ``t_0 = 0`` and ``t_n = 1``."""

    t: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        t = np.array(self.t, dtype=float)
        f = np.array(self.f, dtype=float)
        if t.ndim != 1 or t.shape != f.shape or t.size < 2:
            raise InvalidProfileError("need at least two knots with matching t and f")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(f))):
            raise InvalidProfileError("knots must be finite")
        if t[0] != 0.0 or t[-1] != 1.0:
            raise InvalidProfileError("knots must span t = 0 to t = 1")
        if np.any(np.diff(t) <= 0.0):
            raise InvalidProfileError("knot abscissae must be strictly increasing")
        slopes = np.diff(f) / np.diff(t)
        scale = 1.0 + np.abs(slopes)
        if np.any(slopes < -CONVEXITY_TOL * scale):
            raise InvalidProfileError("profile must be nondecreasing")
        if np.any(np.diff(slopes) < -CONVEXITY_TOL * np.maximum(scale[1:], scale[:-1])):
            raise InvalidProfileError("profile must be convex (nondecreasing slopes)")
        if np.any(f > CONVEXITY_TOL * (1.0 + abs(f[0]))):
            raise InvalidProfileError("profile must be nonpositive")
        t.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "f", f)

    @classmethod
    def flat(cls, h=0.0):
        return cls([0.0, 1.0], [-h, -h])

    @property
    def height(self):
        return -float(self.f[0])

    @property
    def slopes(self):
        return np.maximum(np.diff(self.f) / np.diff(self.t), 0.0)

    @property
    def widths(self):
        return np.diff(self.t)

    def __call__(self, t):
        return np.interp(t, self.t, self.f)

    def refine(self, t_new):
        """Insert collinear knots at ``t_new`` (the shape is unchanged)."""
        t = np.union1d(self.t, np.asarray(t_new, dtype=float))
        return ConvexProfile(t, self(t))

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "f"])
        for t, f in zip(self.t, self.f):
            w.writerow([f"{t:.17g}", f"{f:.17g}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip() for c in rows[0]] != ["t", "f"]:
            raise InvalidProfileError("profile CSV must start with header 't,f'")
        data = [(float(a), float(b)) for a, b in rows[1:] if a.strip()]
        return cls([a for a, _ in data], [b for _, b in data])


@dataclass(frozen=True, eq=False)
class Body:
    """Front profile ``f+`` (faces the flow) and rear profile ``f-``."""

    front: ConvexProfile
    rear: ConvexProfile

    @property
    def h(self):
        return self.front.height + self.rear.height


def resistance_functional(side, profile):
    """``int_0^1 p(f'(t)) dt`` for a piecewise-linear profile, as an exact sum."""
    if not isinstance(profile, ConvexProfile):
        profile = ConvexProfile(*profile)
    slopes = profile.slopes
    widths = profile.widths
    # equal slopes share one pressure value, so collinear knots change nothing
    uniq, inv = np.unique(slopes, return_inverse=True)
    p = np.atleast_1d(side.eval(uniq))
    return float(np.bincount(inv, weights=widths, minlength=uniq.size) @ p)


def body_resistance(body, medium, quad=None):
    """Axial resistance ``R+(f+) + R-(f-)`` of the body (no unit-ball factor)."""
    quad = quad or QuadratureConfig()
    r_front = resistance_functional(PressureSide(Side.FRONT, medium, quad), body.front)
    r_rear = resistance_functional(PressureSide(Side.REAR, medium, quad), body.rear)
    return r_front + r_rear
