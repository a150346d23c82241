"""Pressure of a Gaussian particle flux on a facet of slope ``u``.

For the front (+) and rear (-) sides of the body,

    p(u, V) = +-(exp(-V**2/2)/pi) * int_{-pi/2}^{pi/2} cos(t)**2 * l(+-z(t)) dt,
    z(t) = V * (cos t - u sin t) / sqrt(1 + u**2),

where ``V`` is the body speed measured in thermal standard deviations. The
particle number density is fixed to one. :meth:`PressureSide.eval_direct`
integrates the momentum-transfer integrand over the velocity plane instead
and is kept as a slow independent check.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as sp_integrate

from . import specfun
from .errors import AccuracyError, DomainError
from .quadrature import QuadratureConfig, integrate_batch

__all__ = ["Side", "Medium", "PressureSide", "QuadratureConfig", "V_MAX", "U_MAX"]

#: Largest supported speed; l(z) overflows slightly above this.
V_MAX = 37.0
#: Slopes beyond this are clamped; the pressure is at its limit to ~1e-6 V.
U_MAX = 1e6

# Truncation radius of the velocity plane for the direct integral, in std devs.
DIRECT_RADIUS = 8.0


class Side(enum.Enum):
    FRONT = 1
    REAR = -1

    @property
    def sign(self):
        return self.value

    @property
    def symbol(self):
        return "+" if self is Side.FRONT else "-"


@dataclass(frozen=True)
class Medium:
    """Gaussian gas of unit variance streaming at speed ``V`` onto the body."""

    V: float

    def __post_init__(self):
        V = float(self.V)
        if not math.isfinite(V) or V < 0.0 or V > V_MAX:
            raise DomainError(f"speed V must lie in [0, {V_MAX}], got {self.V!r}")
        object.__setattr__(self, "V", V)


def _as_slopes(u):
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)) or np.any(u < 0.0):
        raise DomainError("slope u must be finite and nonnegative")
    return np.minimum(u, U_MAX)


@dataclass(frozen=True)
class PressureSide:
    """Pressure function of one side of the body at a fixed medium.

    ``eval``, ``deriv`` and ``eval_direct`` accept a scalar slope or an
    array of slopes; arrays are integrated as one batch.
    """

    side: Side
    medium: Medium
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)

    @property
    def sign(self):
        return self.side.sign

    @property
    def V(self):
        return self.medium.V

    def _integrate(self, u, derivative):
        u = _as_slopes(u)
        flat = np.atleast_1d(u).ravel()
        V = self.V
        s = self.sign
        w = 1.0 / np.sqrt(1.0 + flat * flat)
        uu = flat[:, None]
        ww = w[:, None]

        if derivative:
            def f(t, k):
                c, sn = np.cos(t), np.sin(t)
                z = s * V * (c - uu[k[:, 0]] * sn) * ww[k[:, 0]]
                dz = -V * (sn + uu[k[:, 0]] * c) * ww[k[:, 0]] ** 3
                return c * c * specfun.l_prime_scaled(z, V) * dz
            scale = 1.0 / math.pi
        else:
            def f(t, k):
                c = np.cos(t)
                z = s * V * (c - uu[k[:, 0]] * np.sin(t)) * ww[k[:, 0]]
                return c * c * specfun.l_scaled(z, V)
            scale = s / math.pi

        values, _ = integrate_batch(
            f, flat.size, -0.5 * math.pi, 0.5 * math.pi, self.quad, relative_to_abs=derivative
        )
        out = scale * values
        return float(out[0]) if u.ndim == 0 else out.reshape(u.shape)

    def eval(self, u):
        """Pressure p(u); nonnegative on the front side, nonpositive on the rear."""
        return self._integrate(u, derivative=False)

    def deriv(self, u):
        """Slope derivative dp/du, by differentiating under the integral sign."""
        u_arr = np.asarray(u, dtype=float)
        d = self._integrate(u, derivative=True)
        # the clamp makes p constant beyond U_MAX
        if np.any(u_arr > U_MAX):
            d = np.where(u_arr > U_MAX, 0.0, d)
            d = float(d) if u_arr.ndim == 0 else d
        return d

    def limit(self):
        """Large-slope limit of p, taken at the clamp slope."""
        return self.eval(U_MAX)

    def eval_direct(self, u, abs_tol=1e-11):
        """Pressure from the plain velocity-plane integral of the flux.

        Integrates ``+-(v . n)_-**2 * rho(v)`` over the disc of radius 8 around
        the stream velocity ``(0, -V)`` with nested adaptive quadrature.
        Slow; meant as an oracle.
        """
        u = _as_slopes(u)
        if u.ndim:
            return np.array([self.eval_direct(x, abs_tol) for x in u.ravel()]).reshape(u.shape)
        return self._direct_scalar(float(u), abs_tol)

    def _direct_scalar(self, u, abs_tol):
        V = self.V
        s = self.sign
        R = DIRECT_RADIUS
        norm = 1.0 / (1.0 + u * u)
        inv2pi = 1.0 / (2.0 * math.pi)

        def inner(v1):
            half = math.sqrt(max(R * R - v1 * v1, 0.0))
            lo, hi = -V - half, -V + half
            # front: v1*u + v2 < 0; rear: v1*u - v2 < 0
            if s > 0:
                hi = min(hi, -u * v1)
            else:
                lo = max(lo, u * v1)
            if hi <= lo:
                return 0.0

            def g(v2):
                dot = v1 * u + s * v2
                return dot * dot * norm * math.exp(-0.5 * (v1 * v1 + (v2 + V) ** 2)) * inv2pi

            val, _ = sp_integrate.quad(g, lo, hi, epsabs=abs_tol / (4 * R), epsrel=1e-12, limit=200)
            return val

        # corners of the integration region where the cut line meets the disc
        a = 1.0 + u * u
        b = -2.0 * s * u * V
        c = V * V - R * R
        disc = b * b - 4.0 * a * c
        points = []
        if disc > 0.0:
            r = math.sqrt(disc)
            points = [x for x in ((-b - r) / (2 * a), (-b + r) / (2 * a)) if -R < x < R]
        val, err = sp_integrate.quad(
            inner, -R, R, points=points or None, epsabs=abs_tol, epsrel=1e-12, limit=200
        )
        if not err <= max(10 * abs_tol, 1e-11 * abs(val)):
            raise AccuracyError(
                f"direct pressure integral error {err:.3e} exceeds tolerance",
                achieved=err,
                requested=abs_tol,
            )
        return s * val


def front(V, quad=None):
    """Front-side pressure function at speed ``V``."""
    return PressureSide(Side.FRONT, Medium(V), quad or QuadratureConfig())


def rear(V, quad=None):
    """Rear-side pressure function at speed ``V``."""
    return PressureSide(Side.REAR, Medium(V), quad or QuadratureConfig())
