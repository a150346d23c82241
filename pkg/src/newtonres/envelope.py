"""Convexified pressure of one side and the cross-side threshold slope.

The pressure p(u) of either side is concave on ``[0, ubar]`` and convex
afterwards. Its lower convex envelope replaces the initial arc by the
tangent line from ``(0, p(0))``:

    pbar(u) = p(0) - B*u   for u <= u0,
    pbar(u) = p(u)         for u >= u0,

where ``u0`` maximises ``(p(0) - p(u))/u`` and ``B = -p'(u0)``.
"""

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import DegenerateMediumError, InconsistentPressureError
from .pressure import PressureSide, Side

__all__ = ["EnvelopeData", "Threshold", "critical_slope", "pbar", "pbar_deriv", "u_star"]

_SCAN = np.geomspace(1e-3, 1e3, 241)
_U_STAR_CAP = 1e4


@dataclass(frozen=True)
class EnvelopeData:
    side: PressureSide
    u0: float
    B: float
    ubar: float
    p0: float
    p_u0: float

    @property
    def medium(self):
        return self.side.medium


@dataclass(frozen=True)
class Threshold:
    u_star: float
    residual: float


def _noise(side, p):
    q = side.quad
    return 10.0 * np.maximum(q.abs_tol, q.rel_tol * np.abs(p))


def _check_unimodal(values, noise, what):
    """Raise unless ``values`` rises then falls, ignoring steps below ``noise``."""
    d = np.diff(values)
    noise = np.broadcast_to(noise, values.shape)
    noise = np.maximum(noise[1:], noise[:-1])
    sig = np.sign(np.where(np.abs(d) > noise, d, 0.0))
    sig = sig[sig != 0]
    changes = np.count_nonzero(np.diff(sig))
    if changes > 1 or (changes == 1 and sig[0] < 0):
        raise InconsistentPressureError(f"{what} is not unimodal on the scan grid")


def critical_slope(side):
    """Locate u0, B and ubar for one side.

    ``u0`` is bracketed by a scan of ``g(u) = (p(0) - p(u))/u`` and refined as
    the root of the stationarity condition ``p(0) - p(u) + u p'(u) = 0``.
    """
    if side.V == 0.0:
        raise DegenerateMediumError("at V = 0 the pressure is constant; no critical slope exists")

    p0 = side.eval(0.0)
    pu = side.eval(_SCAN)
    g = (p0 - pu) / _SCAN
    _check_unimodal(g, _noise(side, pu) / _SCAN, "(p(0) - p(u))/u")
    k = int(np.argmax(g))
    if k == 0 or k == _SCAN.size - 1:
        raise InconsistentPressureError("critical slope lies outside the scanned range")

    def stationarity(u):
        return p0 - side.eval(u) + u * side.deriv(u)

    u0 = optimize.brentq(stationarity, _SCAN[k - 1], _SCAN[k + 1], xtol=1e-13, rtol=4 * np.finfo(float).eps)
    p_u0 = side.eval(u0)
    B = (p0 - p_u0) / u0

    dp = side.deriv(_SCAN)
    j = int(np.argmin(dp))
    lo, hi = _SCAN[max(j - 1, 0)], _SCAN[min(j + 1, _SCAN.size - 1)]
    res = optimize.minimize_scalar(side.deriv, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    return EnvelopeData(side=side, u0=float(u0), B=float(B), ubar=float(res.x), p0=float(p0), p_u0=float(p_u0))


def pbar(data, u):
    """Convexified pressure at slope(s) ``u``."""
    u = np.asarray(u, dtype=float)
    out = data.p0 - data.B * u
    right = u > data.u0
    if right.any():
        out = np.where(right, 0.0, out)
        out[right] = data.side.eval(u[right])
    return float(out) if out.ndim == 0 else out


def pbar_deriv(data, u):
    """Derivative of :func:`pbar`; constant ``-B`` up to ``u0``."""
    u = np.asarray(u, dtype=float)
    out = np.full(u.shape, -data.B)
    right = u > data.u0
    if right.any():
        out[right] = data.side.deriv(u[right])
    return float(out) if out.ndim == 0 else out


def u_star(front, rear):
    """Slope at which the front envelope derivative reaches ``-B`` of the rear."""
    if front.side.side is not Side.FRONT or rear.side.side is not Side.REAR:
        raise ValueError("u_star expects (front, rear) envelope data")
    margin = float(_noise(front.side, front.p0)) / front.u0
    if not front.B - rear.B > margin:
        raise InconsistentPressureError(
            f"front envelope slope B+ = {front.B!r} does not exceed rear B- = {rear.B!r}"
        )

    def F(u):
        return pbar_deriv(front, u) + rear.B

    lo = front.u0
    hi = 2.0 * lo
    while F(hi) <= 0.0:
        lo, hi = hi, 2.0 * hi
        if hi > _U_STAR_CAP:
            raise InconsistentPressureError("front pressure derivative never reaches -B-")
    root = optimize.brentq(F, lo, hi, xtol=1e-13, rtol=4 * np.finfo(float).eps)
    return Threshold(u_star=float(root), residual=float(F(root)))
