"""Scalar special functions for the Gaussian pressure integrals.

The central object is

    l(z) = 1 + z**2/2 + sqrt(pi)/(2*sqrt(2)) * exp(z**2/2) * (3z + z**3) * (1 + erf(z/sqrt(2)))

which equals half the radial moment ``int_0^inf r**3 exp(-r**2/2 + z*r) dr``.
For ``z`` well below zero the closed form cancels catastrophically, so it is
rewritten through the scaled repeated integrals of erfc,

    exp(x**2) * i^n erfc(x),    x = -z/sqrt(2),

computed from a backward continued fraction that involves only positive terms.

All functions accept scalars or numpy arrays and return the same shape.
"""

import math

import numpy as np
from scipy import special

from .errors import DomainError

__all__ = [
    "erf",
    "erfc",
    "erfcx",
    "l",
    "l_prime",
    "l_scaled",
    "l_prime_scaled",
    "scaled_ierfc",
    "L_OVERFLOW_Z",
]

SQRT2 = math.sqrt(2.0)
SQRTPI = math.sqrt(math.pi)
_C = SQRTPI / (2.0 * SQRT2)

# Below this z the closed form of l is replaced by the continued fraction.
_Z_SWITCH = -2.0
_CF_TERMS = 96


def _check_finite(x):
    a = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(a)):
        raise DomainError("argument must be finite")
    return a


def _out(a):
    return float(a) if a.ndim == 0 else a


def erf(x):
    """Error function; relative error below 1e-15 on |x| <= 6."""
    return _out(special.erf(_check_finite(x)))


def erfc(x):
    """Complementary error function ``1 - erf(x)`` without cancellation."""
    return _out(special.erfc(_check_finite(x)))


def erfcx(x):
    """Scaled complementary error function ``exp(x**2) * erfc(x)``."""
    return _out(special.erfcx(_check_finite(x)))


def _ratios(x, n):
    """Ratios r_k = E_k/E_{k-1} for k = 1..n of the scaled repeated erfc integrals.

    Backward recurrence r_{k-1} = 1/(2x + 2k r_k), seeded with the fixed point of
    the recurrence at k = _CF_TERMS. Requires x >= sqrt(2) for 1e-16 convergence.
    """
    k = _CF_TERMS
    r = (np.sqrt(x * x + 2.0 * (k + 1)) - x) / (2.0 * (k + 1))
    out = [None] * (n + 1)
    for k in range(_CF_TERMS - 1, 0, -1):
        r = 1.0 / (2.0 * x + 2.0 * (k + 1) * r)
        if k <= n:
            out[k] = r
    return out[1:]


def scaled_ierfc(n, x):
    """``exp(x**2) * i^n erfc(x)`` for x >= sqrt(2) (n >= 0)."""
    x = np.asarray(x, dtype=float)
    e = special.erfcx(x)
    for r in _ratios(x, n):
        e = e * r
    return _out(e)


def _l_terms(z, s):
    """Return exp(-s**2/2) * (l(z), l'(z)) evaluated stably."""
    z = np.asarray(z, dtype=float)
    val = np.empty_like(z)
    der = np.empty_like(z)
    far = z < _Z_SWITCH
    near = ~far

    zn = z[near]
    z2 = zn * zn
    damp = math.exp(-0.5 * s * s)
    # exp((z^2 - s^2)/2) * erfc(-z/sqrt2); combined exponent keeps it finite when |z| <= s
    with np.errstate(over="ignore"):
        g = np.exp(0.5 * (z2 - s * s)) * special.erfc(-zn / SQRT2)
        val[near] = damp * (1.0 + 0.5 * z2) + _C * (3.0 * zn + zn * z2) * g
        der[near] = damp * 0.5 * (5.0 * zn + zn * z2) + _C * (3.0 + 6.0 * z2 + z2 * z2) * g

    if np.any(far):
        x = -z[far] / SQRT2
        e = special.erfcx(x)
        r1, r2, r3, r4 = _ratios(x, 4)
        e3 = e * r1 * r2 * r3
        e4 = e3 * r4
        val[far] = damp * 6.0 * SQRTPI * e3
        der[far] = damp * 24.0 * SQRT2 * SQRTPI * e4
    return val, der


def _log_l_large(z):
    # dominant part of log l(z) for large positive z
    return 0.5 * z * z + math.log(2.0 * _C * (3.0 * z + z ** 3))


def _overflow_threshold():
    lo, hi = 30.0, 40.0
    big = math.log(np.finfo(float).max)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _log_l_large(mid) < big:
            lo = mid
        else:
            hi = mid
    return lo


#: Largest z at which l(z) is still representable (about 37.4).
L_OVERFLOW_Z = math.floor(_overflow_threshold() * 1000.0) / 1000.0


def _check_range(z):
    if np.any(z > L_OVERFLOW_Z):
        raise OverflowError(
            f"l(z) overflows double precision for z > {L_OVERFLOW_Z}"
        )


def l(z):
    """Half radial moment ``1/2 int_0^inf r^3 exp(-r^2/2 + z r) dr``."""
    z = _check_finite(z)
    _check_range(z)
    return _out(_l_terms(z, 0.0)[0])


def l_prime(z):
    """Derivative of :func:`l`."""
    z = _check_finite(z)
    _check_range(z)
    d = _l_terms(z, 0.0)[1]
    if not np.all(np.isfinite(d)):
        raise OverflowError(f"l'(z) overflows double precision near z = {L_OVERFLOW_Z}")
    return _out(d)


def l_scaled(z, s):
    """``exp(-s**2/2) * l(z)``, finite for any |z| <= s."""
    z = _check_finite(z)
    return _out(_l_terms(z, float(s))[0])


def l_prime_scaled(z, s):
    """``exp(-s**2/2) * l'(z)``, finite for any |z| <= s."""
    z = _check_finite(z)
    return _out(_l_terms(z, float(s))[1])
