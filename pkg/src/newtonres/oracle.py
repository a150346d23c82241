"""Brute-force checks that share no code path with the solver.

* :func:`mc_pressure` samples particle velocities and averages the momentum
  transferred to a facet. Sample ``i`` always uses the same Philox counter
  block, so the estimate does not depend on chunking.
* :func:`projected_pressure` uses that the normal velocity component on a
  facet is itself Gaussian, which gives the pressure in closed form.
* :func:`scan_split` minimises the split objective on a uniform grid.
* :func:`perturbation_gaps` compares an optimal body with random admissible
  competitors of the same height.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .envelope import pbar
from .optimizer import envelopes, solve_one_side
from .pressure import U_MAX, Medium, PressureSide, Side
from .quadrature import QuadratureConfig
from .shapes import ConvexProfile

__all__ = [
    "McConfig",
    "mc_pressure",
    "normal_pairs",
    "projected_pressure",
    "projected_pressure_deriv",
    "scan_split",
    "lower_hull",
    "perturb_profile",
    "random_profile",
    "perturbation_gaps",
]

_MASK64 = (1 << 64) - 1
_CHUNK = 1 << 18


@dataclass(frozen=True)
class McConfig:
    n_samples: int = 1_000_000
    seed: int = 0

    def __post_init__(self):
        if int(self.n_samples) < 10_000:
            raise ValueError("n_samples must be at least 1e4")
        if not 0 <= int(self.seed) <= _MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def normal_pairs(seed, start, count):
    """Standard normal pairs for samples ``start .. start+count-1``.

    Each sample consumes two 64-bit words of the Philox stream keyed by
    ``seed`` (Box-Muller on two 53-bit uniforms); a counter block holds two
    samples, so any sample range is addressable directly.
    """
    block, skip = divmod(int(start), 2)
    words = 2 * (count + skip)
    bitgen = np.random.Philox(key=int(seed), counter=block)
    raw = bitgen.random_raw(words)[2 * skip:]
    u = ((raw >> np.uint64(11)).astype(float) + 0.5) * 2.0 ** -53
    u1, u2 = u[0::2], u[1::2]
    r = np.sqrt(-2.0 * np.log(u1))
    ang = 2.0 * math.pi * u2
    return r * np.cos(ang), r * np.sin(ang)


def mc_pressure(side, u, mc=McConfig(), chunk=_CHUNK):
    """Monte Carlo pressure on a facet of slope ``u``: ``(estimate, stderr)``."""
    u = min(float(u), U_MAX)
    if not u >= 0.0:
        raise ValueError("slope u must be nonnegative")
    s = side.sign
    V = side.V
    norm = 1.0 / math.sqrt(1.0 + u * u)
    n = int(mc.n_samples)
    vals = np.empty(n)
    for start in range(0, n, chunk):
        m = min(chunk, n - start)
        x1, x2 = normal_pairs(mc.seed, start, m)
        dot = (x1 * u + s * (x2 - V)) * norm
        vals[start:start + m] = s * np.minimum(dot, 0.0) ** 2
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(n))


def _half_moment(m):
    # E[(X)_+**2] for X ~ N(m, 1)
    cdf = 0.5 * special.erfc(-m / math.sqrt(2.0))
    pdf = np.exp(-0.5 * m * m) / math.sqrt(2.0 * math.pi)
    return (1.0 + m * m) * cdf + m * pdf, 2.0 * (m * cdf + pdf)


def projected_pressure(sign, u, V):
    """Pressure from the law of the normal velocity component.

    On a facet of slope ``u`` the component ``v . n`` is normal with mean
    ``-sign * V / sqrt(1 + u**2)`` and unit variance, so the pressure is a
    one-dimensional Gaussian moment.
    """
    u = np.asarray(u, dtype=float)
    m = V / np.sqrt(1.0 + u * u)
    val, _ = _half_moment(sign * m)
    return sign * val


def projected_pressure_deriv(sign, u, V):
    """Slope derivative of :func:`projected_pressure`."""
    u = np.asarray(u, dtype=float)
    m = V / np.sqrt(1.0 + u * u)
    dm = -V * u / (1.0 + u * u) ** 1.5
    _, dval = _half_moment(sign * m)
    return dval * dm


def scan_split(front, rear, h, grid_n=10_000):
    """Grid minimum of ``pbar_+(z) + pbar_-(h - z)`` over ``[0, h]``: ``(z_best, value)``."""
    if grid_n < 1000:
        raise ValueError("grid_n must be at least 1000")
    z = np.linspace(0.0, h, int(grid_n))
    values = pbar(front, z) + pbar(rear, h - z)
    k = int(np.argmin(values))
    return float(z[k]), float(values[k])


def lower_hull(t, f):
    """Vertices of the lower convex hull of points sorted by ``t``."""
    keep = []
    for i in range(len(t)):
        while len(keep) >= 2:
            a, b = keep[-2], keep[-1]
            cross = (t[b] - t[a]) * (f[i] - f[a]) - (f[b] - f[a]) * (t[i] - t[a])
            if cross <= 0.0:
                keep.pop()
            else:
                break
        keep.append(i)
    return np.asarray(t)[keep], np.asarray(f)[keep]


def _admissible(t, f, h):
    """Convexify, make nondecreasing, and rescale so that f(0) = -h."""
    f = np.minimum(f, 0.0)
    t, f = lower_hull(t, f)
    f = np.maximum(f, f[0])
    if h == 0.0:
        return ConvexProfile.flat(0.0)
    if f[0] >= 0.0:
        return ConvexProfile([0.0, 1.0], [-h, 0.0])
    return ConvexProfile(t, f * (h / -f[0]))


def perturb_profile(profile, rng, scale=0.1, n_extra=6):
    """Random admissible profile near ``profile`` with the same height."""
    h = profile.height
    t = np.union1d(profile.t, rng.uniform(0.0, 1.0, n_extra))
    t = t[(t > 0.0) & (t < 1.0)]
    t = np.concatenate([[0.0], t, [1.0]])
    f = profile(t) + rng.uniform(-scale, scale, t.size) * max(h, 1e-3)
    f[0] = profile.f[0]
    return _admissible(t, f, h)


def random_profile(h, rng, n_knots=8):
    """Random admissible profile of height ``h`` with a rise of at most ``h``."""
    t = np.concatenate([[0.0], np.sort(rng.uniform(0.0, 1.0, n_knots - 2)), [1.0]])
    slopes = np.sort(rng.exponential(1.0, n_knots - 1))
    rise = np.concatenate([[0.0], np.cumsum(slopes * np.diff(t))])
    if rise[-1] > 0.0:
        rise *= h * rng.uniform(0.3, 1.0) / rise[-1]
    return _admissible(t, -h + rise, h)


def _resistances(side, profiles):
    slopes = np.concatenate([p.slopes for p in profiles])
    widths = np.concatenate([p.widths for p in profiles])
    owner = np.repeat(np.arange(len(profiles)), [p.widths.size for p in profiles])
    uniq, inv = np.unique(slopes, return_inverse=True)
    p = np.atleast_1d(side.eval(uniq))
    return np.bincount(owner, weights=widths * p[inv], minlength=len(profiles))


def perturbation_gaps(opt, n=1000, seed=0, cfg=QuadratureConfig()):
    """Resistance of ``n`` random admissible bodies of height ``opt.h`` minus ``opt.R``.

    Half the competitors keep the optimal height split and perturb the
    optimal profiles; the rest draw a new split and fresh random profiles
    (or perturbed optimal ones for that split).
    """
    medium = Medium(opt.V)
    env = envelopes(medium, cfg)
    rng = np.random.Generator(np.random.Philox(key=seed))
    fronts, rears = [], []
    for i in range(n):
        if i % 2 == 0:
            hp = opt.h_plus
            base_f, base_r = opt.body.front, opt.body.rear
        else:
            hp = float(np.clip(opt.h_plus + rng.normal(0.0, 0.25 * opt.h), 0.0, opt.h))
            base_f = solve_one_side(env.front, hp)
            base_r = solve_one_side(env.rear, opt.h - hp)
        scale = 10.0 ** rng.uniform(-4.0, -0.5)
        if i % 4 == 3:
            fronts.append(random_profile(hp, rng))
            rears.append(random_profile(opt.h - hp, rng))
        else:
            fronts.append(perturb_profile(base_f, rng, scale))
            rears.append(perturb_profile(base_r, rng, scale))
    r_front = _resistances(PressureSide(Side.FRONT, medium, cfg), fronts)
    r_rear = _resistances(PressureSide(Side.REAR, medium, cfg), rears)
    return r_front + r_rear - opt.R
