"""Seeded random instances on an exact-rational grid.

Draws are made with numpy generators and then rationalized to fractions
with denominator 2^32, so the exact backend stays exact while degenerate
parameter collisions keep probability essentially zero (and remain
detectable by the genericity test).  Per-sample generators are derived
from a master seed and the sample index, which makes parallel and serial
sweeps produce identical streams.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .ifs import IteratedFunctionSystem
from .maps import Affine
from .numerics import Scalar
from .pcmap import Breakpoints, PiecewiseContraction

RATIONAL_BITS = 32
DEFAULT_MARGIN = Fraction(1, 64)


def rationalize(x: float, bits: int = RATIONAL_BITS) -> Fraction:
    """Round to the nearest fraction with denominator 2**bits."""
    scale = 1 << bits
    return Fraction(int(round(float(x) * scale)), scale)


def rng_for_sample(seed: int, index: int) -> np.random.Generator:
    """Independent deterministic stream for one sample of a sweep."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    )


def draw_breakpoints(
    rng: np.random.Generator, n: int, margin: Scalar = DEFAULT_MARGIN
) -> tuple[Fraction, ...]:
    """Sorted uniforms on (margin, 1 - margin), rejected on small gaps.

    Consecutive breakpoints closer than ``margin`` are resampled, so the
    collar width of a capping plan stays bounded away from zero.
    """
    lo, hi = float(margin), float(1 - margin)
    while True:
        pts = tuple(
            sorted(rationalize(v) for v in rng.uniform(lo, hi, size=n - 1))
        )
        if all(b - a >= margin for a, b in zip(pts, pts[1:])):
            return pts


def draw_affine(
    rng: np.random.Generator,
    kappa_max: float,
    margin: Scalar = DEFAULT_MARGIN,
    slope_band: tuple[float, float] | None = None,
) -> Affine:
    """Slope uniform on [-kappa_max, kappa_max]; intercept constrained so
    the image of [0, 1] stays inside (margin, 1 - margin).

    ``slope_band`` restricts the slope to a given interval instead (used to
    sample the strongly overlapping regime, where attractor components
    merge instead of multiplying).
    """
    if slope_band is None:
        a = rationalize(rng.uniform(-kappa_max, kappa_max))
    else:
        a = rationalize(rng.uniform(*slope_band))
    lo = float(margin - min(a, 0))
    hi = float(1 - margin - max(a, 0))
    b = rationalize(rng.uniform(lo, hi))
    return Affine(a, b)


def draw_ifs(
    rng: np.random.Generator,
    n: int,
    kappa_max: float,
    margin: Scalar = DEFAULT_MARGIN,
    slope_band: tuple[float, float] | None = None,
) -> IteratedFunctionSystem:
    return IteratedFunctionSystem(
        tuple(
            draw_affine(rng, kappa_max, margin, slope_band) for _ in range(n)
        )
    )


def draw_pc(
    rng: np.random.Generator,
    n: int,
    kappa_max: float,
    margin: Scalar = DEFAULT_MARGIN,
) -> PiecewiseContraction:
    """Breakpoints first, then the maps, from one stream."""
    bps = draw_breakpoints(rng, n, margin)
    ifs = draw_ifs(rng, n, kappa_max, margin)
    return PiecewiseContraction(ifs, Breakpoints(bps))
