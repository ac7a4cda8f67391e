"""Scaling functional equations and their pole lattices.

A scaling system encodes a denominator

    Delta(s) = 1 - sum_i c_i k_i^(s - sigma_i),

arising from a self-similar decomposition zeta(s) = sum_i c_i k_i^(s-sigma_i)
zeta(s) + remainder.  Poles of zeta are sought among the zeros of Delta.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContourFailureError, InvalidInputError


@dataclass(frozen=True)
class ScalingSystem:
    """Terms (coeff c > 0, ratio k in (0, 1), shift sigma)."""

    terms: tuple
    description: str = ""

    def __post_init__(self):
        terms = tuple((float(c), float(k), float(sg)) for c, k, sg in self.terms)
        if not terms:
            raise InvalidInputError("scaling system needs at least one term")
        for c, k, _ in terms:
            if not c > 0 or not 0 < k < 1:
                raise InvalidInputError("need c > 0 and ratio in (0, 1)")
        object.__setattr__(self, "terms", terms)

    @property
    def is_lattice(self) -> bool:
        ks = [k for _, k, _ in self.terms]
        return all(abs(np.log(k) - np.log(ks[0])) <= 1e-14 * abs(np.log(ks[0])) for k in ks)


@dataclass(frozen=True)
class PoleLattice:
    D: float
    period: float
    poles: tuple
    lattice: bool
    description: str = ""


def denominator(sys: ScalingSystem, s: complex) -> complex:
    """Delta(s) with principal real-log powers."""
    s = complex(s)
    return complex(1 - sum(c * np.exp((s - sg) * np.log(k)) for c, k, sg in sys.terms))


def _ddenominator(sys: ScalingSystem, s: complex) -> complex:
    return complex(-sum(c * np.log(k) * np.exp((s - sg) * np.log(k)) for c, k, sg in sys.terms))


def real_root(sys: ScalingSystem) -> float:
    """Unique real zero of Delta: bisection to 1e-12, then one Newton step."""
    f = lambda x: denominator(sys, x).real
    lo, hi = -1.0, 1.0
    while f(lo) > 0:
        lo *= 2
    while f(hi) < 0:
        hi *= 2
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    return float(x - f(x) / _ddenominator(sys, x).real)


def lattice_poles(sys: ScalingSystem, M: int) -> PoleLattice:
    """Zeros D + i m 2 pi / ln(1/k), m = -M..M (lattice case only)."""
    D = real_root(sys)
    if not sys.is_lattice:
        return PoleLattice(D, 0.0, (complex(D),), False, sys.description)
    k = sys.terms[0][1]
    period = 2 * np.pi / np.log(1 / k)
    poles = tuple(complex(D, m * period) for m in range(-M, M + 1))
    return PoleLattice(D, float(period), poles, True, sys.description)


def residue_estimate(f, s0: complex, radius: float, m_points: int = 64) -> complex:
    """Trapezoid rule for (1 / 2 pi i) times the contour integral of f on |s - s0| = radius."""
    theta = 2 * np.pi * np.arange(m_points) / m_points
    z = radius * np.exp(1j * theta)
    vals = np.array([complex(f(s0 + zz)) for zz in z])
    if not np.all(np.isfinite(vals)):
        raise ContourFailureError("non-finite samples on the contour")
    return complex(np.mean(vals * z))


@dataclass(frozen=True)
class Peak:
    im: float
    height: float


def line_scan(f, re: float, im_range: tuple, step: float):
    """Peaks of |f(re + i y)| above median + 3 MAD along a vertical line.

    Endpoints count as peaks when they exceed their single neighbour.
    Returns ``(peaks, ys, values)``.
    """
    y0, y1 = im_range
    ys = np.arange(y0, y1 + 0.5 * step, step)
    vals = np.array([abs(complex(f(complex(re, y)))) for y in ys])
    med = np.median(vals)
    mad = np.median(np.abs(vals - med))
    thresh = med + 3 * mad
    peaks = []
    n = vals.size
    for i in range(n):
        left = vals[i - 1] if i > 0 else -np.inf
        right = vals[i + 1] if i < n - 1 else -np.inf
        if vals[i] > left and vals[i] >= right and vals[i] > thresh:
            peaks.append(Peak(float(ys[i]), float(vals[i])))
    return peaks, ys, vals


def peak_spacing(peaks) -> float:
    ims = np.sort([p.im for p in peaks])
    if ims.size < 2:
        return float("nan")
    return float(np.mean(np.diff(ims)))
