"""Fractal strings: exact tube volumes and zeta values in one dimension.

A string is a host interval of length ``span`` with complementary open
intervals (gaps) of lengths l_j, plus a collar of width delta0 on both sides.
The weight is Lebesgue measure on the collared interval, so the tube volume is

    V(t) = m0 + sum_j min(2t, l_j) + 2 min(t, delta0),

with m0 = span - sum_j l_j the Lebesgue measure of the set itself.  V is
piecewise affine in t with breakpoints l_j/2 and delta0, which makes every
tube integral a finite sum of closed-form pieces plus, for geometric
families, closed-form geometric tails.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DivergentAbscissaError, InvalidInputError, NearPoleError

LOG_SWITCH = 1e-8
LN3 = np.log(3.0)
CANTOR_DIM = np.log(2.0) / LN3
CANTOR_PERIOD = 2 * np.pi / LN3
POLE_TOL = 1e-12


@dataclass(frozen=True)
class ExplicitLengths:
    lengths: tuple

    def __post_init__(self):
        ls = np.sort(np.asarray(self.lengths, dtype=float))[::-1]
        if np.any(ls <= 0) or not np.all(np.isfinite(ls)):
            raise InvalidInputError("lengths must be positive and finite")
        object.__setattr__(self, "lengths", tuple(ls.tolist()))


@dataclass(frozen=True)
class GeometricFamily:
    """Lengths base_length * ratio**i with multiplicity multiplicity**i, i >= 0."""

    base_length: float
    ratio: float
    multiplicity: int

    def __post_init__(self):
        if not self.base_length > 0 or not 0 < self.ratio < 1 or self.multiplicity < 1:
            raise InvalidInputError("malformed geometric family")
        if self.multiplicity * self.ratio >= 1:
            raise InvalidInputError("total length diverges (N r >= 1)")


@dataclass(frozen=True)
class FractalString:
    family: Union[ExplicitLengths, GeometricFamily]
    collar: float
    span: float | None = None

    def __post_init__(self):
        if not self.collar > 0:
            raise InvalidInputError("collar must be positive")
        total = self.total_length
        span = total if self.span is None else float(self.span)
        if span < total * (1 - 1e-12):
            raise InvalidInputError("gaps do not fit in the host interval")
        object.__setattr__(self, "span", span)

    @property
    def total_length(self) -> float:
        f = self.family
        if isinstance(f, GeometricFamily):
            return f.base_length / (1 - f.multiplicity * f.ratio)
        return float(np.sum(f.lengths))

    @property
    def set_measure(self) -> float:
        # span - total is pure rounding for fractal strings that fill their host
        m = self.span - self.total_length
        return m if m > 1e-12 * max(self.span, 1.0) else 0.0

    @property
    def natural_mass(self) -> float:
        return self.span + 2 * self.collar

    @property
    def max_length(self) -> float:
        f = self.family
        if isinstance(f, GeometricFamily):
            return f.base_length
        return f.lengths[0] if f.lengths else 0.0

    @property
    def tube_radius(self) -> float:
        """Smallest delta with every point of the collared interval inside the delta-tube."""
        return max(self.max_length / 2, self.collar)

    @property
    def dimension(self) -> float:
        if self.set_measure > 0:
            return 1.0
        f = self.family
        if isinstance(f, GeometricFamily) and f.multiplicity > 1:
            return float(np.log(f.multiplicity) / np.log(1 / f.ratio))
        return 0.0

    def breakpoints(self, lo: float, hi: float) -> np.ndarray:
        """Breakpoints of V strictly inside (lo, hi)."""
        f = self.family
        if isinstance(f, GeometricFamily):
            if hi <= 0:
                return np.empty(0)
            imax = int(np.ceil(np.log(max(lo, 1e-320) * 2 / f.base_length) / np.log(f.ratio))) + 1
            i = np.arange(0, max(imax, 0) + 1)
            half = 0.5 * f.base_length * f.ratio ** i
        else:
            half = 0.5 * np.asarray(f.lengths)
        pts = np.concatenate([half, [self.collar]])
        pts = np.unique(pts[(pts > lo) & (pts < hi)])
        return pts


def _tube_coeffs(st: FractalString, t: np.ndarray):
    """(alpha, beta) with V(t) = alpha t + beta on the affine piece containing t."""
    t = np.asarray(t, dtype=float)
    f = st.family
    if isinstance(f, GeometricFamily):
        N, r, l0 = f.multiplicity, f.ratio, f.base_length
        with np.errstate(divide="ignore"):
            q = np.log(np.maximum(2 * t, 1e-320) / l0) / np.log(r)
        levels = np.where(2 * t >= l0, 0, np.ceil(q)).astype(float)
        # gaps with 2t < l contribute 2t; the rest are saturated
        if N == 1:
            alpha = 2 * levels
        else:
            alpha = 2 * np.expm1(levels * np.log(N)) / (N - 1)
        beta = l0 * np.exp(levels * np.log(N * r)) / (1 - N * r)
    else:
        ls = np.asarray(f.lengths)[::-1]
        csum = np.concatenate([[0.0], np.cumsum(ls)])
        k = np.searchsorted(ls, 2 * t, side="right")
        alpha = 2.0 * (ls.size - k)
        beta = csum[k]
    inside = t < st.collar
    alpha = alpha + np.where(inside, 2.0, 0.0)
    beta = beta + np.where(inside, 0.0, 2 * st.collar) + st.set_measure
    return alpha, beta


def string_tube_volume(st: FractalString, t):
    """Exact tube volume V(t); scalar in, scalar out."""
    ta = np.asarray(t, dtype=float)
    if np.any(ta < 0):
        raise InvalidInputError("t must be nonnegative")
    alpha, beta = _tube_coeffs(st, ta)
    v = alpha * ta + beta
    return float(v) if np.ndim(t) == 0 else v


def power_integral(sigma: complex, a, b):
    """Integral of t**(sigma-1) over [a, b], with 0 <= a < b.

    Switches to the logarithmic form when |sigma| < 1e-8.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if abs(sigma) < LOG_SWITCH:
        if np.any(a == 0):
            raise DivergentAbscissaError("integral of 1/t from 0 diverges")
        la, lb = np.log(a), np.log(b)
        return (lb - la) * (1 + 0.5 * sigma * (la + lb))
    with np.errstate(divide="ignore"):
        pa = np.where(a > 0, np.exp(sigma * np.log(np.where(a > 0, a, 1.0))), 0.0)
    pb = np.exp(sigma * np.log(b))
    return (pb - pa) / sigma


def string_tube_integral(st: FractalString, s: complex, a: float, b: float) -> complex:
    """Exact integral of t**(s-2) V(t) over [a, b] with 0 < a < b."""
    if not 0 < a < b:
        raise InvalidInputError("need 0 < a < b")
    edges = np.concatenate([[a], st.breakpoints(a, b), [b]])
    mid = 0.5 * (edges[1:] + edges[:-1])
    alpha, beta = _tube_coeffs(st, mid)
    lo, hi = edges[:-1], edges[1:]
    return complex(np.sum(alpha * power_integral(s, lo, hi) + beta * power_integral(s - 1, lo, hi)))


def _pow(x, s):
    return np.exp(s * np.log(x))


def string_zeta_exact(st: FractalString, s: complex, nu_mass: float | None = None,
                      delta: float | None = None) -> complex:
    """Tube-form zeta of the string with Lebesgue weight on the collared interval.

    Evaluates delta^{s-1} nu(1) - (s-1) int_0^delta t^{s-2} V(t) dt piecewise
    exactly.  ``nu_mass`` rescales the weight (default: its natural mass).
    """
    s = complex(s)
    dim = st.dimension
    if s.real <= dim:
        raise DivergentAbscissaError(f"Re(s) = {s.real} is not right of dim {dim}", dimension=dim)
    scale = 1.0 if nu_mass is None else nu_mass / st.natural_mass
    dmin = st.tube_radius
    delta = dmin if delta is None else float(delta)
    if delta < dmin * (1 - 1e-15):
        raise InvalidInputError("delta must cover the collared interval")
    if s == 1:
        return complex(scale * st.natural_mass)
    f = st.family
    sm1 = s - 1
    # (s-1) * int_0^delta t^{s-2} V(t) dt, one closed form per piece type
    total = st.set_measure * _pow(delta, sm1) if st.set_measure > 0 else 0.0
    c = st.collar
    total += 2 * sm1 * _pow(c, s) / s + 2 * c * (_pow(delta, sm1) - _pow(c, sm1))
    if isinstance(f, GeometricFamily):
        N, r, l0 = f.multiplicity, f.ratio, f.base_length
        G = _pow(l0, s) / (1 - N * _pow(r, s))
        tail_len = l0 / (1 - N * r)
        total += 2 ** (1 - s) * G * sm1 / s + tail_len * _pow(delta, sm1) - 2 ** (1 - s) * G
    elif f.lengths:
        ls = np.asarray(f.lengths)
        half = ls / 2
        total += np.sum(2 * sm1 * _pow(half, s) / s + ls * (_pow(delta, sm1) - _pow(half, sm1)))
    value = _pow(delta, sm1) * st.natural_mass - total
    return complex(scale * value)


def _refuse_pole(s: complex, pole: complex):
    if abs(s - pole) < POLE_TOL * max(1.0, abs(pole)):
        raise NearPoleError(f"s = {s} is within {POLE_TOL:g} of the pole {pole}", pole=pole)


def geometric_pole(f: GeometricFamily, s: complex) -> complex:
    """Zero of 1 - N r^s nearest to ``s``."""
    lr = np.log(1 / f.ratio)
    D = np.log(f.multiplicity) / lr
    n = np.round(complex(s).imag * lr / (2 * np.pi))
    return complex(D, 2 * np.pi * n / lr)


def string_series_part(st: FractalString, s: complex) -> complex:
    """Gap contribution sum_j 2 (l_j/2)^s / s computed directly (no tube)."""
    s = complex(s)
    f = st.family
    _refuse_pole(s, 0j)
    if isinstance(f, GeometricFamily):
        _refuse_pole(s, geometric_pole(f, s))
        return complex(2 ** (1 - s) * _pow(f.base_length, s)
                       / (s * (1 - f.multiplicity * _pow(f.ratio, s))))
    ls = np.asarray(f.lengths)
    return complex(np.sum(2 * _pow(ls / 2, s) / s))


def string_boundary_term(st: FractalString, s: complex) -> complex:
    """Collar contribution 2 delta0^s / s (pole only at s = 0)."""
    s = complex(s)
    _refuse_pole(s, 0j)
    return complex(2 * _pow(st.collar, s) / s)


def cantor_string(base_length: float = 1 / 3, collar: float = 0.5) -> FractalString:
    """Gaps of the middle-thirds Cantor set on [0, 3 * base_length]."""
    return FractalString(GeometricFamily(base_length, 1 / 3, 2), collar, span=3 * base_length)


def cantor_pole(s: complex) -> complex:
    """Pole of the Cantor closed form nearest to ``s``."""
    n = np.round(complex(s).imag / CANTOR_PERIOD)
    lattice = CANTOR_DIM + 1j * n * CANTOR_PERIOD
    return 0j if abs(s) < abs(s - lattice) else complex(lattice)


def cantor_zeta_closed(s: complex) -> complex:
    """Series part 2^{1-s} 3^s / (s (3^s - 2)) of the Cantor example."""
    s = complex(s)
    pole = cantor_pole(s)
    _refuse_pole(s, pole)
    three_s = np.exp(s * LN3)
    return complex(2 ** (1 - s) * three_s / (s * (three_s - 2)))
