"""Commutative relative distance zeta functions.

Two independent routes are provided: direct integration of d(x, mu)^(s-d)
against the weight, and the tube form

    zeta(s) = delta^(s-d) nu(1) - (s - d) int_0^delta t^(s-d-1) V(t) dt,

evaluated in u = ln t with Gauss-Legendre panels whose width bounds the
phase change of t^(i Im s) per panel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Callable

import numpy as np

from .errors import AccuracyError, DivergentAbscissaError, InvalidInputError
from .geometry import (AttractorDistance, FiniteAtoms, IfsSystem, measure_integrate,
                       measure_nodes, weighted_sum)
from .quadrature import AdaptiveScheme, GridScheme, MonteCarloScheme, gauss_legendre
from .strings import (FractalString, string_boundary_term, string_series_part,
                      string_tube_volume, string_zeta_exact)

DOMAIN_MARGIN = 0.01


@dataclass(frozen=True)
class ZetaValue:
    value: complex
    err: float
    method: str
    s: complex
    abscissa_hint: float | None = None

    def __post_init__(self):
        if not self.err >= 0 and not np.isnan(self.err):
            raise InvalidInputError("err must be nonnegative")


@dataclass(frozen=True)
class TubeQuadrature:
    """Panel rule for the tube integral in u = ln t."""

    order: int = 12
    check_order: int = 8
    max_u_span: float = 690.0
    tail_rel: float = 1e-17
    rel_tol: float | None = None


@dataclass
class CommutativeScene:
    """Attractor, weight and optional exact-string description."""

    system: IfsSystem
    weight: object
    string: FractalString | None = None
    ratio: float | None = None
    abscissa_hint: float | None = None
    R: float | None = None
    seed: int = 0
    tol: float = 1e-10

    def __post_init__(self):
        if self.ratio is None:
            ratios = {round(m.ratio, 15) for m in self.system.maps}
            if len(ratios) == 1:
                self.ratio = self.system.maps[0].ratio

    @property
    def ambient_dim(self) -> int:
        return self.system.ambient_dim

    def distance(self, sup: bool = False) -> AttractorDistance:
        return AttractorDistance(self.system, self.tol, sup)

    @cached_property
    def hint(self) -> float:
        if self.abscissa_hint is not None:
            return float(self.abscissa_hint)
        from .minkowski import estimate_dims, log_grid, sample_tube
        grid = log_grid(1e-6, 1e-3, 64) if self.string is not None else log_grid(1e-5, 1e-2, 40)
        est = estimate_dims(sample_tube(self, grid))
        return est.upper_dim

    def nu_mass(self) -> float:
        return self.weight.mass()


def check_domain(s: complex, hint: float | None):
    if hint is not None and complex(s).real <= hint + DOMAIN_MARGIN:
        raise DivergentAbscissaError(
            f"Re(s) = {complex(s).real:.6g} is not right of the abscissa hint {hint:.6g} + {DOMAIN_MARGIN}",
            dimension=hint)


def distance_power(r: np.ndarray, e: complex, log_weight: bool = False, atoms: bool = False):
    """r**e (times ln r) with the zero-distance convention.

    Zero distances contribute 0 when Re(e) > 0 and 1 when e == 0; otherwise
    they are measure-zero quadrature hits and are dropped, except for atoms
    where the integral genuinely diverges.
    """
    r = np.asarray(r, dtype=float)
    pos = r > 0
    lr = np.log(np.where(pos, r, 1.0))
    out = np.exp(e * lr)
    if log_weight:
        out = out * lr
    if np.all(pos):
        return out
    if e == 0 and not log_weight:
        return np.where(pos, out, 1.0)
    if atoms and e.real <= 0:
        raise DivergentAbscissaError("atom on the support with Re(s) <= d")
    return np.where(pos, out, 0.0)


def _direct(dist, nu, s, scheme, ambient_dim, abscissa_hint, log_weight, method):
    s = complex(s)
    d = nu.dim if ambient_dim is None else ambient_dim
    if not (s == d and not log_weight):
        check_domain(s, abscissa_hint)
    e = s - d
    atoms = isinstance(nu, FiniteAtoms)

    def f(pts):
        return distance_power(dist(pts), e, log_weight, atoms)

    value, err = measure_integrate(nu, f, scheme)
    return ZetaValue(complex(value), float(err), method, s, abscissa_hint)


def zeta_direct(dist, nu, s, scheme=None, ambient_dim=None, abscissa_hint=None) -> ZetaValue:
    """int d(x, mu)^(s-d) nu(dx) by the given quadrature scheme."""
    return _direct(dist, nu, s, scheme or AdaptiveScheme(), ambient_dim, abscissa_hint,
                   False, "direct")


def zeta_derivative(dist, nu, s, scheme=None, ambient_dim=None, abscissa_hint=None) -> ZetaValue:
    """int d^(s-d) ln d dnu, the s-derivative of the zeta function."""
    return _direct(dist, nu, s, scheme or AdaptiveScheme(), ambient_dim, abscissa_hint,
                   True, "direct")


def zeta_direct_sup(dist_sup, nu, s, scheme=None, ambient_dim=None, abscissa_hint=None) -> ZetaValue:
    """As zeta_direct with the max-coordinate distance."""
    return _direct(dist_sup, nu, s, scheme or GridScheme(), ambient_dim, abscissa_hint,
                   False, "direct")


class DirectNodes:
    """Quadrature nodes with cached distances for many-s evaluation."""

    def __init__(self, dist, nu, scheme, ambient_dim=None):
        if isinstance(scheme, AdaptiveScheme):
            raise InvalidInputError("node caching needs a grid or Monte Carlo scheme")
        self.d = nu.dim if ambient_dim is None else ambient_dim
        self.scheme = scheme
        self.atoms = isinstance(nu, FiniteAtoms)
        self.pts, self.wts = measure_nodes(nu, scheme)
        self.r = np.asarray(dist(self.pts))
        self.coarse = None
        if isinstance(scheme, GridScheme) and not self.atoms:
            cp, cw = measure_nodes(nu, scheme, coarse=True)
            self.coarse = (cw, np.asarray(dist(cp)))

    def evaluate(self, s, log_weight=False):
        e = complex(s) - self.d
        vals = distance_power(self.r, e, log_weight, self.atoms)
        value = complex(weighted_sum(vals, self.wts))
        if isinstance(self.scheme, MonteCarloScheme):
            n = vals.size
            scaled = vals * self.wts * n
            err = np.sqrt(np.var(scaled.real) + np.var(scaled.imag)) / np.sqrt(n)
        elif self.coarse is not None:
            cw, cr = self.coarse
            err = abs(value - weighted_sum(distance_power(cr, e, log_weight), cw))
        else:
            err = 0.0
        return value, float(err)


def _tail_exponent(s, d, hint):
    # V(t) ~ t^(d - D) below the quadrature range
    D = 0.0 if hint is None else hint
    return s - D


def zeta_via_tube(tube: Callable, nu_mass: float, s, delta: float, quad: TubeQuadrature | None = None,
                  ambient_dim: int = 1, abscissa_hint: float | None = None,
                  breakpoints=None) -> ZetaValue:
    """Tube-form evaluation with log-substituted panel quadrature.

    ``tube`` is vectorized over t.  Optional ``breakpoints`` (kinks of V)
    become panel edges so that each panel sees a smooth integrand.
    """
    quad = quad or TubeQuadrature()
    s = complex(s)
    d = ambient_dim
    if not delta > 0:
        raise InvalidInputError("delta must be positive")
    if s == d:
        return ZetaValue(complex(nu_mass), 0.0, "tube", s, abscissa_hint)
    check_domain(s, abscissa_hint)
    e = s - d
    u_top = np.log(delta)
    ref = abs(nu_mass * np.exp(e.real * u_top))
    denom = _tail_exponent(s, d, abscissa_hint)
    span = 20.0
    while True:
        tm = np.exp(u_top - span)
        tail_bound = float(tube(np.array([tm]))[0]) * tm ** e.real / max(denom.real, 1e-3)
        if abs(e) * tail_bound <= quad.tail_rel * ref or span >= quad.max_u_span:
            break
        span = min(2 * span, quad.max_u_span)
    u_bot = u_top - span
    width = np.pi / (2 * (1 + abs(s.imag)))
    edges = [u_bot]
    if breakpoints is not None:
        bp = np.log(np.asarray(breakpoints, dtype=float))
        edges.extend(np.sort(bp[(bp > u_bot) & (bp < u_top)]).tolist())
    edges.append(u_top)
    panels = []
    for a, b in zip(edges[:-1], edges[1:]):
        n = max(1, int(np.ceil((b - a) / width)))
        panels.append(np.linspace(a, b, n + 1))
    lo = np.concatenate([p[:-1] for p in panels])
    hi = np.concatenate([p[1:] for p in panels])

    def rule(order):
        x, w = gauss_legendre(order)
        half = 0.5 * (hi - lo)
        u = (0.5 * (hi + lo))[:, None] + half[:, None] * x[None, :]
        vals = np.exp(e * u) * np.asarray(tube(np.exp(u).ravel())).reshape(u.shape)
        return np.sum((vals * w[None, :]).sum(axis=1) * half)

    integral = rule(quad.order)
    err_q = abs(integral - rule(quad.check_order))
    tmin = np.exp(u_bot)
    tail = float(tube(np.array([tmin]))[0]) * np.exp(e * u_bot) / denom
    integral = integral + tail
    value = np.exp(e * u_top) * nu_mass - e * integral
    err = abs(e) * (err_q + abs(tail))
    if quad.rel_tol is not None and err > quad.rel_tol * abs(value):
        raise AccuracyError("tube quadrature did not converge", estimate=value, err=err)
    return ZetaValue(complex(value), float(err), "tube", s, abscissa_hint)


def string_scene_tube(st: FractalString, delta: float | None = None):
    """(V, nu_mass, delta, breakpoints) for the tube route on an exact string.

    With ``delta`` below the covering radius, V is the tube of the
    restricted weight nu^{mu, delta}: V_delta(t) = V(min(t, delta)).
    """
    cover = st.tube_radius
    delta = cover if delta is None else float(delta)
    cap = min(delta, cover)

    def V(t):
        return string_tube_volume(st, np.minimum(np.asarray(t, dtype=float), cap))

    mass = string_tube_volume(st, cap)
    return V, mass, delta, _string_breakpoints(st, delta)


def _string_breakpoints(st: FractalString, delta: float):
    lo = delta * np.exp(-700.0)
    return st.breakpoints(lo, delta)


def exact_string_value(scene: CommutativeScene, s) -> ZetaValue:
    """Exact-string evaluation with series and boundary parts recorded."""
    v = string_zeta_exact(scene.string, s, scene.nu_mass())
    return ZetaValue(v, 0.0, "exact-string", complex(s), scene.hint)


def closed_form_value(scene: CommutativeScene, s) -> ZetaValue:
    """Series part plus boundary term, each in closed form."""
    st = scene.string
    scale = scene.nu_mass() / st.natural_mass
    v = scale * (string_series_part(st, s) + string_boundary_term(st, s))
    return ZetaValue(complex(v), 0.0, "closed-form", complex(s), scene.hint)


def interval_product_identity(st: FractalString, a: float, b: float, p: float, q: float,
                              k: int, s: float, delta: float | None = None,
                              quad: TubeQuadrature | None = None):
    """Both sides of the binomial shift identity for mu x uniform[a,b]^k.

    With T_prod(s) = int_0^delta t^(s-(1+k)-1) V_prod(t) dt for the sup-norm
    tube of the product drum (weight nu x normalized Lebesgue on [p,q]^k) and
    T_mu(s) = int_0^delta t^(s-2) V_mu(t) dt,

        T_prod(s) = (q-p)^(-k) sum_l C(k,l) 2^(k-l) (b-a)^l T_mu(s-l),

    valid while delta <= min(a - p, q - b).  The left side integrates the
    product tube numerically; the right side uses exact string values.
    """
    if not (p < a <= b < q):
        raise InvalidInputError("need p < a <= b < q")
    if int(k) != k or k < 1:
        raise InvalidInputError("k must be a positive integer")
    s = float(s)
    if s <= st.dimension + k:
        raise DivergentAbscissaError("need s > dim + k", dimension=st.dimension + k)
    delta = st.tube_radius if delta is None else float(delta)
    if delta < st.tube_radius or delta > min(a - p, q - b):
        raise InvalidInputError("delta must cover the string and stay inside [p, q]")

    def V_prod(t):
        t = np.asarray(t, dtype=float)
        cover = np.minimum(b + t, q) - np.maximum(a - t, p)
        return string_tube_volume(st, t) * (cover / (q - p)) ** k

    quad = quad or TubeQuadrature()
    e = s - (1 + k)
    # T_prod from the tube route: (delta^e nu(1) - zeta) / e with zeta from the panel rule
    z = zeta_via_tube(V_prod, float(V_prod(np.array([delta]))[0]), s, delta, quad,
                      ambient_dim=1 + k, abscissa_hint=st.dimension + k,
                      breakpoints=_string_breakpoints(st, delta))
    lhs = (delta ** e * float(V_prod(np.array([delta]))[0]) - z.value) / e

    rhs = 0.0
    mass = st.natural_mass
    for l in range(k + 1):
        sig = s - l
        if abs(sig - 1) < 1e-8:
            raise InvalidInputError("s - l = 1 hits the removable point of T_mu; shift s")
        T = (delta ** (sig - 1) * mass - string_zeta_exact(st, sig, delta=delta)) / (sig - 1)
        rhs += comb(k, l) * 2 ** (k - l) * (b - a) ** l * T
    rhs /= (q - p) ** k
    return complex(lhs), complex(rhs)
