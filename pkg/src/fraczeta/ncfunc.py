"""Zeta functionals of states over matrix tuples.

A scene couples a state tau (the "fractal"), a weight nu given as a
parameter-space measure pushed into matrix tuples by an affine embedding,
and an observable polynomial g.  The functional is

    [zeta_tau(s, nu)](g) = int d(X, tau)^(s - d) <xi, g(X) xi> dmu_nu,

integrated over the weight's parameter space.  Distances are the dominant
cost and are cached per quadrature lattice, so many values of s reuse one
set of nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np

from .errors import (DivergentAbscissaError, InvalidInputError, SeparationViolatedError,
                     UnsupportedTransformError)
from .geometry import FiniteAtoms, GaussianWindow, UniformBox, measure_nodes, weighted_sum
from .ncalgebra import (AtomicState, Atom, MixtureState, NcPolynomial, ParamFamily, PureVector,
                        TraceState, as_tuple, is_tracial, nc_distance, nc_poly_eval)
from .quadrature import GridScheme, MonteCarloScheme
from .strings import power_integral
from .zeta import ZetaValue, check_domain, distance_power


# ---------------------------------------------------------------------------
# affine maps on tuples


@dataclass(frozen=True)
class TupleMap:
    """X_i -> k U (sum_j O_ij X_j) U^T + X0_i."""

    k: float = 1.0
    O: np.ndarray | None = None
    U: np.ndarray | None = None
    X0: np.ndarray | None = None

    def linear(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if self.O is not None:
            X = np.einsum("ij,...jab->...iab", self.O, X)
        if self.U is not None:
            X = self.U @ X @ self.U.T
        return self.k * X

    def __call__(self, X: np.ndarray) -> np.ndarray:
        Y = self.linear(X)
        return Y if self.X0 is None else Y + self.X0

    def inverse(self) -> "TupleMap":
        O = None if self.O is None else self.O.T
        U = None if self.U is None else self.U.T
        inv = TupleMap(1.0 / self.k, O, U, None)
        X0 = None if self.X0 is None else -inv.linear(self.X0)
        return TupleMap(1.0 / self.k, O, U, X0)

    def then(self, other: "TupleMap | None") -> "TupleMap | None":
        """Composition other o self, kept as a closure-free pair."""
        return _Composed(self, other) if other is not None else self


@dataclass(frozen=True)
class _Composed:
    first: object
    second: object

    def __call__(self, X):
        return self.second(self.first(X))


@dataclass(frozen=True)
class Translate:
    X0: np.ndarray


@dataclass(frozen=True)
class Scale:
    k: float


@dataclass(frozen=True)
class Rotate:
    O: np.ndarray


@dataclass(frozen=True)
class Conjugate:
    U: np.ndarray


TransformOp = Union[Translate, Scale, Rotate, Conjugate]


def _orthogonal(M, name, special=False):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or np.max(np.abs(M.T @ M - np.eye(M.shape[0]))) > 1e-12:
        raise InvalidInputError(f"{name} must be orthogonal")
    if special and np.linalg.det(M) < 0:
        raise InvalidInputError(f"{name} must have determinant +1")
    return M


def as_tuple_map(op: TransformOp) -> TupleMap:
    if isinstance(op, Translate):
        return TupleMap(X0=as_tuple(op.X0))
    if isinstance(op, Scale):
        if not op.k > 0:
            raise InvalidInputError("scale factor must be positive")
        return TupleMap(k=float(op.k))
    if isinstance(op, Rotate):
        return TupleMap(O=_orthogonal(op.O, "rotation", special=True))
    if isinstance(op, Conjugate):
        return TupleMap(U=_orthogonal(op.U, "conjugating matrix"))
    raise InvalidInputError(f"unknown transform {op!r}")


# ---------------------------------------------------------------------------
# weights and scenes


@dataclass(frozen=True)
class NcWeight:
    """Parameter measure pushed to tuples by X(p) = base + sum_j p_j B_j."""

    measure: object
    base: np.ndarray
    directions: np.ndarray
    xi: object = TraceState()

    def __post_init__(self):
        base = as_tuple(self.base)
        dirs = np.asarray(self.directions, dtype=float)
        if dirs.ndim == 3:
            dirs = dirs[:, None]
        if dirs.shape != (self.measure.dim,) + base.shape:
            raise InvalidInputError("need one direction tuple per parameter")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "directions", dirs)

    @property
    def shape(self):
        return self.base.shape

    def mass(self) -> float:
        return self.measure.mass()

    def embed(self, p: np.ndarray) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if p.ndim == 1:
            p = p[:, None]
        return self.base[None] + np.einsum("mk,kdij->mdij", p, self.directions)

    def with_measure(self, measure) -> "NcWeight":
        return replace(self, measure=measure)


def sym2_weight(measure, xi=TraceState()) -> NcWeight:
    """Embedding (a, b, c) -> [[a, b], [b, c]] with d = 1."""
    E = np.zeros((3, 1, 2, 2))
    E[0, 0, 0, 0] = 1
    E[1, 0, 0, 1] = E[1, 0, 1, 0] = 1
    E[2, 0, 1, 1] = 1
    return NcWeight(measure, np.zeros((1, 2, 2)), E, xi)


@dataclass
class NcScene:
    tau: object
    nu: NcWeight
    g: NcPolynomial = field(default_factory=NcPolynomial.identity)
    R: float | None = None
    seed: int = 0
    abscissa_hint: float | None = None
    distance_floor: float = 0.0
    pre: object = None
    tol: float = 1e-10
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if abs(self.tau.mass - 1.0) > 1e-12:
            raise InvalidInputError(f"state mass {self.tau.mass} is not 1")
        if tuple(self.tau.shape) != tuple(self.nu.shape):
            raise InvalidInputError("state and weight live on different tuple shapes")
        if self.distance_floor < 0:
            raise InvalidInputError("distance floor must be nonnegative")
        if self.g.max_index > self.d:
            raise InvalidInputError("observable uses more variables than the tuple has")

    @property
    def d(self) -> int:
        return self.tau.shape[0]

    @property
    def n(self) -> int:
        return self.tau.shape[1]

    def observable(self, X: np.ndarray) -> np.ndarray:
        Xg = X if self.pre is None else self.pre(X)
        return self.nu.xi.expectation(nc_poly_eval(self.g, Xg))


class NcNodes:
    """Weight nodes with cached distances and observable values."""

    def __init__(self, scene: NcScene, scheme, tau=None):
        tau = scene.tau if tau is None else tau
        self.scene = scene
        self.scheme = scheme
        mu = scene.nu.measure
        self.atoms = isinstance(mu, FiniteAtoms)
        self.pts, self.wts = measure_nodes(mu, scheme)
        self.X = scene.nu.embed(self.pts)
        self.r = self._dist(self.X, tau)
        self.obs = scene.observable(self.X)
        self.coarse = None
        if isinstance(scheme, GridScheme) and not self.atoms:
            cp, cw = measure_nodes(mu, scheme, coarse=True)
            cX = scene.nu.embed(cp)
            self.coarse = (cw, self._dist(cX, tau), scene.observable(cX))

    def _dist(self, X, tau):
        r = nc_distance(X, tau, self.scene.tol)
        r = np.where(r <= self.scene.tol, 0.0, r)
        if self.scene.distance_floor > 0:
            r = np.maximum(r, self.scene.distance_floor)
        return r

    def _kernel(self, r, obs, e, log_weight):
        if e.real <= 0 and not (e == 0 and not log_weight) and np.any(r == 0):
            raise DivergentAbscissaError(
                "zero distances with Re(s) <= d; declare a positive distance floor")
        return distance_power(r, e, log_weight, self.atoms) * obs

    def evaluate(self, s, log_weight: bool = False):
        e = complex(s) - self.scene.d
        vals = self._kernel(self.r, self.obs, e, log_weight)
        value = complex(weighted_sum(vals, self.wts))
        if isinstance(self.scheme, MonteCarloScheme) and not self.atoms:
            n = vals.size
            scaled = vals * self.wts * n
            err = np.sqrt(np.var(scaled.real) + np.var(scaled.imag)) / np.sqrt(n)
        elif self.coarse is not None:
            cw, cr, co = self.coarse
            err = abs(value - weighted_sum(self._kernel(cr, co, e, log_weight), cw))
        else:
            err = 0.0
        return value, float(err)

    def tube(self, t):
        """Empirical nu^{tau, t}(g) on the nodes, vectorized over t."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        order = np.argsort(self.r)
        rs = self.r[order]
        cum = np.concatenate([[0.0], np.cumsum(self.obs[order] * self.wts[order])])
        return cum[np.searchsorted(rs, t, side="right")]

    def tube_estimate(self, t: float):
        """nu^{tau, t}(g) at one t with the same error model as ``evaluate``."""
        vals = np.where(self.r <= t, self.obs, 0.0)
        value = complex(weighted_sum(vals, self.wts))
        if isinstance(self.scheme, MonteCarloScheme) and not self.atoms:
            n = vals.size
            scaled = vals * self.wts * n
            err = np.sqrt(np.var(scaled.real) + np.var(scaled.imag)) / np.sqrt(n)
        elif self.coarse is not None:
            cw, cr, co = self.coarse
            err = abs(value - weighted_sum(np.where(cr <= t, co, 0.0), cw))
        else:
            err = 0.0
        return value, float(err)


def nc_nodes(scene: NcScene, scheme) -> NcNodes:
    key = ("nodes", scheme)
    if key not in scene._cache:
        scene._cache[key] = NcNodes(scene, scheme)
    return scene._cache[key]


def _default_scheme(scene):
    return GridScheme(32)


def nc_zeta(scene: NcScene, s, scheme=None) -> ZetaValue:
    """[zeta_tau(s, nu)](g) by grid quadrature or seeded Monte Carlo."""
    s = complex(s)
    scheme = scheme or _default_scheme(scene)
    if s != scene.d:
        check_domain(s, scene.abscissa_hint)
    value, err = nc_nodes(scene, scheme).evaluate(s)
    return ZetaValue(value, err, "direct", s, scene.abscissa_hint)


def nc_zeta_derivative(scene: NcScene, s, scheme=None) -> ZetaValue:
    """s-derivative: the integrand weighted by ln d(X, tau)."""
    s = complex(s)
    scheme = scheme or _default_scheme(scene)
    check_domain(s, scene.abscissa_hint)
    value, err = nc_nodes(scene, scheme).evaluate(s, log_weight=True)
    return ZetaValue(value, err, "direct", s, scene.abscissa_hint)


def nc_tube_functional(scene: NcScene, t: float, scheme=None) -> complex:
    """nu^{tau, t}(g): the weight restricted to {d(X, tau) <= t}."""
    if not t > 0:
        raise InvalidInputError("t must be positive")
    scheme = scheme or _default_scheme(scene)
    return complex(nc_nodes(scene, scheme).tube(t)[0])


def nc_tube_estimate(scene: NcScene, t: float, scheme=None) -> ZetaValue:
    """``nc_tube_functional`` with a sampling or grid-refinement error."""
    if not t > 0:
        raise InvalidInputError("t must be positive")
    scheme = scheme or _default_scheme(scene)
    value, err = nc_nodes(scene, scheme).tube_estimate(t)
    return ZetaValue(value, err, "tube", complex(scene.d), scene.abscissa_hint)


def nc_zeta_via_tube(scene: NcScene, s, delta: float | None = None, scheme=None,
                     points: int = 400, t_min: float | None = None) -> ZetaValue:
    """Tube form delta^(s-d) nu(g) - (s-d) int_0^delta t^(s-d-1) nu^{tau,t}(g) dt.

    The tube functional is sampled on a log grid and interpolated linearly;
    each linear piece is integrated in closed form.  The reported error adds
    the sampling error of the nodes, a bound on the interpolation error and
    the size of the tail below the grid.
    """
    s = complex(s)
    scheme = scheme or _default_scheme(scene)
    nodes = nc_nodes(scene, scheme)
    d = scene.d
    e = s - d
    rmax = float(np.max(nodes.r)) if nodes.r.size else 1.0
    delta = max(rmax, 1e-300) * (1 + 1e-12) if delta is None else float(delta)
    if delta < rmax:
        raise InvalidInputError("delta must cover the support of the weight")
    nu_g = complex(weighted_sum(nodes.obs, nodes.wts))
    if e == 0:
        return ZetaValue(nu_g, 0.0, "tube", s, scene.abscissa_hint)
    check_domain(s, scene.abscissa_hint)
    pos = nodes.r[nodes.r > 0]
    lo = t_min if t_min is not None else (pos.min() * 0.5 if pos.size else delta * 1e-12)
    lo = min(lo, delta * 0.5)
    t = np.geomspace(lo, delta, points)
    V = nodes.tube(t)
    a, b = t[:-1], t[1:]
    Va, Vb = V[:-1], V[1:]
    slope = (Vb - Va) / (b - a)
    icpt = Va - slope * a
    integral = np.sum(slope * power_integral(e + 1, a, b) + icpt * power_integral(e, a, b))
    interp = np.sum(np.abs(Vb - Va) * np.abs(power_integral(e, a, b)))
    V0 = nodes.tube(np.array([0.0]))[0]
    if e.real <= 0 and V0 != 0:
        raise DivergentAbscissaError("zero distances with Re(s) <= d; declare a positive distance floor")
    # below the grid V is the constant V(0) (only zero distances, if any)
    tail = V0 * np.exp(e * np.log(lo)) / e
    value = np.exp(e * np.log(delta)) * nu_g - e * (integral + tail)
    samp = nodes.evaluate(s)[1]
    err = samp + abs(e) * interp
    return ZetaValue(complex(value), float(err), "tube", s, scene.abscissa_hint)


# ---------------------------------------------------------------------------
# transformations


def _push_state(tau, F: TupleMap):
    if isinstance(tau, AtomicState):
        return AtomicState(tuple(Atom(F(a.Y), a.xi, a.weight) for a in tau.atoms))
    if isinstance(tau, ParamFamily):
        return ParamFamily(tau.factors, F(tau.base), F.linear(tau.directions), tau.xi, tau.mass)
    if isinstance(tau, MixtureState):
        return MixtureState(tuple((a, _push_state(st, F)) for a, st in tau.components))
    raise InvalidInputError(f"unsupported state {type(tau).__name__}")


def transform_scene(scene: NcScene, op: TransformOp) -> NcScene:
    """Push tau and nu forward by ``op`` and pull g back.

    With both pushed forward, translation, rotation and (for tracial tau)
    conjugation leave the functional unchanged, and scaling by k multiplies
    it by k^(s - d).
    """
    if isinstance(op, Conjugate) and not is_tracial(scene.tau):
        raise UnsupportedTransformError("conjugation invariance needs a tracial state")
    if isinstance(op, Rotate) and np.asarray(op.O).shape != (scene.d, scene.d):
        raise InvalidInputError("rotation must be d x d")
    if isinstance(op, Conjugate) and np.asarray(op.U).shape != (scene.n, scene.n):
        raise InvalidInputError("conjugating matrix must be n x n")
    F = as_tuple_map(op)
    nu = scene.nu
    xi = nu.xi
    if isinstance(op, Conjugate) and isinstance(xi, PureVector):
        xi = PureVector(F.U @ xi.vector)
    nu2 = NcWeight(nu.measure, F(nu.base), F.linear(nu.directions), xi)
    inv = F.inverse()
    pre = inv if scene.pre is None else inv.then(scene.pre)
    R = scene.R
    if R is not None:
        R = R * F.k
        if F.X0 is not None:
            R += float(np.max(np.abs(np.linalg.eigvalsh(F.X0))))
    return NcScene(_push_state(scene.tau, F), nu2, scene.g, R, scene.seed, scene.abscissa_hint,
                   scene.distance_floor * F.k, pre, scene.tol)


# ---------------------------------------------------------------------------
# decomposition diagnostics


@dataclass(frozen=True)
class DecompositionReport:
    s_grid: tuple
    linearity_dev: float
    linearity_tol: float
    h: tuple
    h_finite: bool
    separation: float | None
    truncated_dev: float | None
    bound: tuple | None
    bound_ok: bool | None

    @property
    def linearity_ok(self) -> bool:
        return self.linearity_dev <= self.linearity_tol


def split_weight(nu: NcWeight):
    """Two weights summing to nu (box halves or atom halves)."""
    mu = nu.measure
    if isinstance(mu, FiniteAtoms):
        h = max(1, mu.points.shape[0] // 2)
        return (nu.with_measure(FiniteAtoms(mu.points[:h], mu.weights[:h])),
                nu.with_measure(FiniteAtoms(mu.points[h:], mu.weights[h:])))
    if isinstance(mu, UniformBox):
        lo, hi = mu.lo, mu.hi
        mid = 0.5 * (lo[0] + hi[0])
        hi1, lo2 = hi.copy(), lo.copy()
        hi1[0], lo2[0] = mid, mid
        return nu.with_measure(UniformBox(lo, hi1)), nu.with_measure(UniformBox(lo2, hi))
    if isinstance(mu, GaussianWindow):
        lo, hi = mu.box
        mid = 0.5 * (lo[0] + hi[0])
        hi1, lo2 = hi.copy(), lo.copy()
        hi1[0], lo2[0] = mid, mid
        return (nu.with_measure(GaussianWindow(mu.alpha, mu.dim, (lo, hi1))),
                nu.with_measure(GaussianWindow(mu.alpha, mu.dim, (lo2, hi))))
    raise InvalidInputError("cannot split this weight")


def decomposition_check(scene: NcScene, split: MixtureState, s_grid, separation_eps=None,
                        scheme=None) -> DecompositionReport:
    """Linearity in nu, the remainder h = zeta_tau - zeta_tau1 and its bound.

    ``split`` is tau written as a1 tau1 + a2 tau2 (a MixtureState with two
    components).  With ``separation_eps`` the support of the g-weighted nu
    must stay farther than eps from tau2; the remainder is then the
    integral over [eps, delta] only and obeys the explicit bound.
    """
    if len(split.components) != 2:
        raise InvalidInputError("split must have exactly two components")
    (a1, tau1), (a2, tau2) = split.components
    if abs(a1 + a2 - 1) > 1e-12:
        raise InvalidInputError("split weights must sum to 1")
    scheme = scheme or _default_scheme(scene)
    s_grid = [complex(s) for s in np.atleast_1d(s_grid)]
    d = scene.d

    # (i) linearity in nu
    nuA, nuB = split_weight(scene.nu)
    sA = replace(scene, nu=nuA, _cache={})
    sB = replace(scene, nu=nuB, _cache={})
    s0 = s_grid[0]
    full = nc_zeta(scene, s0, scheme)
    za, zb = nc_zeta(sA, s0, scheme), nc_zeta(sB, s0, scheme)
    lin_dev = abs(full.value - za.value - zb.value)
    lin_tol = full.err + za.err + zb.err + 1e-12 * max(abs(full.value), 1.0)

    # (ii) remainder on the grid
    base = nc_nodes(scene, scheme)
    r_all = base.r
    r1 = NcNodes(scene, scheme, tau=tau1).r
    tau_eff = MixtureState(((a1, tau1), (a2, tau2)))
    r_mix = NcNodes(scene, scheme, tau=tau_eff).r if a2 > 0 else r1
    w, obs = base.wts, base.obs
    h = []
    for s in s_grid:
        e = s - d
        h.append(complex(np.sum(w * obs * (distance_power(r_mix, e) - distance_power(r1, e)))))
    h = np.array(h)
    finite = bool(np.all(np.isfinite(h)))

    sep = trunc_dev = bound = bound_ok = None
    if separation_eps is not None:
        eps = float(separation_eps)
        r2 = NcNodes(scene, scheme, tau=tau2).r
        live = (w * np.abs(obs)) > 0
        if not np.any(live):
            sep = np.inf
        else:
            idx = np.flatnonzero(live)[np.argmin(r2[live])]
            sep = float(r2[idx])
            if sep <= eps:
                raise SeparationViolatedError(
                    f"weight support comes within {sep:.3g} <= eps of tau2", witness=base.X[idx])
        delta = float(max(r_all.max(), r1.max(), r2.max(), eps * (1 + 1e-9)))
        devs, bounds = [], []
        nu2_delta = float(np.sum(w * np.abs(obs) * (r2 <= delta)))
        for s, hv in zip(s_grid, h):
            e = s - d
            ht = np.sum(w * obs * (distance_power(np.maximum(r_mix, eps), e)
                                   - distance_power(np.maximum(r1, eps), e)))
            devs.append(abs(ht - hv))
            re = e.real
            if abs(re) > 1e-12:
                factor = (delta ** re - eps ** re) / re
            else:
                factor = np.log(delta) - np.log(eps)
            bounds.append(abs(e) * nu2_delta * factor)
        trunc_dev = float(max(devs))
        bound = tuple(float(b) for b in bounds)
        bound_ok = bool(np.all(np.abs(h) <= np.array(bounds) * (1 + 1e-9) + 1e-14))
    return DecompositionReport(tuple(s_grid), float(lin_dev), float(lin_tol), tuple(h.tolist()),
                               finite, sep, trunc_dev, bound, bound_ok)
