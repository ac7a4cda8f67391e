"""Euclidean ambient data: similarity IFS attractors, weight measures,
distance oracles and integration against weight measures.

Distances to attractors are computed by a vectorized best-first
branch-and-bound over IFS cells.  A cell is the image of the system's
bounding box under a composed map; its lower bound is the distance to the
axis-aligned bounding box of that image and its upper bound is the distance
to the images of the maps' fixed points (which are attractor points).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
from scipy.special import erf, ndtr, ndtri

from .errors import DegenerateMeasureError, InvalidInputError
from .quadrature import (AdaptiveScheme, GridScheme, MonteCarloScheme,
                         adaptive_integrate, composite_legendre, gauss_hermite,
                         philox_uniforms, tensor_rule)

DEFAULT_TOL = 1e-10
# exp(-alpha r^2) = 1e-16 at the truncation radius
TRUNCATION_LOG = np.log(1e16)


def as_points(x, dim: int | None = None) -> np.ndarray:
    """Coerce scalars, vectors or stacks of vectors to shape (m, d)."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1) if dim == 1 else arr.reshape(1, -1)
    if arr.ndim != 2:
        raise InvalidInputError("points must be scalars, vectors or (m, d) arrays")
    if dim is not None and arr.shape[1] != dim:
        raise InvalidInputError(f"expected dimension {dim}, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("non-finite coordinates")
    return arr


@dataclass(frozen=True)
class SimilarityMap:
    """x -> ratio * rotation @ x + translation."""

    ratio: float
    translation: np.ndarray
    rotation: np.ndarray | None = None

    def __post_init__(self):
        t = np.atleast_1d(np.asarray(self.translation, dtype=float))
        d = t.size
        rot = np.eye(d) if self.rotation is None else np.asarray(self.rotation, dtype=float)
        if not 0.0 < self.ratio < 1.0:
            raise InvalidInputError("similarity ratio must lie in (0, 1)")
        if rot.shape != (d, d):
            raise InvalidInputError("rotation shape does not match translation")
        if np.max(np.abs(rot.T @ rot - np.eye(d))) > 1e-12:
            raise InvalidInputError("rotation is not orthogonal")
        object.__setattr__(self, "translation", t)
        object.__setattr__(self, "rotation", rot)

    @property
    def dim(self) -> int:
        return self.translation.size

    @property
    def matrix(self) -> np.ndarray:
        return self.ratio * self.rotation

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return x @ self.matrix.T + self.translation

    def fixed_point(self) -> np.ndarray:
        return np.linalg.solve(np.eye(self.dim) - self.matrix, self.translation)


@dataclass(frozen=True)
class IfsSystem:
    """Finite family of contracting similarities and a box containing the attractor."""

    maps: tuple
    bounding_box: tuple | None = None

    def __post_init__(self):
        maps = tuple(self.maps)
        if not maps:
            raise InvalidInputError("an IFS needs at least one map")
        d = maps[0].dim
        if any(m.dim != d for m in maps):
            raise InvalidInputError("maps disagree on the ambient dimension")
        object.__setattr__(self, "maps", maps)
        if self.bounding_box is None:
            lo, hi = self._default_box()
        else:
            lo = np.atleast_1d(np.asarray(self.bounding_box[0], dtype=float))
            hi = np.atleast_1d(np.asarray(self.bounding_box[1], dtype=float))
            if lo.shape != (d,) or hi.shape != (d,) or np.any(hi < lo):
                raise InvalidInputError("malformed bounding box")
            c, h = 0.5 * (lo + hi), 0.5 * (hi - lo)
            for m in maps:
                ci = m.matrix @ c + m.translation
                hi_ = np.abs(m.matrix) @ h
                if np.any(ci - hi_ < lo - 1e-12) or np.any(ci + hi_ > hi + 1e-12):
                    raise InvalidInputError("bounding box is not mapped into itself")
        object.__setattr__(self, "bounding_box", (lo, hi))

    def _default_box(self):
        fps = np.array([m.fixed_point() for m in self.maps])
        c = fps.mean(axis=0)
        axis_aligned = all(np.allclose(np.abs(m.rotation), np.eye(self.ambient_dim))
                           for m in self.maps)
        if axis_aligned:
            # per-coordinate invariant half-widths
            h = np.zeros(self.ambient_dim)
            for m in self.maps:
                h = np.maximum(h, np.abs(m(c) - c) / (1.0 - m.ratio))
        else:
            rho = max(np.linalg.norm(m(c) - c) / (1.0 - m.ratio) for m in self.maps)
            h = np.full(self.ambient_dim, rho)
        return c - h, c + h

    @property
    def ambient_dim(self) -> int:
        return self.maps[0].dim

    @property
    def max_ratio(self) -> float:
        return max(m.ratio for m in self.maps)

    def similarity_dimension(self) -> float:
        """Root of sum r_i^s = 1 (open set condition assumed)."""
        from scipy.optimize import brentq
        rs = np.array([m.ratio for m in self.maps])
        if rs.size == 1:
            return 0.0
        return brentq(lambda s: np.sum(rs ** s) - 1.0, 0.0, 64.0, xtol=1e-15)

    def cells(self, depth: int):
        """Composed maps of all words of length ``depth`` as (A, b) stacks."""
        d = self.ambient_dim
        A = np.eye(d)[None]
        b = np.zeros((1, d))
        MA = np.array([m.matrix for m in self.maps])
        Mb = np.array([m.translation for m in self.maps])
        for _ in range(depth):
            A, b = _compose(A, b, MA, Mb)
        return A, b


def _compose(A, b, MA, Mb):
    nA = np.einsum("cij,kjl->ckil", A, MA).reshape(-1, A.shape[1], A.shape[2])
    nb = (np.einsum("cij,kj->cki", A, Mb) + b[:, None, :]).reshape(-1, b.shape[1])
    return nA, nb


def cantor_system(scale: float = 1.0, offset: float = 0.0) -> IfsSystem:
    """Middle-thirds Cantor set on [offset, offset + scale]."""
    return IfsSystem((SimilarityMap(1 / 3, [offset * 2 / 3]),
                      SimilarityMap(1 / 3, [offset * 2 / 3 + 2 * scale / 3])))


def interval_system(lo: float = 0.0, hi: float = 1.0) -> IfsSystem:
    return IfsSystem((SimilarityMap(0.5, [lo / 2]), SimilarityMap(0.5, [hi / 2])))


def point_system(p) -> IfsSystem:
    p = np.atleast_1d(np.asarray(p, dtype=float))
    return IfsSystem((SimilarityMap(0.5, p / 2),))


def product_system(a: IfsSystem, b: IfsSystem) -> IfsSystem:
    """Cartesian product of two systems with equal ratios map-by-map pairing."""
    maps = []
    for ma in a.maps:
        for mb in b.maps:
            if not np.isclose(ma.ratio, mb.ratio, rtol=0, atol=1e-15):
                raise InvalidInputError("product IFS needs equal ratios")
            rot = np.zeros((ma.dim + mb.dim,) * 2)
            rot[:ma.dim, :ma.dim] = ma.rotation
            rot[ma.dim:, ma.dim:] = mb.rotation
            maps.append(SimilarityMap(ma.ratio, np.concatenate([ma.translation, mb.translation]), rot))
    lo = np.concatenate([a.bounding_box[0], b.bounding_box[0]])
    hi = np.concatenate([a.bounding_box[1], b.bounding_box[1]])
    return IfsSystem(tuple(maps), (lo, hi))


def _bnb_distance(sys: IfsSystem, pts: np.ndarray, tol: float, sup: bool,
                  chunk: int = 20000) -> np.ndarray:
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    out = np.empty(pts.shape[0])
    for s in range(0, pts.shape[0], chunk):
        out[s:s + chunk] = _bnb_chunk(sys, pts[s:s + chunk], tol, sup)
    return out


def _norm(v, sup):
    return np.max(np.abs(v), axis=-1) if sup else np.sqrt(np.sum(v * v, axis=-1))


def _bnb_chunk(sys, pts, tol, sup):
    d = sys.ambient_dim
    lo, hi = sys.bounding_box
    c0, h0 = 0.5 * (lo + hi), 0.5 * (hi - lo)
    MA = np.array([m.matrix for m in sys.maps])
    Mb = np.array([m.translation for m in sys.maps])
    anchors = np.array([m.fixed_point() for m in sys.maps])

    m = pts.shape[0]
    ub = _norm(pts[:, None, :] - anchors[None], sup).min(axis=1)
    owner = np.arange(m)
    A = np.broadcast_to(np.eye(d), (m, d, d)).copy()
    b = np.zeros((m, d))
    while owner.size:
        k = MA.shape[0]
        nA, nb = _compose(A, b, MA, Mb)
        own = np.repeat(owner, k)
        x = pts[own]
        cen = np.einsum("cij,j->ci", nA, c0) + nb
        half = np.einsum("cij,j->ci", np.abs(nA), h0)
        lb = _norm(np.maximum(np.abs(x - cen) - half, 0.0), sup)
        img = np.einsum("cij,aj->cai", nA, anchors) + nb[:, None, :]
        cand = _norm(x[:, None, :] - img, sup).min(axis=1)
        np.minimum.at(ub, own, cand)
        keep = lb < ub[own] - tol
        owner, A, b = own[keep], nA[keep], nb[keep]
    ub[ub <= tol] = 0.0
    return ub


def _is_single(x, dim: int) -> bool:
    nd = np.ndim(x)
    return nd == 0 or (nd == 1 and dim > 1)


def attractor_distance(sys: IfsSystem, x, tol: float = DEFAULT_TOL):
    """Euclidean distance from ``x`` to the attractor of ``sys`` within ``tol``.

    Accepts a single point (returns a float) or an (m, d) array.
    """
    pts = as_points(x, sys.ambient_dim)
    single = _is_single(x, sys.ambient_dim)
    out = _bnb_distance(sys, pts, tol, sup=False)
    return float(out[0]) if single else out


def attractor_distance_sup(sys: IfsSystem, x, tol: float = DEFAULT_TOL):
    """Max-coordinate distance from ``x`` to the attractor within ``tol``."""
    pts = as_points(x, sys.ambient_dim)
    single = _is_single(x, sys.ambient_dim)
    out = _bnb_distance(sys, pts, tol, sup=True)
    return float(out[0]) if single else out


@dataclass(frozen=True)
class AttractorDistance:
    """Immutable distance oracle: callable on (m, d) arrays."""

    system: IfsSystem
    tol: float = DEFAULT_TOL
    sup: bool = False

    @property
    def ambient_dim(self) -> int:
        return self.system.ambient_dim

    def __call__(self, pts) -> np.ndarray:
        pts = as_points(pts, self.ambient_dim)
        return _bnb_distance(self.system, pts, self.tol, self.sup)


# ---------------------------------------------------------------------------
# weight measures


@dataclass(frozen=True)
class UniformBox:
    """Lebesgue measure restricted to an axis-aligned box."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=float))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=float))
        if lo.shape != hi.shape or np.any(hi < lo) or not np.all(np.isfinite(lo + hi)):
            raise InvalidInputError("malformed box")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return self.lo.size

    def mass(self) -> float:
        return float(np.prod(self.hi - self.lo))

    def density(self, pts):
        return np.ones(pts.shape[0])


@dataclass(frozen=True)
class GaussianWindow:
    """Density exp(-alpha |x|^2) on a box (default: where it exceeds 1e-16)."""

    alpha: float
    dim: int = 1
    box: tuple | None = None

    def __post_init__(self):
        if not self.alpha > 0:
            raise InvalidInputError("alpha must be positive")
        r = self.truncation_radius
        if self.box is None:
            lo, hi = np.full(self.dim, -r), np.full(self.dim, r)
        else:
            lo = np.atleast_1d(np.asarray(self.box[0], dtype=float))
            hi = np.atleast_1d(np.asarray(self.box[1], dtype=float))
            if lo.shape != (self.dim,) or hi.shape != (self.dim,) or np.any(hi < lo):
                raise InvalidInputError("malformed Gaussian window box")
        object.__setattr__(self, "box", (lo, hi))

    @property
    def truncation_radius(self) -> float:
        return float(np.sqrt(TRUNCATION_LOG / self.alpha))

    def density(self, pts):
        return np.exp(-self.alpha * np.sum(pts * pts, axis=1))

    def axis_mass(self, lo, hi):
        sa = np.sqrt(self.alpha)
        return 0.5 * np.sqrt(np.pi / self.alpha) * (erf(sa * hi) - erf(sa * lo))

    def mass(self) -> float:
        lo, hi = self.box
        return float(np.prod(self.axis_mass(lo, hi)))


@dataclass(frozen=True)
class TubeRestriction:
    """``inner`` restricted to {x : dist(x) <= radius}."""

    inner: object
    distance_oracle: Callable
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidInputError("tube radius must be positive")

    @property
    def dim(self) -> int:
        return self.inner.dim

    def mass(self) -> float:
        return tube_mass(self.inner, self.distance_oracle, self.radius)


@dataclass(frozen=True)
class FiniteAtoms:
    """Weighted point masses."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        w = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if pts.shape[0] != w.size or np.any(w < 0) or not np.all(np.isfinite(pts)):
            raise InvalidInputError("malformed atoms")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def mass(self) -> float:
        return float(self.weights.sum())


WeightMeasure = Union[UniformBox, GaussianWindow, TubeRestriction, FiniteAtoms]


def _box_of(nu):
    if isinstance(nu, UniformBox):
        return nu.lo, nu.hi
    if isinstance(nu, GaussianWindow):
        return nu.box
    raise InvalidInputError("measure has no box")


def _axis_rule(nu, lo, hi, nodes, order):
    """One-dimensional rule carrying the density on one axis."""
    if isinstance(nu, GaussianWindow) and -lo >= nu.truncation_radius * (1 - 1e-9) \
            and hi >= nu.truncation_radius * (1 - 1e-9):
        y, w = gauss_hermite(nodes)
        x = y / np.sqrt(nu.alpha)
        w = w / np.sqrt(nu.alpha)
        inside = (x >= lo) & (x <= hi)
        return x[inside], w[inside]
    x, w = composite_legendre(lo, hi, nodes, order)
    if isinstance(nu, GaussianWindow):
        w = w * np.exp(-nu.alpha * x * x)
    return x, w


def measure_nodes(nu, scheme, coarse: bool = False):
    """Quadrature nodes ``(points, weights)`` representing ``nu``.

    For grid schemes ``coarse=True`` gives the half-resolution grid used for
    the Richardson-type error estimate.
    """
    if isinstance(nu, FiniteAtoms):
        return nu.points, nu.weights
    if isinstance(nu, TubeRestriction):
        pts, wts = measure_nodes(nu.inner, scheme, coarse)
        inside = np.asarray(nu.distance_oracle(pts)) <= nu.radius
        return pts, wts * inside
    if isinstance(scheme, GridScheme):
        lo, hi = _box_of(nu)
        n = scheme.nodes // 2 if coarse else scheme.nodes
        axes = [_axis_rule(nu, lo[i], hi[i], n, scheme.order) for i in range(nu.dim)]
        return tensor_rule(axes)
    if isinstance(scheme, MonteCarloScheme):
        u = philox_uniforms(scheme.seed, scheme.samples, nu.dim, scheme.batch)
        lo, hi = _box_of(nu)
        if isinstance(nu, UniformBox):
            pts = lo + u * (hi - lo)
        else:
            sig = 1.0 / np.sqrt(2 * nu.alpha)
            plo, phi = ndtr(lo / sig), ndtr(hi / sig)
            pts = sig * ndtri(plo + u * (phi - plo))
        return pts, np.full(scheme.samples, nu.mass() / scheme.samples)
    raise InvalidInputError(f"unsupported scheme {scheme!r}")


def _density_1d(nu):
    """(lo, hi, density callable) for one-dimensional adaptive integration."""
    if isinstance(nu, UniformBox):
        return nu.lo[0], nu.hi[0], lambda x: np.ones_like(x)
    if isinstance(nu, GaussianWindow):
        lo, hi = nu.box
        return lo[0], hi[0], lambda x: np.exp(-nu.alpha * x * x)
    if isinstance(nu, TubeRestriction):
        lo, hi, dens = _density_1d(nu.inner)

        def restricted(x):
            return dens(x) * (np.asarray(nu.distance_oracle(x[:, None])) <= nu.radius)
        return lo, hi, restricted
    raise InvalidInputError("adaptive scheme needs a one-dimensional box-type measure")


def weighted_sum(f_vals, wts):
    """Fixed-order reduction of f * w."""
    return np.sum(np.asarray(f_vals) * wts)


def measure_integrate(nu, f, scheme):
    """Integrate ``f`` (vectorized over (m, d) arrays) against ``nu``.

    Returns ``(value, err)``.
    """
    mass = nu.mass()
    rel = getattr(scheme, "rel_tol", 0.0)
    if mass == 0.0:
        if rel:
            raise DegenerateMeasureError("zero-mass measure with a relative tolerance")
        return 0.0, 0.0
    if isinstance(nu, FiniteAtoms):
        return complex(weighted_sum(f(nu.points), nu.weights)), 0.0
    if isinstance(scheme, AdaptiveScheme):
        if nu.dim != 1:
            raise InvalidInputError("adaptive scheme is one-dimensional")
        lo, hi, dens = _density_1d(nu)
        return adaptive_integrate(lambda x: f(x[:, None]) * dens(x), lo, hi, scheme)
    pts, wts = measure_nodes(nu, scheme)
    vals = np.asarray(f(pts))
    value = weighted_sum(vals, wts)
    if isinstance(scheme, MonteCarloScheme):
        n = vals.size
        scaled = vals * wts * n
        err = np.sqrt(np.var(scaled.real) + np.var(np.imag(scaled))) / np.sqrt(n)
        return value, float(err)
    cpts, cwts = measure_nodes(nu, scheme, coarse=True)
    coarse = weighted_sum(f(cpts), cwts)
    return value, float(abs(value - coarse))


# ---------------------------------------------------------------------------
# tube masses


def _tube_pieces_1d(dist, lo: float, hi: float, t: float, min_width: float = 1e-13,
                    max_nodes: int = 1 << 20):
    """Intervals of [lo, hi] where a 1-Lipschitz ``dist`` is <= t.

    Cells are classified with the Lipschitz tent bounds; cells on which the
    distance is affine with slope +-1 give exact crossings; everything else
    is bisected.
    """
    if hi <= lo:
        return np.empty((0, 2))
    n0 = int(min(max_nodes, max(64, np.ceil((hi - lo) / max(t, 1e-300)) ** 0.5)))
    x = np.linspace(lo, hi, n0 + 1)
    dx = dist(x[:, None])
    a, b, da, db = x[:-1], x[1:], dx[:-1], dx[1:]
    pieces = []
    for _ in range(80):
        if a.size == 0:
            break
        h = b - a
        full_in = 0.5 * (da + db + h) <= t
        full_out = 0.5 * (da + db - h) > t
        pieces.append(np.stack([a[full_in], b[full_in]], axis=1))
        rest = ~(full_in | full_out)
        a, b, da, db, h = a[rest], b[rest], da[rest], db[rest], h[rest]
        linear = (np.abs(db - da) >= h - 1e-9 * np.maximum(h, 1e-3)) | (h < min_width)
        la, lb, lda, ldb = a[linear], b[linear], da[linear], db[linear]
        if la.size:
            both_in = (lda <= t) & (ldb <= t)
            pieces.append(np.stack([la[both_in], lb[both_in]], axis=1))
            mixed = (lda <= t) != (ldb <= t)
            ma, mb, mda, mdb = la[mixed], lb[mixed], lda[mixed], ldb[mixed]
            xs = ma + (t - mda) / (mdb - mda) * (mb - ma)
            left_in = mda <= t
            pieces.append(np.stack([np.where(left_in, ma, xs), np.where(left_in, xs, mb)], axis=1))
        keep = ~linear
        a, b, da, db = a[keep], b[keep], da[keep], db[keep]
        if a.size == 0:
            break
        mid = 0.5 * (a + b)
        dm = dist(mid[:, None])
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
        da, db = np.concatenate([da, dm]), np.concatenate([dm, db])
    return np.concatenate(pieces) if pieces else np.empty((0, 2))


def tube_mass(nu, dist, t: float) -> float:
    """nu({x : dist(x) <= t}).

    One-dimensional boxes and Gaussian windows are handled by exact interval
    bookkeeping; other measures fall back to grid integration of the indicator.
    """
    if t < 0:
        raise InvalidInputError("t must be nonnegative")
    if isinstance(nu, FiniteAtoms):
        return float(np.sum(nu.weights[np.asarray(dist(nu.points)) <= t]))
    if isinstance(nu, TubeRestriction):
        if nu.distance_oracle is dist or nu.distance_oracle == dist:
            return tube_mass(nu.inner, dist, min(t, nu.radius))
    if nu.dim == 1 and isinstance(nu, (UniformBox, GaussianWindow)):
        lo, hi = _box_of(nu)
        if t == 0.0:
            return 0.0
        pieces = _tube_pieces_1d(dist, lo[0], hi[0], t)
        if isinstance(nu, UniformBox):
            return float(np.sum(pieces[:, 1] - pieces[:, 0]))
        return float(np.sum(nu.axis_mass(pieces[:, 0], pieces[:, 1])))
    val, _ = measure_integrate(nu, lambda p: (np.asarray(dist(p)) <= t).astype(float),
                               GridScheme(64))
    return float(np.real(val))
