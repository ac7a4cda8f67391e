"""Quadrature schemes, node rules and the counter-based sampler.

The schemes are plain dataclasses so they can be passed around as
configuration.  Grid rules are tensor products of one-dimensional rules;
``AdaptiveScheme`` is a one-dimensional global adaptive Gauss-Legendre
integrator; ``MonteCarloScheme`` draws from a Philox stream keyed by the
seed, with batch ``b`` using counter ``b`` so that sample ``i`` does not
depend on how many samples are requested or how batches are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AccuracyError, InvalidInputError


@dataclass(frozen=True)
class GridScheme:
    """Deterministic tensor grid with ``nodes`` points per axis.

    The error estimate is the difference against the grid with half as
    many nodes per axis.
    """

    nodes: int = 48
    order: int = 4

    def __post_init__(self):
        if self.nodes < 2 or self.order < 1:
            raise InvalidInputError("grid needs nodes >= 2 and order >= 1")


@dataclass(frozen=True)
class AdaptiveScheme:
    """Global adaptive Gauss-Legendre rule (one-dimensional measures only)."""

    rel_tol: float = 1e-10
    abs_tol: float = 0.0
    order: int = 7
    max_panels: int = 400_000
    initial_panels: int = 16


@dataclass(frozen=True)
class MonteCarloScheme:
    """Seeded Monte Carlo with ``samples`` draws."""

    samples: int = 100_000
    seed: int = 0
    batch: int = 1 << 15

    def __post_init__(self):
        if self.samples < 2:
            raise InvalidInputError("Monte Carlo needs at least 2 samples")


@lru_cache(maxsize=64)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=64)
def gauss_hermite(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for the weight exp(-x^2)."""
    x, w = np.polynomial.hermite.hermgauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_legendre(lo: float, hi: float, nodes: int, order: int = 4):
    """Composite Gauss-Legendre rule with about ``nodes`` points on [lo, hi]."""
    order = max(1, min(order, nodes))
    panels = max(1, nodes // order)
    edges = np.linspace(lo, hi, panels + 1)
    x, w = gauss_legendre(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    pts = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wts = (half[:, None] * w[None, :]).ravel()
    return pts, wts


def tensor_rule(axes: list[tuple[np.ndarray, np.ndarray]]):
    """Tensor product of one-dimensional rules -> (points (m, d), weights (m,))."""
    grids = np.meshgrid(*[a[0] for a in axes], indexing="ij")
    wgrids = np.meshgrid(*[a[1] for a in axes], indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    wts = np.ones(pts.shape[0])
    for wg in wgrids:
        wts = wts * wg.ravel()
    return pts, wts


def philox_uniforms(seed: int, count: int, dim: int, batch: int = 1 << 15) -> np.ndarray:
    """Uniforms of shape (count, dim); row i is a function of (seed, i) only."""
    nb = -(-count // batch)
    out = np.empty((nb * batch, dim))
    for b in range(nb):
        gen = np.random.Generator(np.random.Philox(key=int(seed), counter=b))
        out[b * batch:(b + 1) * batch] = gen.random((batch, dim))
    return out[:count]


def adaptive_integrate(f, a: float, b: float, scheme: AdaptiveScheme):
    """Integrate a vectorized ``f`` over [a, b].

    Panels are bisected in order of decreasing error estimate (difference
    between the panel rule and the rule on its two halves) until the summed
    estimate meets the tolerance.  Returns ``(value, err)``.
    """
    if not b > a:
        return 0.0, 0.0
    x, w = gauss_legendre(scheme.order)

    def rule(lo, hi):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        pts = mid[:, None] + half[:, None] * x[None, :]
        vals = np.asarray(f(pts.ravel())).reshape(pts.shape)
        return (vals * w[None, :]).sum(axis=1) * half

    def halves(lo, hi, coarse):
        mid = 0.5 * (lo + hi)
        fine = rule(lo, mid), rule(mid, hi)
        return fine[0], fine[1], np.abs(fine[0] + fine[1] - coarse)

    edges = np.linspace(a, b, scheme.initial_panels + 1)
    lo, hi = edges[:-1], edges[1:]
    coarse = rule(lo, hi)
    left, right, err = halves(lo, hi, coarse)
    while True:
        total = (left + right).sum()
        tot_err = err.sum()
        target = max(scheme.abs_tol, scheme.rel_tol * abs(total))
        if tot_err <= target:
            return total, float(tot_err)
        if lo.size >= scheme.max_panels:
            raise AccuracyError("adaptive quadrature hit the panel limit",
                                estimate=total, err=float(tot_err))
        order_idx = np.argsort(err)[::-1]
        csum = np.cumsum(err[order_idx])
        nsplit = int(np.searchsorted(csum, 0.5 * tot_err)) + 1
        nsplit = min(nsplit, scheme.max_panels - lo.size)
        pick = order_idx[:max(nsplit, 1)]
        keep = np.ones(lo.size, bool)
        keep[pick] = False
        plo, phi = lo[pick], hi[pick]
        pmid = 0.5 * (plo + phi)
        nlo = np.concatenate([plo, pmid])
        nhi = np.concatenate([pmid, phi])
        ncoarse = np.concatenate([left[pick], right[pick]])
        if np.any(nhi - nlo <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(nlo))):
            raise AccuracyError("adaptive quadrature panels underflowed",
                                estimate=total, err=float(tot_err))
        nleft, nright, nerr = halves(nlo, nhi, ncoarse)
        lo = np.concatenate([lo[keep], nlo])
        hi = np.concatenate([hi[keep], nhi])
        left = np.concatenate([left[keep], nleft])
        right = np.concatenate([right[keep], nright])
        err = np.concatenate([err[keep], nerr])
