"""Invariant suites behind ``fraczeta verify``.

Every check compares two independent routes (or a route and an exact
value) and reports the measured deviation against its tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from ..geometry import AttractorDistance, IfsSystem, SimilarityMap, UniformBox, cantor_system, interval_system
from ..ncalgebra import (Atom, AtomicState, Factor, ParamFamily, TraceState, nc_distance,
                         tensor_distance, tensor_distance_sup)
from ..ncfunc import (Conjugate, NcScene, NcWeight, Rotate, Scale, Translate, nc_zeta,
                      nc_zeta_via_tube, transform_scene)
from ..presets import cantor_scene, example2_scene
from ..quadrature import AdaptiveScheme, GridScheme, MonteCarloScheme
from ..strings import cantor_string
from ..zeta import (ZetaValue, interval_product_identity, string_scene_tube, zeta_direct,
                    zeta_via_tube)


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    tol: float
    kind: str = "rel"

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.measured) and self.measured <= self.tol)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name}: {self.kind} {self.measured:.3e} <= {self.tol:.1e}"


def _rel(a, b) -> float:
    return float(abs(a - b) / max(abs(b), 1e-300))


def _sigmas(a, b) -> float:
    """|a - b| in units of the combined error (ZetaValue-like inputs)."""
    diff = abs(a.value - b.value)
    sig = np.hypot(a.err, b.err)
    if sig == 0:
        return 0.0 if diff == 0 else np.inf
    return float(diff / sig)


# ---------------------------------------------------------------------------


def suite_tube(seed: int = 0) -> list[Check]:
    out = []
    sc = cantor_scene()
    V, mass, delta, bp = string_scene_tube(sc.string)
    worst = 0.0
    for s in (2.0, 2.5 - 1j, 2.8 + 0.5j):
        a = zeta_direct(sc.distance(), sc.weight, s, AdaptiveScheme(rel_tol=1e-9), 1, sc.hint)
        b = zeta_via_tube(V, mass, s, delta, ambient_dim=1, abscissa_hint=sc.hint, breakpoints=bp)
        worst = max(worst, _rel(a.value, b.value))
    out.append(Check("tube/cantor direct vs tube", worst, 1e-6))

    nc = example2_scene()
    s = 1.5
    a = nc_zeta(nc, s, MonteCarloScheme(20_000, seed))
    b = nc_zeta_via_tube(replace(nc, _cache={}), s, scheme=MonteCarloScheme(20_000, seed + 1))
    out.append(Check("tube/example2 direct vs tube (independent MC)", _sigmas(a, b), 3.0, "sigma"))
    return out


def _d2_scene(rng, seed):
    """d = 2, n = 2 atomic trace state with a box weight on both tuple entries."""
    atoms = []
    for _ in range(3):
        Y = rng.normal(size=(2, 2, 2))
        atoms.append(Atom(Y + Y.transpose(0, 2, 1), TraceState(), 1 / 3))
    E = np.zeros((6, 2, 2, 2))
    for i in range(2):
        E[3 * i, i, 0, 0] = 1
        E[3 * i + 1, i, 0, 1] = E[3 * i + 1, i, 1, 0] = 1
        E[3 * i + 2, i, 1, 1] = 1
    nu = NcWeight(UniformBox(-2 * np.ones(6), 2 * np.ones(6)), np.zeros((2, 2, 2)), E)
    return NcScene(AtomicState(tuple(atoms)), nu, seed=seed, abscissa_hint=1.0)


def suite_transform(seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    out = []
    base = example2_scene()
    grid = GridScheme(16)
    s = 1.7 + 0.5j
    z0 = nc_zeta(base, s, grid)

    X0 = rng.normal(size=(1, 2, 2))
    X0 = X0 + X0.transpose(0, 2, 1)
    zt = nc_zeta(transform_scene(base, Translate(X0)), s, grid)
    out.append(Check("transform/translation invariance (grid)", _rel(zt.value, z0.value), 1e-6))

    k = 1 / 3
    zk = nc_zeta(transform_scene(base, Scale(k)), s, grid)
    out.append(Check("transform/scaling k^(s-d) (grid)",
                     _rel(zk.value, k ** (s - 1) * z0.value), 1e-6))

    mc0 = nc_zeta(base, s, MonteCarloScheme(20_000, seed))
    mck = nc_zeta(transform_scene(base, Scale(k)), s, MonteCarloScheme(20_000, seed + 1))
    fac = k ** (s - 1)
    scaled = ZetaValue(fac * mc0.value, abs(fac) * mc0.err, mc0.method, mc0.s)
    out.append(Check("transform/scaling k^(s-d) (independent MC)", _sigmas(mck, scaled), 3.0, "sigma"))

    th = rng.uniform(0, 2 * np.pi)
    U = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    mcu = nc_zeta(transform_scene(base, Conjugate(U)), s, MonteCarloScheme(20_000, seed + 2))
    out.append(Check("transform/conjugation invariance, tracial (independent MC)",
                     _sigmas(mcu, mc0), 3.0, "sigma"))

    d2 = _d2_scene(rng, seed)
    scheme = MonteCarloScheme(4096, seed)
    s2 = 2.5
    r0 = nc_zeta(d2, s2, scheme)
    O = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    r1 = nc_zeta(transform_scene(d2, Rotate(O)), s2, scheme)
    out.append(Check("transform/rotation invariance (d=2)", _rel(r1.value, r0.value), 1e-6))
    return out


def _random_atomic(rng, n):
    atoms = []
    m = int(rng.integers(1, 4))
    for _ in range(m):
        Y = rng.normal(size=(1, n, n))
        atoms.append(Atom(Y + Y.transpose(0, 2, 1), TraceState(), 1 / m))
    return AtomicState(tuple(atoms))


def suite_tensor(seed: int = 0, count: int = 1000) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst_slack = np.inf
    worst_sep = 0.0
    for i in range(count):
        k = 2 + i % 2
        taus, Xs = [], []
        for _ in range(k):
            n = int(rng.integers(1, 4))
            taus.append(_random_atomic(rng, n))
            Xs.append(rng.normal(size=(1, n, n)) * 2)
        Xs = [X + X.transpose(0, 2, 1) for X in Xs]
        d = tensor_distance(Xs, taus)
        dsup = tensor_distance_sup(Xs, taus)
        slack = min(d - k ** -0.5 * dsup, k ** 0.5 * dsup - d)
        worst_slack = min(worst_slack, slack)
        parts = [nc_distance(X, t) for X, t in zip(Xs, taus)]
        worst_sep = max(worst_sep, abs(d ** 2 - sum(p ** 2 for p in parts)))
    return [Check("tensor/bounds k^-1/2 d_sup <= d <= k^1/2 d_sup", max(0.0, -worst_slack), 1e-12,
                  "violation"),
            Check("tensor/product-state separability d^2 = sum d_i^2", worst_sep, 1e-10, "abs")]


def reduction_scenes(rng) -> list[tuple[IfsSystem, UniformBox, float]]:
    """Ten one-dimensional attractors with weights and test exponents."""
    out = [(cantor_system(), UniformBox([-0.5], [1.5]), 1.5),
           (cantor_system(3.0), UniformBox([-0.5], [3.5]), 2.0),
           (interval_system(0.0, 1.0), UniformBox([-1.0], [2.0]), 1.8)]
    while len(out) < 10:
        m = int(rng.integers(2, 4))
        r = float(rng.uniform(0.15, 0.9 / m))
        shifts = np.sort(rng.uniform(0, 1 - r, m))
        maps = tuple(SimilarityMap(r, [t], None if rng.random() < 0.7 else [[-1.0]]) for t in shifts)
        sysm = IfsSystem(maps)
        lo, hi = sysm.bounding_box
        out.append((sysm, UniformBox(lo - 0.5, hi + 0.7), float(rng.uniform(1.3, 2.5))))
    return out


def suite_reduction(seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    scheme = GridScheme(64)
    for sysm, box, s in reduction_scenes(rng):
        a = zeta_direct(AttractorDistance(sysm), box, s, scheme, 1)
        tau = ParamFamily((Factor.ifs(sysm),), np.zeros((1, 1, 1)), np.ones((1, 1, 1, 1)))
        nu = NcWeight(box, np.zeros((1, 1, 1)), np.ones((1, 1, 1, 1)))
        b = nc_zeta(NcScene(tau, nu), s, scheme)
        worst = max(worst, _rel(b.value, a.value))
    return [Check("reduction/n=1 nc path equals commutative path (10 scenes)", worst, 1e-6)]


def suite_product(seed: int = 0) -> list[Check]:
    lhs, rhs = interval_product_identity(cantor_string(), 0.0, 1.0, -1.0, 2.0, 1, 2.5)
    return [Check("product/interval-product shift identity (k=1)", _rel(lhs, rhs), 1e-6)]


SUITES: dict[str, Callable[[int], list[Check]]] = {
    "tube": suite_tube,
    "transform": suite_transform,
    "tensor": suite_tensor,
    "reduction": suite_reduction,
    "product": suite_product,
}


def run_suite(name: str, seed: int = 0) -> list[Check]:
    names = list(SUITES) if name == "all" else [name]
    checks = []
    for n in names:
        checks.extend(SUITES[n](seed))
    return checks
