"""Matrix tuples, noncommutative polynomials, states and spectral distances.

Everything here is real symmetric and finite dimensional.  A tuple
X = (X_1, ..., X_d) of n x n symmetric matrices is stored as an array of
shape (d, n, n); batches carry a leading axis, shape (m, d, n, n).

The spectral distance from X to a state tau is

    d(X, tau) = inf over (xi, Y) in spt(tau) of sqrt(inf spt E_{E(X - Y)}(xi, xi)),

with E(Z) = sum_i Z_i^2.  Because E(Z) = S^T S for the stacked (dn x n)
matrix S = [Z_1; ...; Z_d], the square root of its spectrum is the set of
singular values of S.  The kernels below work with singular values (or,
for d = 1, absolute eigenvalues of Z itself) so that small distances keep
full absolute precision instead of losing half the digits to a square root.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Sequence, Union

import numpy as np

from .errors import EmptySupportError, InvalidInputError
from .geometry import IfsSystem

SYM_TOL = 1e-12
SUPPORT_EPS = 1e-12
CLUSTER_TOL = 1e-10
JACOBI_TOL = 1e-13


# ---------------------------------------------------------------------------
# vector parts


@dataclass(frozen=True)
class TraceState:
    """Normalized trace: uniform weight 1/n over an orthonormal basis."""

    def expectation(self, G: np.ndarray) -> np.ndarray:
        n = G.shape[-1]
        return np.trace(G, axis1=-2, axis2=-1) / n


@dataclass(frozen=True)
class PureVector:
    """Vector state x -> <xi, x xi> for a unit vector xi."""

    vector: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=float).ravel()
        if not np.all(np.isfinite(v)) or abs(np.linalg.norm(v) - 1) > 1e-12:
            raise InvalidInputError("pure vector must be a finite unit vector")
        object.__setattr__(self, "vector", v)

    def expectation(self, G: np.ndarray) -> np.ndarray:
        v = self.vector
        return np.einsum("i,...ij,j->...", v, G, v)


VectorPart = Union[TraceState, PureVector]


# ---------------------------------------------------------------------------
# symmetric matrices and tuples


def as_sym(M, tol: float = SYM_TOL) -> np.ndarray:
    """Validate a real symmetric matrix."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidInputError("expected a square matrix")
    if not np.all(np.isfinite(M)):
        raise InvalidInputError("non-finite matrix entries")
    scale = max(np.max(np.abs(M)), 1.0) if M.size else 1.0
    if np.max(np.abs(M - M.T), initial=0.0) > tol * scale:
        raise InvalidInputError("matrix is not symmetric")
    return M


def as_tuple(X) -> np.ndarray:
    """Coerce a MatrixTuple or array to shape (d, n, n) (or batch (m, d, n, n))."""
    if isinstance(X, MatrixTuple):
        return X.mats
    X = np.asarray(X, dtype=float)
    if X.ndim == 2:
        X = X[None]
    if X.ndim not in (3, 4) or X.shape[-1] != X.shape[-2]:
        raise InvalidInputError("expected matrices of shape (d, n, n)")
    return X


@dataclass(frozen=True)
class MatrixTuple:
    """d symmetric n x n matrices with an optional operator-norm bound R."""

    mats: np.ndarray
    norm_bound: float | None = None

    def __post_init__(self):
        X = np.asarray(self.mats, dtype=float)
        if X.ndim == 2:
            X = X[None]
        if X.ndim != 3:
            raise InvalidInputError("MatrixTuple needs shape (d, n, n)")
        for Xi in X:
            as_sym(Xi)
        if self.norm_bound is not None:
            norms = np.abs(np.linalg.eigvalsh(X)).max(axis=-1)
            if np.any(norms > self.norm_bound * (1 + 1e-12)):
                raise InvalidInputError("entry exceeds the norm bound R")
        object.__setattr__(self, "mats", X)

    @property
    def d(self) -> int:
        return self.mats.shape[0]

    @property
    def n(self) -> int:
        return self.mats.shape[1]


def energy(X) -> np.ndarray:
    """E(X) = sum_i X_i^2 (works on batches)."""
    X = as_tuple(X)
    return np.einsum("...kij,...kjl->...il", X, X)


# ---------------------------------------------------------------------------
# eigenvalues


def jacobi_eigh(M, tol: float = JACOBI_TOL, max_sweeps: int = 60):
    """Cyclic Jacobi eigen-decomposition of a small symmetric matrix.

    Returns ascending eigenvalues and the matching orthonormal eigenvectors
    as columns.  Sweeps stop once the off-diagonal Frobenius norm is at most
    ``tol`` times the Frobenius norm of ``M``.
    """
    A = as_sym(M).copy()
    n = A.shape[0]
    V = np.eye(n)
    scale = max(np.linalg.norm(A), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.sqrt(2 * np.sum(np.triu(A, 1) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-3 * np.finfo(float).eps * scale:
                    A[p, q] = A[q, p] = 0.0
                    continue
                theta = (A[q, q] - A[p, p]) / (2 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1)) if theta != 0 else 1.0
                c = 1 / np.sqrt(t * t + 1)
                sn = t * c
                J = np.eye(n)
                J[p, p] = J[q, q] = c
                J[p, q], J[q, p] = sn, -sn
                A = J.T @ A @ J
                V = V @ J
    w = np.diag(A).copy()
    order = np.argsort(w)
    return w[order], V[:, order]


def _eig2(a, b, c):
    """Closed-form eigenvalues of [[a, b], [b, c]] (ascending)."""
    m = 0.5 * (a + c)
    r = np.hypot(0.5 * (a - c), b)
    return m - r, m + r


def sym_eigs(M) -> np.ndarray:
    """Ascending eigenvalues: closed form for n = 2, Jacobi for n <= 8."""
    M = as_sym(M)
    n = M.shape[0]
    if n == 1:
        return M[0].copy()
    if n == 2:
        return np.array(_eig2(M[0, 0], M[0, 1], M[1, 1]))
    if n <= 8:
        return jacobi_eigh(M)[0]
    return np.linalg.eigvalsh(M)


def _cluster_support(vals, weights, eps, cluster):
    """Smallest value whose cluster carries weight > eps; vals ascending."""
    groups = np.concatenate([[0], np.cumsum(np.diff(vals) > cluster)])
    for g in range(groups[-1] + 1):
        if weights[groups == g].sum() > eps:
            return float(vals[groups == g][0])
    raise EmptySupportError("vector has no weight on any eigenvalue")


def spectral_support_min(M, xi: VectorPart, eps: float = SUPPORT_EPS,
                         cluster: float = CLUSTER_TOL) -> float:
    """inf spt E_M(xi, xi) for a symmetric matrix M."""
    if isinstance(xi, TraceState):
        return float(sym_eigs(M)[0])
    M = as_sym(M)
    if M.shape[0] <= 8:
        w, V = jacobi_eigh(M)
    else:
        w, V = np.linalg.eigh(M)
    if xi.vector.size != M.shape[0]:
        raise InvalidInputError("vector size does not match the matrix")
    weights = (V.T @ xi.vector) ** 2
    return _cluster_support(w, weights, eps, cluster)


# ---------------------------------------------------------------------------
# batched distance kernels


def _stacked(Z):
    # (m, d, n, n) -> (m, d n, n)
    m, d, n, _ = Z.shape
    return Z.reshape(m, d * n, n)


def min_singular(Z: np.ndarray) -> np.ndarray:
    """sqrt(lambda_min(E(Z))) for a batch Z of shape (m, d, n, n)."""
    m, d, n, _ = Z.shape
    if d == 1 and n == 1:
        return np.abs(Z[:, 0, 0, 0])
    if d == 1 and n == 2:
        lo, hi = _eig2(Z[:, 0, 0, 0], Z[:, 0, 0, 1], Z[:, 0, 1, 1])
        return np.minimum(np.abs(lo), np.abs(hi))
    if d == 1:
        return np.abs(np.linalg.eigvalsh(Z[:, 0])).min(axis=-1)
    return np.linalg.svd(_stacked(Z), compute_uv=False)[:, -1]


def pure_floor(Z: np.ndarray, xi: np.ndarray, eps: float = SUPPORT_EPS,
               cluster: float = CLUSTER_TOL) -> np.ndarray:
    """sqrt(inf spt E_{E(Z)}(xi, xi)) for a batch of tuples."""
    m, d, n, _ = Z.shape
    if d == 1:
        mu, V = np.linalg.eigh(Z[:, 0])
        sig = np.abs(mu)
    else:
        _, sig, Vt = np.linalg.svd(_stacked(Z), full_matrices=False)
        V = np.swapaxes(Vt, -1, -2)
    w = np.einsum("mij,i->mj", V, xi) ** 2
    order = np.argsort(sig, axis=1)
    sig = np.take_along_axis(sig, order, axis=1)
    w = np.take_along_axis(w, order, axis=1)
    gid = np.concatenate([np.zeros((m, 1), int), np.cumsum(np.diff(sig, axis=1) > cluster, axis=1)],
                         axis=1)
    cw = np.zeros_like(w)
    for k in range(n):
        cw[:, k] = np.sum(w * (gid == gid[:, k:k + 1]), axis=1)
    ok = cw > eps
    if not np.all(ok.any(axis=1)):
        raise EmptySupportError("vector has no weight on any eigenvalue")
    first = np.argmax(ok, axis=1)
    return sig[np.arange(m), first]


def _floor(Z, xi: VectorPart):
    if isinstance(xi, TraceState):
        return min_singular(Z)
    return pure_floor(Z, xi.vector)


# ---------------------------------------------------------------------------
# polynomials


@dataclass(frozen=True)
class NcPolynomial:
    """sum of coeff * X_{w1} ... X_{wm}; words use 1-based indices."""

    terms: tuple

    def __post_init__(self):
        terms = []
        for coeff, word in self.terms:
            word = tuple(int(i) for i in word)
            if any(i < 1 for i in word):
                raise InvalidInputError("word indices start at 1")
            c = complex(coeff)
            if not np.isfinite(c):
                raise InvalidInputError("non-finite coefficient")
            terms.append((c, word))
        object.__setattr__(self, "terms", tuple(terms))

    @classmethod
    def identity(cls) -> "NcPolynomial":
        return cls(((1.0, ()),))

    @property
    def max_index(self) -> int:
        return max((max(w) for _, w in self.terms if w), default=0)

    @property
    def is_real(self) -> bool:
        return all(c.imag == 0 for c, _ in self.terms)

    def norm(self, R: float) -> float:
        """||g||_R = sum |coeff| R^len(word)."""
        return float(sum(abs(c) * R ** len(w) for c, w in self.terms))


def nc_poly_eval(g: NcPolynomial, X) -> np.ndarray:
    """g(X); X of shape (d, n, n) or a batch (m, d, n, n)."""
    X = as_tuple(X)
    d = X.shape[-3]
    if g.max_index > d:
        raise InvalidInputError(f"word index {g.max_index} exceeds d = {d}")
    n = X.shape[-1]
    dtype = float if g.is_real else complex
    out = np.zeros(X.shape[:-3] + (n, n), dtype=dtype)
    eye = np.broadcast_to(np.eye(n), out.shape)
    for c, word in g.terms:
        P = eye
        for i in word:
            P = P @ X[..., i - 1, :, :]
        out = out + (c.real if dtype is float else c) * P
    return out


# ---------------------------------------------------------------------------
# states


@dataclass(frozen=True)
class Atom:
    Y: np.ndarray
    xi: VectorPart = TraceState()
    weight: float = 1.0

    def __post_init__(self):
        Y = as_tuple(self.Y)
        if Y.ndim != 3:
            raise InvalidInputError("atom needs a single tuple")
        for Yi in Y:
            as_sym(Yi)
        if not self.weight > 0:
            raise InvalidInputError("atom weight must be positive")
        object.__setattr__(self, "Y", Y)


@dataclass(frozen=True)
class AtomicState:
    """Finitely many atoms (Y, xi, weight)."""

    atoms: tuple

    def __post_init__(self):
        if not self.atoms:
            raise InvalidInputError("empty support")
        shapes = {a.Y.shape for a in self.atoms}
        if len(shapes) != 1:
            raise InvalidInputError("atoms have inconsistent shapes")

    @property
    def mass(self) -> float:
        return float(sum(a.weight for a in self.atoms))

    @property
    def shape(self):
        return self.atoms[0].Y.shape

    @property
    def vector_parts(self):
        return {type(a.xi) for a in self.atoms}


@dataclass(frozen=True)
class Factor:
    """One-dimensional parameter factor as a 1D IFS (x -> r x + t)."""

    kind: str
    ratios: tuple
    shifts: tuple
    box: tuple

    @classmethod
    def ifs(cls, system: IfsSystem) -> "Factor":
        if system.ambient_dim != 1:
            raise InvalidInputError("factor IFS must be one-dimensional")
        r = tuple(float(m.ratio * m.rotation[0, 0]) for m in system.maps)
        t = tuple(float(m.translation[0]) for m in system.maps)
        lo, hi = system.bounding_box
        return cls("ifs", r, t, (float(lo[0]), float(hi[0])))

    @classmethod
    def interval(cls, lo: float, hi: float) -> "Factor":
        if not hi > lo:
            raise InvalidInputError("interval factor needs lo < hi")
        return cls("interval", (0.5, 0.5), (0.5 * lo, 0.5 * hi), (float(lo), float(hi)))

    @classmethod
    def dirac(cls, value: float) -> "Factor":
        return cls("dirac", (0.5,), (0.5 * value,), (float(value), float(value)))

    @property
    def fixed_points(self) -> np.ndarray:
        r, t = np.array(self.ratios), np.array(self.shifts)
        return t / (1 - r)

    def sample_points(self, depth: int) -> np.ndarray:
        """Points of the factor set at refinement depth (cell anchors)."""
        pts = self.fixed_points[:1]
        r, t = np.array(self.ratios), np.array(self.shifts)
        for _ in range(depth):
            pts = (r[:, None] * pts[None, :] + t[:, None]).ravel()
        return np.unique(pts)


@dataclass(frozen=True)
class ParamFamily:
    """Support {base + sum_j p_j B_j : p_j in factor_j} with one vector part."""

    factors: tuple
    base: np.ndarray
    directions: np.ndarray
    xi: VectorPart = TraceState()
    mass: float = 1.0

    def __post_init__(self):
        base = as_tuple(self.base)
        dirs = np.asarray(self.directions, dtype=float)
        if dirs.ndim == 3:
            dirs = dirs[:, None]
        if dirs.shape != (len(self.factors),) + base.shape:
            raise InvalidInputError("need one direction tuple per factor")
        for T in np.concatenate([base[None], dirs]):
            for Ti in T:
                as_sym(Ti)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "directions", dirs)

    @property
    def shape(self):
        return self.base.shape

    @property
    def lipschitz(self) -> np.ndarray:
        """||stack(B_j)||_op for each direction."""
        d, n, _ = self.base.shape
        return np.array([np.linalg.norm(B.reshape(d * n, n), 2) for B in self.directions])

    def embed(self, p: np.ndarray) -> np.ndarray:
        """Y(p) for parameters of shape (m, k) -> (m, d, n, n)."""
        p = np.atleast_2d(p)
        return self.base[None] + np.tensordot(p, self.directions, axes=(1, 0))


@dataclass(frozen=True)
class MixtureState:
    """sum_i a_i tau_i; the support is the union of supports with a_i > 0."""

    components: tuple

    def __post_init__(self):
        comps = tuple((float(a), st) for a, st in self.components)
        if not comps or any(a < 0 for a, _ in comps):
            raise InvalidInputError("mixture weights must be nonnegative")
        if not any(a > 0 for a, _ in comps):
            raise InvalidInputError("mixture has empty support")
        object.__setattr__(self, "components", comps)

    @property
    def mass(self) -> float:
        return float(sum(a * st.mass for a, st in self.components))

    @property
    def shape(self):
        return self.components[0][1].shape


NcState = Union[AtomicState, ParamFamily, MixtureState]


def vector_parts(tau) -> set:
    if isinstance(tau, AtomicState):
        return {type(a.xi) for a in tau.atoms}
    if isinstance(tau, ParamFamily):
        return {type(tau.xi)}
    out = set()
    for a, st in tau.components:
        if a > 0:
            out |= vector_parts(st)
    return out


def is_tracial(tau) -> bool:
    return vector_parts(tau) == {TraceState}


# ---------------------------------------------------------------------------
# distances


def _atomic_distance(X, tau: AtomicState):
    out = np.full(X.shape[0], np.inf)
    for a in tau.atoms:
        out = np.minimum(out, _floor(X - a.Y[None], a.xi))
    return out


def _det(M: np.ndarray) -> np.ndarray:
    if M.shape[-1] == 2:
        return M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]
    return np.linalg.det(M)


def _family_distance(X, fam: ParamFamily, tol: float, beam: int, max_depth: int):
    """Vectorized branch-and-bound over product cells of the parameter factors.

    Lower bound on a cell: sigma_min at the cell centre minus sum_j L_j h_j
    (sigma_min of the stacked matrix is 1-Lipschitz in operator norm).  Upper
    bound: the state's floor at a point of the factor sets inside the cell.
    For pure vector parts the trace floor is still a valid lower bound, but
    the pure floor is not Lipschitz, so refinement stops at cell size ``tol``.
    """
    m = X.shape[0]
    F = len(fam.factors)
    L = fam.lipschitz
    R = [np.array(f.ratios) for f in fam.factors]
    T = [np.array(f.shifts) for f in fam.factors]
    c0 = np.array([0.5 * (f.box[0] + f.box[1]) for f in fam.factors])
    h0 = np.array([0.5 * (f.box[1] - f.box[0]) for f in fam.factors])
    fp = np.array([f.fixed_points[0] for f in fam.factors])
    pure = isinstance(fam.xi, PureVector)
    # d = 1: a sign change of det over a connected slice of the support
    # certifies a singular X - Y, i.e. distance exactly 0
    conn = [j for j, f in enumerate(fam.factors) if f.kind == "interval"]
    certify = X.shape[1] == 1 and bool(conn) and not pure
    corners = np.array(list(iproduct((0.0, 1.0), repeat=len(conn))))

    ub = np.full(m, np.inf)
    owner = np.arange(m)
    A = np.ones((m, F))
    B = np.zeros((m, F))
    for _ in range(max_depth):
        if owner.size == 0:
            break
        cen = A * c0 + B
        half = np.abs(A) * h0
        slack = half @ L
        Zc = X[owner] - fam.embed(cen)
        lb = min_singular(Zc) - slack
        anchor = A * fp + B
        Za = X[owner] - fam.embed(anchor)
        cand = _floor(Za, fam.xi) if pure else min_singular(Za)
        np.minimum.at(ub, owner, cand)
        if certify:
            lo_c, hi_c = A * np.array([f.box[0] for f in fam.factors]) + B, \
                A * np.array([f.box[1] for f in fam.factors]) + B
            signs = []
            for cn in corners:
                pt = anchor.copy()
                pt[:, conn] = np.where(cn > 0, hi_c[:, conn], lo_c[:, conn])
                signs.append(np.sign(_det((X[owner] - fam.embed(pt))[:, 0])))
            signs = np.array(signs)
            hit = (signs.max(axis=0) > 0) & (signs.min(axis=0) < 0) | np.any(signs == 0, axis=0)
            ub[owner[hit]] = 0.0
        keep = (lb < ub[owner] - tol) & (slack > 0.5 * tol) & (ub[owner] > tol)
        owner, A, B, lb, half = owner[keep], A[keep], B[keep], lb[keep], half[keep]
        if owner.size == 0:
            break
        # best-first beam per point
        order = np.lexsort((lb, owner))
        owner, A, B, half = owner[order], A[order], B[order], half[order]
        starts = np.searchsorted(owner, owner, side="left")
        rank = np.arange(owner.size) - starts
        sel = rank < beam
        owner, A, B, half = owner[sel], A[sel], B[sel], half[sel]
        score = half * L
        split = score >= 0.5 * score.max(axis=1, keepdims=True)
        split &= score > 0
        for j in range(F):
            mask = split[:, j]
            if not mask.any():
                continue
            k = R[j].size
            so, sA, sB, ss = owner[mask], A[mask], B[mask], split[mask]
            so = np.repeat(so, k)
            sA = np.repeat(sA, k, axis=0)
            sB = np.repeat(sB, k, axis=0)
            ss = np.repeat(ss, k, axis=0)
            rr = np.tile(R[j], mask.sum())
            tt = np.tile(T[j], mask.sum())
            sB[:, j] = sA[:, j] * tt + sB[:, j]
            sA[:, j] = sA[:, j] * rr
            keepm = ~mask
            owner = np.concatenate([owner[keepm], so])
            A = np.concatenate([A[keepm], sA])
            B = np.concatenate([B[keepm], sB])
            split = np.concatenate([split[keepm], ss])
    return ub


def nc_distance(X, tau, tol: float = 1e-10, beam: int = 16, max_depth: int = 200,
                chunk: int = 4096):
    """d(X, tau) for one tuple (float) or a batch (array)."""
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    Xa = as_tuple(X)
    single = Xa.ndim == 3
    if single:
        Xa = Xa[None]
    if not np.all(np.isfinite(Xa)):
        raise InvalidInputError("non-finite matrix entries")
    if Xa.shape[1:] != tuple(tau.shape):
        raise InvalidInputError(f"tuple shape {Xa.shape[1:]} does not match state {tau.shape}")
    out = np.empty(Xa.shape[0])
    for s in range(0, Xa.shape[0], chunk):
        out[s:s + chunk] = _distance_batch(Xa[s:s + chunk], tau, tol, beam, max_depth)
    return float(out[0]) if single else out


def _distance_batch(X, tau, tol, beam, max_depth):
    if isinstance(tau, AtomicState):
        return _atomic_distance(X, tau)
    if isinstance(tau, ParamFamily):
        return _family_distance(X, tau, tol, beam, max_depth)
    if isinstance(tau, MixtureState):
        out = np.full(X.shape[0], np.inf)
        for a, st in tau.components:
            if a > 0:
                out = np.minimum(out, _distance_batch(X, st, tol, beam, max_depth))
        return out
    raise InvalidInputError(f"unsupported state {type(tau).__name__}")


# ---------------------------------------------------------------------------
# tensor products


def _kron_sum(mats: Sequence[np.ndarray]) -> np.ndarray:
    dims = [M.shape[0] for M in mats]
    total = int(np.prod(dims))
    K = np.zeros((total, total))
    for i, M in enumerate(mats):
        left = np.eye(int(np.prod(dims[:i])))
        right = np.eye(int(np.prod(dims[i + 1:])))
        K += np.kron(np.kron(left, M), right)
    return K


def _kron_vector(parts: Sequence[VectorPart], dims: Sequence[int]) -> VectorPart:
    if all(isinstance(p, TraceState) for p in parts):
        return TraceState()
    v = np.ones(1)
    for p, n in zip(parts, dims):
        if isinstance(p, TraceState):
            raise InvalidInputError("joint path needs all-trace or all-pure factors")
        v = np.kron(v, p.vector)
    return PureVector(v / np.linalg.norm(v))


def _check_factors(Xs, taus):
    if len(Xs) != len(taus) or not Xs:
        raise InvalidInputError("factor counts differ")
    return [as_tuple(X) for X in Xs]


def tensor_distance(Xs, taus, tol: float = 1e-10) -> float:
    """Distance to a product state: sqrt(inf over joint support of sum_i m_i).

    When every factor is atomic the joint support is enumerated and the
    spectral floor of the Kronecker sum of energies is taken at the product
    vector; otherwise the infimum separates over factors.
    """
    Xs = _check_factors(Xs, taus)
    if all(isinstance(t, AtomicState) for t in taus):
        best = np.inf
        for combo in iproduct(*[t.atoms for t in taus]):
            Es = [energy(X - a.Y) for X, a in zip(Xs, combo)]
            xi = _kron_vector([a.xi for a in combo], [E.shape[0] for E in Es])
            lam = spectral_support_min(_kron_sum(Es), xi)
            best = min(best, lam)
        return float(np.sqrt(max(best, 0.0)))
    parts = [nc_distance(X, t, tol) for X, t in zip(Xs, taus)]
    return float(np.sqrt(np.sum(np.square(parts))))


def tensor_distance_sup(Xs, taus, tol: float = 1e-10) -> float:
    """Auxiliary distance with sum of floors replaced by their maximum."""
    Xs = _check_factors(Xs, taus)
    return float(max(nc_distance(X, t, tol) for X, t in zip(Xs, taus)))
