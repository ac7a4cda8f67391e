"""Tube-function sampling and Minkowski dimension/content estimation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .strings import FractalString, string_tube_volume


@dataclass(frozen=True)
class TubeSamples:
    t: np.ndarray
    V: np.ndarray
    ambient_dim: int = 1
    period: float | None = None

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        V = np.asarray(self.V, dtype=float)
        if t.shape != V.shape or t.ndim != 1:
            raise InvalidInputError("t and V must be matching 1D arrays")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(V))):
            raise InvalidInputError("non-finite tube samples")
        if np.any(t <= 0) or np.any(np.diff(t) <= 0):
            raise InvalidInputError("t must be positive and strictly increasing")
        if np.any(np.diff(V) < -1e-12 * np.max(np.abs(V))):
            raise InvalidInputError("V must be nondecreasing")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "V", V)

    @property
    def pairs(self):
        return list(zip(self.t.tolist(), self.V.tolist()))


@dataclass(frozen=True)
class DimensionEstimate:
    lower_dim: float
    upper_dim: float
    lower_content: float
    upper_content: float
    window: tuple

    @property
    def nondegenerate(self) -> bool:
        return 0 < self.lower_content <= self.upper_content < np.inf


def log_grid(tmin: float, tmax: float, points: int) -> np.ndarray:
    if not 0 < tmin < tmax or points < 2:
        raise InvalidInputError("need 0 < tmin < tmax and at least 2 points")
    return np.geomspace(tmin, tmax, points)


def sample_tube(scene, grid) -> TubeSamples:
    """V(t) on ``grid``; exact for strings, geometric tube masses otherwise.

    ``scene`` is a FractalString or an object with ``string``, ``weight``,
    ``distance()`` and optional ``ratio`` attributes.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise InvalidInputError("grid must be positive and sorted")
    if isinstance(scene, FractalString):
        f = scene.family
        period = np.log(1 / f.ratio) if hasattr(f, "ratio") else None
        return TubeSamples(grid, string_tube_volume(scene, grid), 1, period)
    ratio = getattr(scene, "ratio", None)
    period = np.log(1 / ratio) if ratio else None
    if getattr(scene, "string", None) is not None:
        return TubeSamples(grid, string_tube_volume(scene.string, grid), 1, period)
    from .geometry import tube_mass
    dist = scene.distance()
    V = np.array([tube_mass(scene.weight, dist, t) for t in grid])
    V = np.maximum.accumulate(V)
    return TubeSamples(grid, V, scene.weight.dim, period)


def estimate_dims(samples: TubeSamples, period: float | None = None) -> DimensionEstimate:
    """Window-extrema estimates over the smallest sampled decade.

    With a declared ``period`` (log of the inverse scaling ratio) the slopes
    are taken across exactly one period and the window spans a whole number
    of periods, which removes the multiplicatively periodic oscillation.
    """
    t, V = samples.t, samples.V
    period = samples.period if period is None else period
    if t.size < 8 or t[-1] / t[0] < 100 * (1 - 1e-12):
        raise InvalidInputError("need at least 8 samples spanning 2 decades")
    if np.any(V <= 0):
        raise InvalidInputError("tube volumes must be positive on the grid")
    d = samples.ambient_dim
    lt, lv = np.log(t), np.log(V)
    if period:
        nper = max(1, int(np.floor(np.log(10.0) / period + 1e-12)))
        width = nper * period
        wmask = lt <= lt[0] + width + 1e-12
        starts = lt[wmask & (lt + period <= lt[-1] + 1e-12)]
        slopes = (np.interp(starts + period, lt, lv) - np.interp(starts, lt, lv)) / period
    else:
        width = np.log(10.0)
        wmask = lt <= lt[0] + width + 1e-12
        idx = np.nonzero(wmask)[0]
        idx = idx[idx + 1 < t.size]
        slopes = (lv[idx + 1] - lv[idx]) / (lt[idx + 1] - lt[idx])
    if slopes.size == 0:
        raise InvalidInputError("window holds no slope pairs")
    upper = float(np.clip(d - slopes.min(), 0, d))
    lower = float(np.clip(d - slopes.max(), 0, d))
    window = (float(t[0]), float(np.exp(lt[0] + width)))
    if upper - lower < 0.05:
        D = 0.5 * (lower + upper)
        vals = np.exp((D - d) * lt[wmask] + lv[wmask])
        lo_c, hi_c = float(vals.min()), float(vals.max())
    else:
        lo_c = hi_c = float("inf")
    return DimensionEstimate(lower, upper, lo_c, hi_c, window)
