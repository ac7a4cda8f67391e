"""Ready-made scenes used by the CLI suites, scripts and tests."""

from __future__ import annotations

import numpy as np

from .complexdims import ScalingSystem
from .geometry import GaussianWindow, UniformBox, cantor_system, interval_system, point_system
from .ncalgebra import Factor, ParamFamily, TraceState
from .ncfunc import NcScene, sym2_weight
from .strings import CANTOR_DIM, ExplicitLengths, FractalString, cantor_string
from .zeta import CommutativeScene

GAUSS_ALPHA = 1e-3


def cantor_scene() -> CommutativeScene:
    """Cantor set scaled to [0, 3] with a uniform weight on [-1/2, 7/2]."""
    return CommutativeScene(cantor_system(3.0), UniformBox([-0.5], [3.5]),
                            cantor_string(1.0, 0.5), abscissa_hint=CANTOR_DIM, R=3.5)


def interval_scene() -> CommutativeScene:
    gapless = FractalString(ExplicitLengths(()), collar=0.5, span=1.0)
    return CommutativeScene(interval_system(0.0, 1.0), UniformBox([-0.5], [1.5]), gapless,
                            abscissa_hint=1.0, R=1.5)


def point_scene() -> CommutativeScene:
    atom = FractalString(ExplicitLengths(()), collar=1.0, span=0.0)
    return CommutativeScene(point_system([0.0]), UniformBox([-1.0], [1.0]), atom,
                            abscissa_hint=0.0, R=1.0)


def _offdiag():
    return np.array([[[[0.0, 1.0], [1.0, 0.0]]]])


def _gauss3():
    return sym2_weight(GaussianWindow(GAUSS_ALPHA, 3), TraceState())


def example2_scene(floor: float = 1e-10) -> NcScene:
    """Trace state on [[0, p], [p, 0]], p in the Cantor set."""
    tau = ParamFamily((Factor.ifs(cantor_system()),), np.zeros((1, 2, 2)), _offdiag())
    return NcScene(tau, _gauss3(), R=200.0, abscissa_hint=CANTOR_DIM, distance_floor=floor)


def example3_scene(floor: float = 1e-8) -> NcScene:
    """Trace state on [[q, p], [p, q]], p and q in the Cantor set."""
    dirs = np.concatenate([_offdiag(), np.eye(2)[None, None]])
    tau = ParamFamily((Factor.ifs(cantor_system()), Factor.ifs(cantor_system())),
                      np.zeros((1, 2, 2)), dirs)
    return NcScene(tau, _gauss3(), R=200.0, abscissa_hint=CANTOR_DIM, distance_floor=floor)


def example4_scene(floor: float = 1e-8) -> NcScene:
    """Trace state on [[q, p], [p, r]], p Cantor and q, r in [-1/2, 1/2]."""
    e00 = np.array([[[[1.0, 0.0], [0.0, 0.0]]]])
    e11 = np.array([[[[0.0, 0.0], [0.0, 1.0]]]])
    dirs = np.concatenate([_offdiag(), e00, e11])
    tau = ParamFamily((Factor.ifs(cantor_system()), Factor.interval(-0.5, 0.5),
                       Factor.interval(-0.5, 0.5)), np.zeros((1, 2, 2)), dirs)
    return NcScene(tau, _gauss3(), R=200.0, abscissa_hint=CANTOR_DIM, distance_floor=floor)


SCALING = {
    "cantor": ScalingSystem(((2.0, 1 / 3, 0.0),), "1 - 2 * 3^(-s)"),
    "example2": ScalingSystem(((2.0, 1 / 3, -2.0),), "1 - 2 * 3^(-s-2)"),
    "example3": ScalingSystem(((4.0, 1 / 3, -2.0),), "1 - 4 * 3^(-s-2)"),
    "example4": ScalingSystem(((2.0, 1 / 3, 0.0),), "1 - 2 * 3^(-s)"),
}

SCENES = {
    "cantor": cantor_scene,
    "interval": interval_scene,
    "point": point_scene,
    "example2": example2_scene,
    "example3": example3_scene,
    "example4": example4_scene,
}
