"""Relative distance zeta functions of self-similar measures and of states on matrix tuples."""

from .complexdims import ScalingSystem, lattice_poles, real_root, residue_estimate
from .errors import (AccuracyError, DivergentAbscissaError, FraczetaError, InvalidInputError,
                     NearPoleError)
from .geometry import (AttractorDistance, GaussianWindow, IfsSystem, SimilarityMap, UniformBox,
                       attractor_distance, cantor_system)
from .minkowski import estimate_dims, log_grid, sample_tube
from .ncalgebra import NcPolynomial, nc_distance, tensor_distance
from .ncfunc import NcScene, nc_zeta, nc_zeta_via_tube, transform_scene
from .quadrature import AdaptiveScheme, GridScheme, MonteCarloScheme
from .strings import FractalString, cantor_string, cantor_zeta_closed, string_zeta_exact
from .zeta import CommutativeScene, ZetaValue, zeta_direct, zeta_via_tube

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "AdaptiveScheme", "AttractorDistance", "CommutativeScene",
    "DivergentAbscissaError", "FractalString", "FraczetaError", "GaussianWindow", "GridScheme",
    "IfsSystem", "InvalidInputError", "MonteCarloScheme", "NcPolynomial", "NcScene",
    "NearPoleError", "ScalingSystem", "SimilarityMap", "UniformBox", "ZetaValue",
    "attractor_distance", "cantor_string", "cantor_system", "cantor_zeta_closed",
    "estimate_dims", "lattice_poles", "log_grid", "nc_distance", "nc_zeta", "nc_zeta_via_tube",
    "real_root", "residue_estimate", "sample_tube", "string_zeta_exact", "tensor_distance",
    "transform_scene", "zeta_direct", "zeta_via_tube",
]
