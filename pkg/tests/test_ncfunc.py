import math

import numpy as np
import pytest

from fraczeta.errors import (DivergentAbscissaError, InvalidInputError, SeparationViolatedError,
                             UnsupportedTransformError)
from fraczeta.geometry import FiniteAtoms, UniformBox
from fraczeta.ncalgebra import (Atom, AtomicState, MixtureState, NcPolynomial, PureVector,
                                TraceState)
from fraczeta.ncfunc import (Conjugate, NcScene, NcWeight, Rotate, Scale, Translate,
                             decomposition_check, nc_nodes, nc_tube_estimate, nc_tube_functional,
                             nc_zeta,
                             nc_zeta_derivative, nc_zeta_via_tube, split_weight, sym2_weight,
                             transform_scene)
from fraczeta.presets import GAUSS_ALPHA, example2_scene, example3_scene
from fraczeta.quadrature import GridScheme, MonteCarloScheme

# frozen: (pi / alpha)^(3/2) for alpha = 1e-3
GAUSS_MASS = 176085.99228871055


def _rot(th):
    return np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])


def _atomic_scene(rng, xi=TraceState()):
    atoms = tuple(Atom((Y + Y.T)[None], xi, 0.5) for Y in rng.normal(size=(2, 2, 2)))
    nu = sym2_weight(UniformBox([-3, -3, -3], [3, 3, 3]))
    return NcScene(AtomicState(atoms), nu, abscissa_hint=0.0)


def test_mass_at_s_equal_d():
    assert GAUSS_MASS == pytest.approx((math.pi / GAUSS_ALPHA) ** 1.5, rel=1e-15)
    assert nc_zeta(example2_scene(), 1.0, GridScheme(16)).value == pytest.approx(GAUSS_MASS, rel=1e-10)


def test_node_cache_reused():
    sc = example2_scene()
    a = nc_nodes(sc, GridScheme(8))
    assert nc_nodes(sc, GridScheme(8)) is a
    z1 = nc_zeta(sc, 1.5, GridScheme(8)).value
    z2 = nc_zeta(sc, 1.5, GridScheme(8)).value
    assert z1 == z2


def test_odd_observable_integrates_to_zero():
    sc = example2_scene()
    sc.g = NcPolynomial(((1.0, (1,)),))
    sc._cache.clear()
    # at s = d the distance drops out and tr(X)/2 is odd under the centred Gaussian
    assert abs(nc_zeta(sc, 1.0, GridScheme(16)).value) < 1e-8 * GAUSS_MASS


def test_translation_invariance():
    sc = example2_scene()
    X0 = np.array([[[0.3, -1.0], [-1.0, 2.0]]])
    g = GridScheme(12)
    a = nc_zeta(sc, 1.7 + 0.5j, g).value
    b = nc_zeta(transform_scene(sc, Translate(X0)), 1.7 + 0.5j, g).value
    assert b == pytest.approx(a, rel=1e-10)


@pytest.mark.parametrize("k", [0.5, 3.0])
def test_scaling_law(k):
    sc = example2_scene()
    g = GridScheme(12)
    s = 1.6 - 1j
    a = nc_zeta(sc, s, g).value
    b = nc_zeta(transform_scene(sc, Scale(k)), s, g).value
    assert b == pytest.approx(k ** (s - 1) * a, rel=1e-10)


def test_conjugation_invariance_monte_carlo():
    sc = example2_scene()
    a = nc_zeta(sc, 1.8, MonteCarloScheme(20_000, 1))
    b = nc_zeta(transform_scene(sc, Conjugate(_rot(0.4))), 1.8, MonteCarloScheme(20_000, 2))
    assert abs(a.value - b.value) <= 3 * math.hypot(a.err, b.err)


def test_conjugation_needs_tracial_state():
    rng = np.random.default_rng(0)
    sc = _atomic_scene(rng, PureVector([1.0, 0.0]))
    with pytest.raises(UnsupportedTransformError):
        transform_scene(sc, Conjugate(_rot(0.3)))


def test_rotation_in_two_variables():
    rng = np.random.default_rng(1)
    atoms = tuple(Atom(Y + np.swapaxes(Y, 1, 2), TraceState(), 0.5) for Y in rng.normal(size=(2, 2, 2, 2)))
    E = np.zeros((6, 2, 2, 2))
    for i in range(2):
        E[3 * i, i, 0, 0] = 1
        E[3 * i + 1, i, 0, 1] = E[3 * i + 1, i, 1, 0] = 1
        E[3 * i + 2, i, 1, 1] = 1
    sc = NcScene(AtomicState(atoms), NcWeight(UniformBox(-2 * np.ones(6), 2 * np.ones(6)),
                                              np.zeros((2, 2, 2)), E), abscissa_hint=1.0)
    mc = MonteCarloScheme(2048, 3)
    a = nc_zeta(sc, 2.5, mc).value
    b = nc_zeta(transform_scene(sc, Rotate(_rot(0.9))), 2.5, mc).value
    assert b == pytest.approx(a, rel=1e-10)
    with pytest.raises(InvalidInputError):
        transform_scene(sc, Rotate(np.eye(3)))


def test_tube_route_matches_direct_on_shared_nodes():
    sc = example3_scene()
    g = GridScheme(12)
    for s in (1.5, 2.0 + 1.5j):
        a = nc_zeta(sc, s, g)
        b = nc_zeta_via_tube(sc, s, scheme=g, points=2000)
        assert abs(a.value - b.value) <= max(b.err, 1e-6 * abs(a.value))


def test_tube_functional_limits():
    sc = example2_scene()
    g = GridScheme(8)
    r = nc_nodes(sc, g).r
    assert nc_tube_functional(sc, 1.01 * r.max(), g) == pytest.approx(GAUSS_MASS, rel=1e-3)
    assert nc_tube_functional(sc, 0.5 * r.min(), g) == 0
    with pytest.raises(InvalidInputError):
        nc_tube_functional(sc, 0.0, g)


def test_derivative_against_difference_quotient():
    sc = example2_scene()
    g = GridScheme(12)
    h = 1e-4
    d = nc_zeta_derivative(sc, 1.7, g).value
    fd = (nc_zeta(sc, 1.7 + h, g).value - nc_zeta(sc, 1.7 - h, g).value) / (2 * h)
    assert d == pytest.approx(fd, rel=1e-6)


def test_zero_distances_need_floor():
    g = GridScheme(32)
    bare = example2_scene(floor=0.0)
    with pytest.raises(DivergentAbscissaError):
        nc_zeta(NcScene(bare.tau, bare.nu, abscissa_hint=None), 0.8, g)
    floored = example2_scene()
    z = nc_zeta(NcScene(floored.tau, floored.nu, distance_floor=1e-10), 0.8, g)
    assert np.isfinite(z.value)


def test_domain_refusal():
    with pytest.raises(DivergentAbscissaError):
        nc_zeta(example2_scene(), 0.5, GridScheme(8))


def test_split_weight_adds_up():
    nu = sym2_weight(UniformBox([-1, -1, -1], [1, 1, 1]))
    a, b = split_weight(nu)
    assert a.mass() + b.mass() == pytest.approx(nu.mass())
    atoms = NcWeight(FiniteAtoms(np.zeros((4, 3)), np.ones(4)), np.zeros((1, 2, 2)), sym2_weight(UniformBox([0] * 3, [1] * 3)).directions)
    c, d = split_weight(atoms)
    assert c.mass() + d.mass() == 4


def test_decomposition_report():
    rng = np.random.default_rng(2)
    far = np.array([[[40.0, 0.0], [0.0, 40.0]]])
    near = rng.normal(size=(1, 2, 2))
    near = near + np.swapaxes(near, 1, 2)
    tau1 = AtomicState((Atom(near),))
    tau2 = AtomicState((Atom(far),))
    split = MixtureState(((0.5, tau1), (0.5, tau2)))
    sc = NcScene(split, sym2_weight(UniformBox([-3] * 3, [3] * 3)), abscissa_hint=0.0)
    rep = decomposition_check(sc, split, [1.5, 2.0 + 1j], separation_eps=10.0, scheme=GridScheme(10))
    assert rep.linearity_ok
    assert rep.h_finite and rep.bound_ok
    assert rep.separation > 10.0
    # the far atom is never the nearer one, so the remainder vanishes
    assert max(abs(h) for h in rep.h) == 0.0
    with pytest.raises(SeparationViolatedError):
        decomposition_check(sc, split, [1.5], separation_eps=100.0, scheme=GridScheme(10))


def test_scene_validation():
    sc = example2_scene()
    with pytest.raises(InvalidInputError):
        NcScene(sc.tau, sc.nu, distance_floor=-1.0)
    with pytest.raises(InvalidInputError):
        NcScene(sc.tau, sc.nu, g=NcPolynomial(((1.0, (2,)),)))
    with pytest.raises(InvalidInputError):
        NcScene(MixtureState(((0.5, AtomicState((Atom(np.zeros((1, 2, 2))),))),)), sc.nu)


@pytest.fixture(scope="module")
def example2_shared():
    # one scene so the 10^6 Monte Carlo nodes are built once
    return example2_scene()


def test_monte_carlo_vs_grid(example2_shared):
    a = nc_zeta(example2_shared, 1.2, MonteCarloScheme(10 ** 6, 0))
    b = nc_zeta(example2_shared, 1.2, GridScheme(48))
    assert abs(a.value - b.value) <= 3 * math.hypot(a.err, b.err)


def test_tube_functional_monte_carlo_vs_grid(example2_shared):
    a = nc_tube_estimate(example2_shared, 0.2, MonteCarloScheme(10 ** 6, 0))
    b = nc_tube_estimate(example2_shared, 0.2, GridScheme(48))
    assert a.err > 0 and b.err > 0
    assert abs(a.value - b.value) <= 3 * math.hypot(a.err, b.err)
    # cumulative and compensated sums differ only in rounding
    assert nc_tube_functional(example2_shared, 0.2, MonteCarloScheme(10 ** 6, 0)) == pytest.approx(a.value, rel=1e-12)
