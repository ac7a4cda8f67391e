import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fraczeta.errors import InvalidInputError
from fraczeta.geometry import (AttractorDistance, FiniteAtoms, GaussianWindow, IfsSystem,
                               SimilarityMap, UniformBox, attractor_distance,
                               attractor_distance_sup, cantor_system, interval_system,
                               measure_integrate, measure_nodes, point_system, product_system,
                               tube_mass)
from fraczeta.quadrature import GridScheme, MonteCarloScheme


def _cantor_level(k):
    """Left/right ends of the 2^k level-k Cantor intervals."""
    lo = np.array([0.0])
    for j in range(k):
        lo = np.concatenate([lo, lo + 2 * 3.0 ** -(j + 1)])
    return np.sort(lo), np.sort(lo) + 3.0 ** -k


def _brute_cantor(x, k=14):
    """Exact outside the level-k intervals, where the nearest set point is an endpoint."""
    lo, hi = _cantor_level(k)
    gap = np.maximum(lo[None] - x[:, None], x[:, None] - hi[None])
    return np.maximum(gap, 0).min(axis=1)


def test_cantor_distance_matches_brute_force():
    rng = np.random.default_rng(0)
    x = rng.uniform(-0.5, 1.5, 5000)
    ref = _brute_cantor(x)
    outside = ref > 0
    got = attractor_distance(cantor_system(), x[:, None])
    np.testing.assert_allclose(got[outside], ref[outside], rtol=0, atol=2e-10)
    assert np.all(got[~outside] <= 3.0 ** -14)


def test_endpoints_and_fixed_points_have_zero_distance():
    lo, hi = _cantor_level(6)
    d = attractor_distance(cantor_system(), np.concatenate([lo, hi])[:, None])
    assert np.all(d == 0.0)


def test_single_point_returns_float():
    d = attractor_distance(cantor_system(), 0.5)
    assert isinstance(d, float)
    assert d == pytest.approx(1 / 6, abs=1e-10)


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_distance_is_one_lipschitz(x, y):
    dist = AttractorDistance(cantor_system(3.0))
    dx, dy = dist(np.array([[x], [y]]))
    assert dx >= 0 and dy >= 0
    assert abs(dx - dy) <= abs(x - y) + 2e-10


@given(st.tuples(st.floats(-2, 2), st.floats(-2, 2)))
def test_point_distance_in_plane(p):
    sysm = point_system([0.3, -0.2])
    q = np.array(p)
    exact = np.hypot(q[0] - 0.3, q[1] + 0.2)
    assert attractor_distance(sysm, q) == pytest.approx(exact, abs=1e-10)


def test_sup_and_euclidean_distances_compare():
    sysm = product_system(cantor_system(), cantor_system())
    pts = np.random.default_rng(1).uniform(-0.5, 1.5, (400, 2))
    d2 = attractor_distance(sysm, pts)
    dinf = attractor_distance_sup(sysm, pts)
    assert np.all(dinf <= d2 + 1e-10)
    assert np.all(d2 <= np.sqrt(2) * dinf + 1e-10)


def test_product_attractor_distance_brute_force():
    sysm = product_system(cantor_system(), cantor_system())
    rng = np.random.default_rng(2)
    pts = rng.uniform(-0.5, 1.5, (300, 2))
    lo, hi = _cantor_level(7)
    ends = np.concatenate([lo, hi])
    grid = np.stack(np.meshgrid(ends, ends), -1).reshape(-1, 2)
    # corner points lie in the set, so they bound the distance from above
    upper = np.sqrt(((pts[:, None] - grid[None]) ** 2).sum(-1)).min(axis=1)
    got = attractor_distance(sysm, pts)
    assert np.all(got <= upper + 1e-10)
    assert np.all(got >= upper - np.sqrt(2) * 3.0 ** -7 - 1e-10)


def test_similarity_map_fixed_point():
    m = SimilarityMap(0.25, [0.6], [[-1.0]])
    fp = m.fixed_point()
    assert m.ratio * -fp[0] + 0.6 == pytest.approx(fp[0])


def test_bounding_box_contains_attractor():
    lo, hi = cantor_system(3.0, 1.0).bounding_box
    assert lo[0] <= 1.0 + 1e-12 and hi[0] >= 4.0 - 1e-12


def test_malformed_inputs():
    with pytest.raises(InvalidInputError):
        UniformBox([1.0], [0.0])
    with pytest.raises(InvalidInputError):
        GaussianWindow(-1.0)
    with pytest.raises(InvalidInputError):
        attractor_distance(cantor_system(), np.zeros((3, 2)))
    with pytest.raises(InvalidInputError):
        IfsSystem(())


def test_uniform_box_integration():
    box = UniformBox([-1.0, 0.0], [1.0, 3.0])
    val, _ = measure_integrate(box, lambda p: np.ones(len(p)), GridScheme(16))
    assert val == pytest.approx(6.0, rel=1e-13)


def test_gaussian_window_mass():
    g = GaussianWindow(0.5, 2)
    val, _ = measure_integrate(g, lambda p: np.ones(len(p)), GridScheme(48))
    assert val == pytest.approx(np.pi / 0.5, rel=1e-10)
    assert g.mass() == pytest.approx(np.pi / 0.5, rel=1e-10)


def test_monte_carlo_nodes_are_deterministic():
    box = UniformBox([0.0], [2.0])
    a = measure_nodes(box, MonteCarloScheme(1000, 3))
    b = measure_nodes(box, MonteCarloScheme(1000, 3))
    np.testing.assert_array_equal(a[0], b[0])
    assert a[1].sum() == pytest.approx(2.0)


@given(st.floats(1e-6, 0.49))
def test_interval_tube_mass(t):
    box = UniformBox([-0.5], [1.5])
    got = tube_mass(box, AttractorDistance(interval_system()), t)
    assert got == pytest.approx(1 + 2 * t, rel=1e-9)


def test_cantor_tube_mass_matches_string_count():
    box = UniformBox([-0.5], [1.5])
    dist = AttractorDistance(cantor_system())
    t = 0.01
    # gaps of length 3^-j (2^(j-1) of them) are fully covered when 3^-j <= 2t
    j = np.arange(1, 400)
    n, l = 2.0 ** (j - 1), 3.0 ** -j
    exact = 2 * t + np.sum(n * np.minimum(l, 2 * t))
    assert tube_mass(box, dist, t) == pytest.approx(exact, rel=1e-8)


def test_finite_atoms_tube_mass():
    nu = FiniteAtoms(np.array([[0.0], [0.2], [0.9]]), np.array([1.0, 2.0, 3.0]))
    dist = AttractorDistance(point_system([0.0]))
    assert tube_mass(nu, dist, 0.25) == 3.0
