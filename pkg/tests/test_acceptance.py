"""Acceptance criteria, one test (and one PASS/FAIL line) each."""

import math
import os
import time

import numpy as np
import pytest

from fraczeta.cli.main import main
from fraczeta.complexdims import (ScalingSystem, lattice_poles, line_scan, peak_spacing,
                                  real_root, residue_estimate)
from fraczeta.geometry import AttractorDistance, IfsSystem, SimilarityMap, UniformBox, cantor_system
from fraczeta.minkowski import estimate_dims, log_grid, sample_tube
from fraczeta.ncalgebra import (Atom, AtomicState, Factor, ParamFamily, TraceState, nc_distance,
                                tensor_distance, tensor_distance_sup)
from fraczeta.ncfunc import (Conjugate, NcScene, NcWeight, Rotate, Scale, Translate, nc_zeta,
                             nc_zeta_derivative, nc_zeta_via_tube, transform_scene)
from fraczeta.presets import (cantor_scene, example2_scene, example3_scene, interval_scene,
                              point_scene)
from fraczeta.quadrature import AdaptiveScheme, GridScheme, MonteCarloScheme
from fraczeta.strings import cantor_string, cantor_zeta_closed
from fraczeta.zeta import (CommutativeScene, exact_string_value, interval_product_identity,
                           string_scene_tube, zeta_derivative, zeta_direct, zeta_via_tube)

from conftest import SCENES

LOG23 = math.log(2) / math.log(3)
PERIOD = 2 * math.pi / math.log(3)


def _line(report, ok, n, title, detail):
    report(f"{'PASS' if ok else 'FAIL'} [{n:2d}] {title}: {detail}")
    return ok


def _rel(a, b):
    return abs(a - b) / abs(b)


def _sigmas(a, b):
    return abs(a.value - b.value) / math.hypot(a.err, b.err)


def test_01_cantor_closed_form(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    sc = cantor_scene()
    pts = rng.uniform(0.7, 3.0, 20) + 1j * rng.uniform(-25, 25, 20)
    worst_exact = 0.0
    for s in pts:
        expected = cantor_zeta_closed(s) + 2 * 0.5 ** s / s
        worst_exact = max(worst_exact, _rel(exact_string_value(sc, s).value, expected))
    worst_direct = 0.0
    for s in (1.2, 2.0 + 2j, 1.5 + 10j, 2.2 + 10j, 2.8 + 0.5j):
        z = zeta_direct(sc.distance(), sc.weight, s, AdaptiveScheme(rel_tol=1e-4), 1, sc.hint)
        expected = cantor_zeta_closed(s) + 2 * 0.5 ** s / s
        worst_direct = max(worst_direct, _rel(z.value, expected))
    elapsed = time.perf_counter() - t0
    ok = worst_exact <= 1e-10 and worst_direct <= 1e-3 and elapsed < 5.0
    assert _line(report, ok, 1, "Cantor closed form",
                 f"exact-string rel {worst_exact:.2e} <= 1e-10, direct rel {worst_direct:.2e} "
                 f"<= 1e-3, {elapsed:.2f} s < 5 s")


def test_02_pole_lattice(report):
    lat = lattice_poles(ScalingSystem(((2, 1 / 3, 0),)), 1)
    errs = [abs(lat.D - LOG23), abs(lat.period - PERIOD),
            abs(real_root(ScalingSystem(((2, 1 / 3, -2),))) - (LOG23 - 2)),
            abs(real_root(ScalingSystem(((4, 1 / 3, -2),))) - (2 * LOG23 - 2))]
    ok = max(errs) <= 1e-10
    assert _line(report, ok, 2, "pole lattice",
                 f"max abs error over D, period, Ex2 and Ex3 roots {max(errs):.2e} <= 1e-10")


def test_03_residue(report):
    analytic = 2 ** (1 - LOG23) / (LOG23 * math.log(3))
    est = residue_estimate(cantor_zeta_closed, LOG23, 0.3, 128)
    rel = abs(est - analytic) / analytic
    assert _line(report, rel <= 0.01, 3, "residue at D",
                 f"contour {est.real:.6f} vs {analytic:.6f}, rel {rel:.2e} <= 1e-2")


def test_04_tube_identity(report):
    worst = 0.0
    for sc in (cantor_scene(),
               CommutativeScene(cantor_system(), UniformBox([-0.5], [1.5]), cantor_string(),
                                abscissa_hint=LOG23)):
        V, mass, delta, bp = string_scene_tube(sc.string)
        for s in (2.0, 2.5 - 1j, 2.8 + 0.5j):
            a = zeta_direct(sc.distance(), sc.weight, s, AdaptiveScheme(rel_tol=1e-9), 1, sc.hint)
            b = zeta_via_tube(V, mass, s, delta, ambient_dim=1, abscissa_hint=sc.hint,
                              breakpoints=bp)
            worst = max(worst, _rel(a.value, b.value))
    worst_sig = 0.0
    for make in (example2_scene, example3_scene):
        a = nc_zeta(make(), 1.5, MonteCarloScheme(20_000, 5))
        b = nc_zeta_via_tube(make(), 1.5, scheme=MonteCarloScheme(20_000, 6))
        worst_sig = max(worst_sig, _sigmas(a, b))
    ok = worst <= 1e-6 and worst_sig <= 3.0
    assert _line(report, ok, 4, "tube identity",
                 f"exact-string rel {worst:.2e} <= 1e-6, nc {worst_sig:.2f} sigma <= 3")


def test_05_derivative(report):
    h = 1e-4
    sc = cantor_scene()
    worst_c = 0.0
    for s in (2.0, 2.5 - 1j, 2.2 + 0.5j):
        d = zeta_derivative(sc.distance(), sc.weight, s, AdaptiveScheme(rel_tol=1e-6), 1, sc.hint)
        fd = (exact_string_value(sc, s + h).value - exact_string_value(sc, s - h).value) / (2 * h)
        worst_c = max(worst_c, _rel(d.value, fd))
    nc = example2_scene()
    grid = GridScheme(16)
    worst_n = 0.0
    for s in (1.5, 1.8 + 1j):
        d = nc_zeta_derivative(nc, s, grid).value
        fd = (nc_zeta(nc, s + h, grid).value - nc_zeta(nc, s - h, grid).value) / (2 * h)
        worst_n = max(worst_n, _rel(d, fd))
    ok = worst_c <= 1e-4 and worst_n <= 1e-3
    assert _line(report, ok, 5, "derivative vs central difference",
                 f"commutative rel {worst_c:.2e} <= 1e-4, nc grid rel {worst_n:.2e} <= 1e-3")


def test_06_minkowski(report):
    t0 = time.perf_counter()
    grid = log_grid(1e-6, 1e-1, 200)
    c = estimate_dims(sample_tube(cantor_scene(), grid))
    iv = estimate_dims(sample_tube(interval_scene(), grid))
    pt = estimate_dims(sample_tube(point_scene(), grid))
    elapsed = time.perf_counter() - t0
    ok = (0.61 <= c.lower_dim <= c.upper_dim <= 0.65
          and abs(iv.lower_dim - 1) <= 0.01 and abs(iv.upper_dim - 1) <= 0.01
          and abs(pt.lower_dim) <= 0.01 and abs(pt.upper_dim) <= 0.01
          and 0 < c.lower_content <= c.upper_content < math.inf and elapsed < 30)
    assert _line(report, ok, 6, "Minkowski estimation",
                 f"Cantor [{c.lower_dim:.4f}, {c.upper_dim:.4f}] in [0.61, 0.65], contents "
                 f"[{c.lower_content:.3f}, {c.upper_content:.3f}], interval {iv.upper_dim:.4f}, "
                 f"point {pt.upper_dim:.4f}, {elapsed:.2f} s < 30 s")


def test_07_nc_distance_closed_form(report):
    rng = np.random.default_rng(7)
    a, b, c, p = rng.normal(scale=3.0, size=(4, 10_000))
    formula = np.abs(np.abs((a + c) / 2) - np.sqrt(((a - c) / 2) ** 2 + (b - p) ** 2))
    worst = 0.0
    worst_lapack = 0.0
    for i in range(a.size):
        X = np.array([[[a[i], b[i]], [b[i], c[i]]]])
        Y = np.array([[[0.0, p[i]], [p[i], 0.0]]])
        d = nc_distance(X, AtomicState((Atom(Y),)))
        worst = max(worst, abs(d - formula[i]))
        worst_lapack = max(worst_lapack, abs(d - np.abs(np.linalg.eigvalsh(X[0] - Y[0])).min()))
    ok = worst <= 1e-12 and worst_lapack <= 1e-12
    assert _line(report, ok, 7, "nc distance closed form",
                 f"max abs vs formula {worst:.2e}, vs LAPACK {worst_lapack:.2e} <= 1e-12 (10^4 draws)")


def _reduction_pairs(rng):
    out = [(cantor_system(), UniformBox([-0.5], [1.5]), 1.5),
           (cantor_system(3.0), UniformBox([-0.5], [3.5]), 2.0 + 1j)]
    while len(out) < 10:
        m = int(rng.integers(2, 4))
        r = float(rng.uniform(0.15, 0.9 / m))
        shifts = np.sort(rng.uniform(0, 1 - r, m))
        flips = rng.random(m) < 0.3
        maps = tuple(SimilarityMap(r, [t], [[-1.0]] if f else None) for t, f in zip(shifts, flips))
        sysm = IfsSystem(maps)
        lo, hi = sysm.bounding_box
        out.append((sysm, UniformBox(lo - 0.4, hi + 0.6), complex(rng.uniform(1.2, 2.5), rng.uniform(-3, 3))))
    return out


def test_08_reduction(report):
    worst = 0.0
    scheme = GridScheme(48)
    for sysm, box, s in _reduction_pairs(np.random.default_rng(8)):
        a = zeta_direct(AttractorDistance(sysm), box, s, scheme, 1)
        tau = ParamFamily((Factor.ifs(sysm),), np.zeros((1, 1, 1)), np.ones((1, 1, 1, 1)))
        nu = NcWeight(box, np.zeros((1, 1, 1)), np.ones((1, 1, 1, 1)))
        b = nc_zeta(NcScene(tau, nu), s, scheme)
        worst = max(worst, _rel(b.value, a.value))
    assert _line(report, worst <= 1e-6, 8, "n = 1 reduction",
                 f"max rel over 10 scenes {worst:.2e} <= 1e-6")


def _rot(th):
    return np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])


def test_09_transformations(report):
    rng = np.random.default_rng(9)
    base = example2_scene()
    grid = GridScheme(16)
    s = 1.7 + 0.5j
    z0 = nc_zeta(base, s, grid).value
    X0 = rng.normal(size=(1, 2, 2))
    X0 = X0 + X0.transpose(0, 2, 1)
    tr = _rel(nc_zeta(transform_scene(base, Translate(X0)), s, grid).value, z0)
    k = 0.4
    sc_det = _rel(nc_zeta(transform_scene(base, Scale(k)), s, grid).value, k ** (s - 1) * z0)

    mc0 = nc_zeta(base, s, MonteCarloScheme(20_000, 1))
    mck = nc_zeta(transform_scene(base, Scale(k)), s, MonteCarloScheme(20_000, 2))
    sc_mc = abs(mck.value - k ** (s - 1) * mc0.value) / math.hypot(mck.err, abs(k ** (s - 1)) * mc0.err)
    mcu = nc_zeta(transform_scene(base, Conjugate(_rot(0.7))), s, MonteCarloScheme(20_000, 3))
    conj = _sigmas(mcu, mc0)

    atoms = []
    for _ in range(3):
        Y = rng.normal(size=(2, 2, 2))
        atoms.append(Atom(Y + Y.transpose(0, 2, 1), TraceState(), 1 / 3))
    E = np.zeros((6, 2, 2, 2))
    for i in range(2):
        E[3 * i, i, 0, 0] = 1
        E[3 * i + 1, i, 0, 1] = E[3 * i + 1, i, 1, 0] = 1
        E[3 * i + 2, i, 1, 1] = 1
    d2 = NcScene(AtomicState(tuple(atoms)),
                 NcWeight(UniformBox(-2 * np.ones(6), 2 * np.ones(6)), np.zeros((2, 2, 2)), E),
                 abscissa_hint=1.0)
    mc = MonteCarloScheme(4096, 4)
    rot = _rel(nc_zeta(transform_scene(d2, Rotate(_rot(1.1))), 2.5, mc).value,
               nc_zeta(d2, 2.5, mc).value)
    ok = tr <= 1e-6 and sc_det <= 1e-6 and sc_mc <= 3 and rot <= 1e-6 and conj <= 3
    assert _line(report, ok, 9, "transformation suite",
                 f"translation rel {tr:.1e}, scaling rel {sc_det:.1e} (<= 1e-6), scaling MC "
                 f"{sc_mc:.2f} sigma, rotation rel {rot:.1e}, conjugation {conj:.2f} sigma (<= 3)")


def test_10_tensor_bounds(report):
    rng = np.random.default_rng(10)
    worst_slack = math.inf
    worst_sep = 0.0
    for i in range(1000):
        k = 2 + i % 2
        taus, Xs = [], []
        for _ in range(k):
            n = int(rng.integers(1, 4))
            m = int(rng.integers(1, 4))
            atoms = []
            for _ in range(m):
                Y = rng.normal(size=(1, n, n))
                atoms.append(Atom(Y + Y.transpose(0, 2, 1), TraceState(), 1 / m))
            taus.append(AtomicState(tuple(atoms)))
            X = rng.normal(size=(1, n, n)) * 2
            Xs.append(X + X.transpose(0, 2, 1))
        d = tensor_distance(Xs, taus)
        dsup = tensor_distance_sup(Xs, taus)
        worst_slack = min(worst_slack, d - dsup / math.sqrt(k), math.sqrt(k) * dsup - d)
        worst_sep = max(worst_sep, abs(d ** 2 - sum(nc_distance(X, t) ** 2 for X, t in zip(Xs, taus))))
    ok = worst_slack >= -1e-12 and worst_sep <= 1e-10
    assert _line(report, ok, 10, "tensor bounds",
                 f"min slack {worst_slack:.2e} >= -1e-12, separability abs {worst_sep:.2e} <= 1e-10")


def test_11_interval_product(report):
    lhs, rhs = interval_product_identity(cantor_string(), 0.0, 1.0, -1.0, 2.0, 1, 2.5)
    rel = _rel(lhs, rhs)
    assert _line(report, rel <= 1e-6, 11, "interval product identity",
                 f"lhs {lhs.real:.12f}, rhs {rhs.real:.12f}, rel {rel:.2e} <= 1e-6")


def test_12_line_scan_and_figure_grids(report, tmp_path):
    peaks, _, _ = line_scan(cantor_zeta_closed, LOG23 + 0.05, (0.0, 30.0), 0.01)
    spacing = peak_spacing(peaks)
    spacing_ok = abs(spacing - 5.719) <= 0.05 * 5.719
    finite = same = True
    for name in ("example2", "example3"):
        outs = []
        for run in range(2):
            out = tmp_path / f"{name}_{run}.csv"
            code = main(["grid", os.path.join(SCENES, f"{name}.json"), "--re", "0.7", "2", "6",
                         "--im", "0", "12", "6", "--samples", "20000", "--seed", "1",
                         "--out", str(out)])
            finite &= code == 0
            outs.append(out.read_bytes())
        same &= outs[0] == outs[1]
        rows = np.loadtxt(tmp_path / f"{name}_0.csv", delimiter=",", skiprows=1)
        finite &= bool(np.all(np.isfinite(rows)))
    ok = spacing_ok and finite and same
    assert _line(report, ok, 12, "line-scan periodicity",
                 f"peak spacing {spacing:.4f} within 5% of 5.719 ({len(peaks)} peaks); nc figure "
                 f"grids finite={finite} byte-identical={same}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
