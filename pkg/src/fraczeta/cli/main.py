"""``fraczeta`` command line: eval, grid, tube, dim, poles, verify.

Exit codes: 0 ok, 1 verification failure (or other numerical failure),
2 bad input, 3 domain error (divergent abscissa or pole), 4 partial grid.
"""

from __future__ import annotations

import argparse
import io
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache

import numpy as np

from ..complexdims import lattice_poles
from ..errors import (DivergentAbscissaError, FraczetaError, InvalidInputError, NearPoleError)
from ..minkowski import TubeSamples, estimate_dims, log_grid, sample_tube
from ..ncfunc import NcScene, nc_nodes, nc_zeta, nc_zeta_via_tube
from ..quadrature import AdaptiveScheme, GridScheme, MonteCarloScheme
from ..strings import string_boundary_term, string_series_part
from ..zeta import (ZetaValue, closed_form_value, exact_string_value, string_scene_tube,
                    zeta_direct, zeta_via_tube)
from .scenes import load_scene, load_system, moran_system
from .verify import SUITES, run_suite

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_DOMAIN, EXIT_PARTIAL = 0, 1, 2, 3, 4
METHODS = ("auto", "exact-string", "closed-form", "direct", "tube")
CSV_HEADER = "re_s,im_s,re_zeta,im_zeta,abs,err"


def parse_s(text: str) -> complex:
    try:
        return complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise InvalidInputError(f"cannot parse s = {text!r}") from exc


def _fmt(x: float) -> str:
    return repr(float(x)) if np.isfinite(x) else "nan"


def default_jobs() -> int:
    env = os.environ.get("FRACZETA_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InvalidInputError(f"FRACZETA_JOBS={env!r} is not an integer")
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# evaluation


def _scheme(args, dim: int):
    if args.samples is not None:
        return MonteCarloScheme(args.samples, args.seed)
    if dim == 1 and not args.grid:
        return AdaptiveScheme(rel_tol=args.rtol)
    return GridScheme(args.nodes)


def _resolve_method(scene, method: str) -> str:
    if method != "auto":
        return method
    if isinstance(scene, NcScene):
        return "direct"
    return "exact-string" if scene.string is not None else "direct"


def evaluate(scene, s: complex, method: str, args) -> ZetaValue:
    method = _resolve_method(scene, method)
    if isinstance(scene, NcScene):
        scheme = MonteCarloScheme(args.samples, args.seed) if args.samples else GridScheme(args.nodes)
        if method == "direct":
            return nc_zeta(scene, s, scheme)
        if method == "tube":
            return nc_zeta_via_tube(scene, s, scheme=scheme)
        raise InvalidInputError(f"method {method} needs a commutative string scene")
    if method in ("exact-string", "closed-form", "tube") and scene.string is None:
        raise InvalidInputError(f"method {method} needs a scene with a 'string' description")
    if method == "exact-string":
        return exact_string_value(scene, s)
    if method == "closed-form":
        return closed_form_value(scene, s)
    if method == "tube":
        V, mass, delta, bp = string_scene_tube(scene.string)
        return zeta_via_tube(V, mass, s, delta, ambient_dim=1, abscissa_hint=scene.hint,
                             breakpoints=bp)
    scheme = _scheme(args, scene.ambient_dim)
    return zeta_direct(scene.distance(), scene.weight, s, scheme, scene.ambient_dim, scene.hint)


def cmd_eval(args) -> int:
    s = parse_s(args.s)
    loaded = load_scene(args.scene)
    scene = loaded.scene
    z = evaluate(scene, s, args.method, args)
    print(f"re_zeta: {_fmt(z.value.real)}")
    print(f"im_zeta: {_fmt(z.value.imag)}")
    print(f"err: {_fmt(z.err)}")
    print(f"method: {z.method}")
    hint = z.abscissa_hint
    print(f"abscissa_hint: {'none' if hint is None else _fmt(hint)}")
    if not isinstance(scene, NcScene) and scene.string is not None and s != 1:
        scale = scene.nu_mass() / scene.string.natural_mass
        series = scale * string_series_part(scene.string, s)
        boundary = scale * string_boundary_term(scene.string, s)
        print(f"series_part: {_fmt(series.real)} {_fmt(series.imag)}")
        print(f"boundary_term: {_fmt(boundary.real)} {_fmt(boundary.imag)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# grid


def _axis(spec, name):
    start, stop, count = float(spec[0]), float(spec[1]), spec[2]
    try:
        count = int(count)
    except ValueError:
        raise InvalidInputError(f"--{name} count must be an integer")
    if count < 1 or not start <= stop or not np.isfinite(start + stop):
        raise InvalidInputError(f"--{name} needs finite start <= stop and count >= 1")
    return np.linspace(start, stop, count)


@lru_cache(maxsize=4)
def _worker_scene(path):
    return load_scene(path).scene


def _grid_point(task):
    path, s, method, opts = task
    ns = argparse.Namespace(**opts)
    try:
        z = evaluate(_worker_scene(path), s, method, ns)
        return z.value, z.err
    except FraczetaError:
        return complex(np.nan, np.nan), np.nan


def grid_values(path, scene, points, method, args, jobs):
    """Values and errors at ``points``; failed points come back as nan."""
    method = _resolve_method(scene, method)
    opts = {k: getattr(args, k) for k in ("samples", "seed", "nodes", "rtol", "grid")}
    vals = np.full(len(points), complex(np.nan, np.nan))
    errs = np.full(len(points), np.nan)
    heavy = not isinstance(scene, NcScene) and method == "direct"
    if heavy and jobs > 1 and len(points) > 1:
        tasks = [(str(path), complex(s), method, opts) for s in points]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for i, (v, e) in enumerate(pool.map(_grid_point, tasks, chunksize=1)):
                vals[i], errs[i] = v, e
        return vals, errs
    # nc scenes share one node set across the grid, so evaluate in process
    for i, s in enumerate(points):
        try:
            z = evaluate(scene, complex(s), method, args)
            vals[i], errs[i] = z.value, z.err
        except FraczetaError:
            pass
    return vals, errs


def write_grid_csv(fh, points, vals, errs):
    fh.write(CSV_HEADER + "\n")
    for s, v, e in zip(points, vals, errs):
        ok = np.isfinite(v)
        row = [_fmt(s.real), _fmt(s.imag), _fmt(v.real) if ok else "nan",
               _fmt(v.imag) if ok else "nan", _fmt(abs(v)) if ok else "nan",
               _fmt(e) if ok else "nan"]
        fh.write(",".join(row) + "\n")


def cmd_grid(args) -> int:
    re_axis = _axis(args.re, "re")
    im_axis = _axis(args.im, "im")
    loaded = load_scene(args.scene)
    jobs = args.jobs if args.jobs is not None else default_jobs()
    if jobs < 1:
        raise InvalidInputError("--jobs must be at least 1")
    points = np.array([complex(x, y) for y in im_axis for x in re_axis])
    vals, errs = grid_values(args.scene, loaded.scene, points, args.method, args, jobs)
    buf = io.StringIO(newline="\n")
    write_grid_csv(buf, points, vals, errs)
    _write_out(args.out, buf.getvalue())
    failed = int(np.sum(~np.isfinite(vals)))
    if failed:
        print(f"{failed} of {points.size} grid points failed", file=sys.stderr)
    return EXIT_PARTIAL if failed > 0.01 * points.size else EXIT_OK


def _write_out(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise InvalidInputError(f"cannot write {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# tube, dim, poles, verify


def tube_samples(scene, grid) -> TubeSamples:
    if isinstance(scene, NcScene):
        nodes = nc_nodes(scene, GridScheme(32))
        V =np.maximum.accumulate(nodes.tube(grid).real)
        return TubeSamples(grid, V, scene.d)
    return sample_tube(scene, grid)


def cmd_tube(args) -> int:
    scene = load_scene(args.scene).scene
    grid = log_grid(args.tmin, args.tmax, args.points)
    samples = tube_samples(scene, grid)
    lines = ["t,volume"] + [f"{_fmt(t)},{_fmt(v)}" for t, v in zip(samples.t, samples.V)]
    _write_out(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_dim(args) -> int:
    scene = load_scene(args.scene).scene
    grid = log_grid(args.tmin, args.tmax, args.points)
    est = estimate_dims(tube_samples(scene, grid))
    print(f"lower_dim: {est.lower_dim:.6f}")
    print(f"upper_dim: {est.upper_dim:.6f}")
    print(f"lower_content: {est.lower_content:.6g}")
    print(f"upper_content: {est.upper_content:.6g}")
    print(f"window: {est.window[0]:.3g} {est.window[1]:.3g}")
    return EXIT_OK


def cmd_poles(args) -> int:
    if (args.system is None) == (args.from_scene is None):
        raise InvalidInputError("give either a system file or --from-scene")
    if args.count < 0:
        raise InvalidInputError("--count must be nonnegative")
    if args.system is not None:
        system = load_system(args.system)
    else:
        loaded = load_scene(args.from_scene)
        if loaded.scaling is not None:
            system = loaded.scaling
        elif isinstance(loaded.scene, NcScene):
            raise InvalidInputError("nc scene has no 'scaling' field")
        else:
            system = moran_system(loaded.scene)
    lat = lattice_poles(system, args.count)
    print(f"D = {lat.D:.10f}")
    if lat.lattice:
        print(f"period = {lat.period:.10f}")
        for p in lat.poles:
            print(f"pole {p.real:.10f} {p.imag:+.10f}i")
    else:
        print("period = none (nonlattice: real root only)")
    print(f"denominator: {lat.description or 'unspecified'}")
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = run_suite(args.suite, args.seed)
    for c in checks:
        print(c.line())
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


# ---------------------------------------------------------------------------


def _add_eval_opts(p):
    p.add_argument("--method", choices=METHODS, default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None, help="Monte Carlo samples (default: grid)")
    p.add_argument("--nodes", type=int, default=32, help="grid nodes per axis")
    p.add_argument("--rtol", type=float, default=1e-8, help="adaptive tolerance (1D direct)")
    p.add_argument("--grid", action="store_true", help="grid rule instead of adaptive in 1D")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fraczeta", description="Relative distance zeta functions.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate the zeta function at one point")
    p.add_argument("scene")
    p.add_argument("s", help="complex point such as 2+0i")
    _add_eval_opts(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grid", help="CSV grid of values over a rectangle")
    p.add_argument("scene")
    p.add_argument("--re", nargs=3, required=True, metavar=("START", "STOP", "COUNT"))
    p.add_argument("--im", nargs=3, required=True, metavar=("START", "STOP", "COUNT"))
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=int, default=None)
    _add_eval_opts(p)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("tube", help="CSV of the tube function on a log grid")
    p.add_argument("scene")
    p.add_argument("--tmin", type=float, default=1e-6)
    p.add_argument("--tmax", type=float, default=1e-1)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_tube)

    p = sub.add_parser("dim", help="Minkowski dimension and content estimates")
    p.add_argument("scene")
    p.add_argument("--tmin", type=float, default=1e-6)
    p.add_argument("--tmax", type=float, default=1e-1)
    p.add_argument("--points", type=int, default=200)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("poles", help="pole lattice of a scaling system")
    p.add_argument("system", nargs="?")
    p.add_argument("--from-scene", dest="from_scene", default=None)
    p.add_argument("--count", type=int, default=5)
    p.set_defaults(func=cmd_poles)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", choices=("all",) + tuple(SUITES), default="all")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors and 0 after --help
        return EXIT_INPUT if exc.code else 0
    try:
        return args.func(args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DivergentAbscissaError, NearPoleError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except FraczetaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
