"""Scene and scaling-system files: schema validation and object construction."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from ..complexdims import ScalingSystem
from ..errors import InvalidInputError
from ..geometry import (FiniteAtoms, GaussianWindow, IfsSystem, SimilarityMap, TubeRestriction,
                        UniformBox, AttractorDistance, cantor_system, interval_system,
                        point_system, product_system)
from ..ncalgebra import (Atom, AtomicState, Factor, NcPolynomial, ParamFamily, PureVector,
                         TraceState)
from ..ncfunc import NcScene, NcWeight, sym2_weight
from ..strings import ExplicitLengths, FractalString, GeometricFamily
from ..zeta import CommutativeScene


@lru_cache(maxsize=None)
def _schema(name: str) -> dict:
    text = resources.files("fraczeta.cli").joinpath(name).read_text()
    return json.loads(text)


def _read(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc


def _validate(doc: dict, name: str):
    try:
        jsonschema.validate(doc, _schema(name))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InvalidInputError(f"schema error at {where}: {exc.message}") from exc


def _finite(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("non-finite numeric field")
    return arr


def build_ifs(spec: dict) -> IfsSystem:
    kind = spec["type"]
    if kind == "cantor":
        return cantor_system(spec.get("scale", 1.0), spec.get("offset", 0.0))
    if kind == "interval":
        return interval_system(spec["lo"], spec["hi"])
    if kind == "point":
        return point_system(_finite(spec["coords"]))
    if kind == "product":
        systems = [build_ifs(f) for f in spec["factors"]]
        out = systems[0]
        for s in systems[1:]:
            out = product_system(out, s)
        return out
    maps = tuple(SimilarityMap(m["ratio"], _finite(m["translation"]),
                               None if "rotation" not in m else _finite(m["rotation"]))
                 for m in spec["maps"])
    box = spec.get("bounding_box")
    return IfsSystem(maps, None if box is None else (_finite(box[0]), _finite(box[1])))


def build_weight(spec: dict, dist=None):
    kind = spec["type"]
    if kind == "box":
        return UniformBox(_finite(spec["lo"]), _finite(spec["hi"]))
    if kind == "gaussian":
        box = spec.get("box")
        return GaussianWindow(spec["alpha"], spec.get("dim", 1),
                              None if box is None else (_finite(box[0]), _finite(box[1])))
    if kind == "atoms":
        return FiniteAtoms(_finite(spec["points"]), _finite(spec["weights"]))
    if dist is None:
        raise InvalidInputError("tube weights need a distance oracle")
    return TubeRestriction(build_weight(spec["inner"], dist), dist, spec["radius"])


def build_string(spec: dict) -> FractalString:
    if "lengths" in spec:
        fam = ExplicitLengths(tuple(_finite(spec["lengths"]).tolist()))
    else:
        fam = GeometricFamily(spec["base_length"], spec["ratio"], spec["multiplicity"])
    return FractalString(fam, spec["collar"], spec.get("span"))


def _vector(spec):
    if spec is None or spec == "trace":
        return TraceState()
    return PureVector(_finite(spec))


def build_polynomial(spec) -> NcPolynomial:
    if spec is None:
        return NcPolynomial.identity()
    terms = []
    for t in spec["terms"]:
        c = t["coeff"]
        c = complex(c[0], c[1]) if isinstance(c, list) else float(c)
        terms.append((c, tuple(t["word"])))
    return NcPolynomial(tuple(terms))


def _factor(spec: dict) -> Factor:
    if spec["type"] == "dirac":
        return Factor.dirac(spec["value"])
    if spec["type"] == "interval":
        return Factor.interval(spec["lo"], spec["hi"])
    return Factor.ifs(build_ifs(spec))


def build_state(spec: dict):
    if spec["type"] == "atoms":
        atoms = spec["atoms"]
        total = sum(a.get("weight", 1.0) for a in atoms)
        return AtomicState(tuple(Atom(_finite(a["Y"]), _vector(a.get("vector")),
                                      a.get("weight", 1.0) / total) for a in atoms))
    return ParamFamily(tuple(_factor(f) for f in spec["factors"]), _finite(spec["base"]),
                       _finite(spec["directions"]), _vector(spec.get("vector")))


def build_nc_weight(spec: dict) -> NcWeight:
    measure = build_weight(spec["measure"])
    xi = _vector(spec.get("vector"))
    if spec.get("embedding") == "sym2":
        return sym2_weight(measure, xi)
    return NcWeight(measure, _finite(spec["base"]), _finite(spec["directions"]), xi)


def scaling_from_spec(spec: dict) -> ScalingSystem:
    return ScalingSystem(tuple((t["coeff"], t["ratio"], t.get("shift", 0.0)) for t in spec["terms"]),
                         spec.get("description", ""))


@dataclass
class LoadedScene:
    doc: dict
    scene: object
    scaling: ScalingSystem | None

    @property
    def kind(self) -> str:
        return self.doc["kind"]


def scene_from_doc(doc: dict) -> LoadedScene:
    _validate(doc, "scene_schema.json")
    scaling = scaling_from_spec(doc["scaling"]) if "scaling" in doc else None
    if doc["kind"] == "commutative":
        system = build_ifs(doc["measure"])
        tol = doc.get("tol", 1e-10)
        weight = build_weight(doc["weight"], AttractorDistance(system, tol))
        if weight.dim != system.ambient_dim:
            raise InvalidInputError("weight and attractor dimensions differ")
        string = build_string(doc["string"]) if "string" in doc else None
        scene = CommutativeScene(system, weight, string, doc.get("ratio"), doc.get("abscissa_hint"),
                                 doc.get("R"), doc.get("seed", 0), tol)
    else:
        scene = NcScene(build_state(doc["measure"]), build_nc_weight(doc["weight"]),
                        build_polynomial(doc.get("observable")), doc.get("R"), doc.get("seed", 0),
                        doc.get("abscissa_hint"), doc.get("distance_floor", 0.0),
                        tol=doc.get("tol", 1e-10))
    return LoadedScene(doc, scene, scaling)


def load_scene(path) -> LoadedScene:
    return scene_from_doc(_read(path))


def load_system(path) -> ScalingSystem:
    doc = _read(path)
    _validate(doc, "system_schema.json")
    return scaling_from_spec(doc)


def moran_system(scene: CommutativeScene) -> ScalingSystem:
    """Scaling system {N, r, 0} of an IFS with a common ratio."""
    ratios = {round(m.ratio, 15) for m in scene.system.maps}
    if len(ratios) != 1:
        raise InvalidInputError("scene has no single-ratio decomposition; add a 'scaling' field")
    r = scene.system.maps[0].ratio
    return ScalingSystem(((float(len(scene.system.maps)), r, 0.0),),
                         f"self-similar decomposition: {len(scene.system.maps)} copies at ratio {r:.12g}")


def scene_dir() -> Path:
    return Path(__file__).resolve().parents[3] / "scenes"
