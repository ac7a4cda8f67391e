import json
import os

import numpy as np
import pytest

from fraczeta.cli import main
from fraczeta.cli.main import parse_s
from fraczeta.cli.scenes import load_scene, load_system
from fraczeta.errors import InvalidInputError
from fraczeta.ncfunc import nc_zeta
from fraczeta.presets import SCALING, SCENES as PRESETS
from fraczeta.quadrature import GridScheme
from fraczeta.zeta import exact_string_value

from conftest import SCENES, SYSTEMS


def _scene(name):
    return os.path.join(SCENES, f"{name}.json")


def _fields(text):
    out = {}
    for line in text.strip().splitlines():
        k, v = line.split(":", 1)
        out[k.strip()] = v.strip()
    return out


@pytest.mark.parametrize("text, value", [
    ("2", 2 + 0j), ("2.5-1i", 2.5 - 1j), ("-0.5+3j", -0.5 + 3j), ("1e-1+2e0i", 0.1 + 2j), ("4i", 4j),
])
def test_parse_s(text, value):
    assert parse_s(text) == value


def test_parse_s_rejects_garbage():
    with pytest.raises(InvalidInputError):
        parse_s("two")


def test_eval_string_scene(capsys):
    assert main(["eval", _scene("cantor"), "2"]) == 0
    f = _fields(capsys.readouterr().out)
    assert float(f["re_zeta"]) == pytest.approx(0.5714285714285714, rel=1e-14)
    assert f["method"] == "exact-string"
    series = complex(*map(float, f["series_part"].split()))
    boundary = complex(*map(float, f["boundary_term"].split()))
    assert series.real == pytest.approx(9 / 28) and boundary.real == pytest.approx(0.25)


def test_eval_nc_mass(capsys):
    assert main(["eval", _scene("example2"), "1", "--nodes", "8"]) == 0
    f = _fields(capsys.readouterr().out)
    assert float(f["re_zeta"]) == pytest.approx(176085.99228871055, rel=1e-10)


def test_exit_codes(capsys, tmp_path):
    assert main(["eval", _scene("cantor"), "0.5"]) == 3
    assert main(["eval", _scene("cantor"), "nope"]) == 2
    assert main(["eval", str(tmp_path / "missing.json"), "2"]) == 2
    assert main(["frobnicate"]) == 2
    pole = "0.6309297535714574+5.719201734760255i"
    assert main(["eval", _scene("cantor"), pole, "--method", "closed-form"]) == 3
    capsys.readouterr()


def test_schema_rejects_unknown_field(tmp_path, capsys):
    doc = json.load(open(_scene("cantor")))
    doc["colour"] = "blue"
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    assert main(["eval", str(p), "2"]) == 2
    assert "colour" in capsys.readouterr().err


def test_grid_csv_layout(tmp_path):
    out = tmp_path / "g.csv"
    assert main(["grid", _scene("cantor"), "--re", "1", "2", "3", "--im", "0", "4", "2",
                 "--method", "closed-form", "--out", str(out)]) == 0
    raw = out.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "re_s,im_s,re_zeta,im_zeta,abs,err"
    rows = np.array([[float(x) for x in l.split(",")] for l in lines[1:]])
    assert rows.shape == (6, 6)
    # imaginary part is the outer loop
    np.testing.assert_array_equal(rows[:, 1], [0, 0, 0, 4, 4, 4])
    np.testing.assert_array_equal(rows[:, 0], [1, 1.5, 2] * 2)
    np.testing.assert_allclose(rows[:, 4], np.hypot(rows[:, 2], rows[:, 3]))


def test_single_point_grid_equals_eval(tmp_path, capsys):
    out = tmp_path / "one.csv"
    assert main(["grid", _scene("cantor"), "--re", "2.5", "2.5", "1", "--im", "-1", "-1", "1",
                 "--method", "direct", "--rtol", "1e-8", "--out", str(out)]) == 0
    row = out.read_text().splitlines()[1].split(",")
    assert main(["eval", _scene("cantor"), "2.5-1i", "--method", "direct", "--rtol", "1e-8"]) == 0
    f = _fields(capsys.readouterr().out)
    assert row[2] == f["re_zeta"] and row[3] == f["im_zeta"]


def test_grid_is_deterministic_across_jobs(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["grid", _scene("cantor"), "--re", "1.2", "2", "3", "--im", "0", "3", "2",
            "--method", "direct", "--grid", "--nodes", "64"]
    assert main(args + ["--jobs", "1", "--out", str(a)]) == 0
    assert main(args + ["--jobs", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_grid_partial_failure_exit_code(tmp_path, capsys):
    out = tmp_path / "p.csv"
    # the direct route refuses Re(s) = 0.5, left of the abscissa
    assert main(["grid", _scene("cantor"), "--re", "0.5", "2", "4", "--im", "0", "1", "2",
                 "--method", "direct", "--grid", "--nodes", "16", "--out", str(out)]) == 4
    body = out.read_text().splitlines()[1:]
    assert sum("nan" in l for l in body) == 2
    assert "failed" in capsys.readouterr().err


def test_tube_and_dim(capsys, tmp_path):
    out = tmp_path / "t.csv"
    assert main(["tube", _scene("interval"), "--points", "5", "--out", str(out)]) == 0
    rows = np.loadtxt(out, delimiter=",", skiprows=1)
    np.testing.assert_allclose(rows[:, 1], 1 + 2 * rows[:, 0])
    assert main(["dim", _scene("cantor")]) == 0
    f = _fields(capsys.readouterr().out)
    assert 0.61 <= float(f["lower_dim"]) <= float(f["upper_dim"]) <= 0.65


def test_poles_output(capsys):
    assert main(["poles", os.path.join(SYSTEMS, "cantor.json"), "--count", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "D = 0.6309297536"
    assert lines[1] == "period = 5.7192017348"
    assert sum(l.startswith("pole ") for l in lines) == 5
    assert main(["poles", "--from-scene", _scene("example2")]) == 0
    assert "D = -1.3690702464" in capsys.readouterr().out


def test_verify_product_suite(capsys):
    assert main(["verify", "--suite", "product"]) == 0
    assert capsys.readouterr().out.strip().splitlines()[-1] == "1/1 checks passed"


@pytest.mark.parametrize("name", ["cantor", "interval", "point"])
def test_commutative_json_matches_preset(name):
    a = load_scene(_scene(name)).scene
    b = PRESETS[name]()
    assert a.string == b.string and a.hint == b.hint
    assert exact_string_value(a, 2.2 + 1j).value == exact_string_value(b, 2.2 + 1j).value


@pytest.mark.parametrize("name", ["example2", "example3"])
def test_nc_json_matches_preset(name):
    a = load_scene(_scene(name)).scene
    b = PRESETS[name]()
    g = GridScheme(6)
    assert nc_zeta(a, 1.6 + 1j, g).value == nc_zeta(b, 1.6 + 1j, g).value
    assert a.distance_floor == b.distance_floor


@pytest.mark.parametrize("name", ["cantor", "example2", "example3", "example4"])
def test_systems_match_scaling_table(name):
    assert load_system(os.path.join(SYSTEMS, f"{name}.json")).terms == SCALING[name].terms
