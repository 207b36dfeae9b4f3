import json
import random
from fractions import Fraction

import pytest

from stratsymp.coeffring import Poly, poly_reduce
from stratsymp.errors import ModelFileError, UnknownModel
from stratsymp.models import builtin_names, dumps_entry, entry_from_dict, export_entry, load_builtin, load_model
from stratsymp.symplectic import poisson_bracket

NAMES = ["r2n(1)", "r2n(3)", "torus4", "kodaira_thurston", "cz2_cone", "sl2_cone"]


@pytest.mark.parametrize("name", NAMES)
def test_builtins_load_and_validate(name):
    e = load_builtin(name)
    assert e.name == name
    assert e.summary()
    if e.poisson:
        e.poisson.validate()
    if e.symplectic:
        from stratsymp.exterior import d
        assert d(e.symplectic.omega_form).is_zero()


def test_unknown_model():
    with pytest.raises(UnknownModel):
        load_builtin("klein_bottle")
    with pytest.raises(UnknownModel):
        load_builtin("r2n(0)")
    assert "cz2_cone" in builtin_names()


@pytest.mark.parametrize("name", NAMES)
def test_export_roundtrip(name, tmp_path):
    e = load_builtin(name)
    path = tmp_path / "m.json"
    path.write_text(dumps_entry(e))
    back = load_model(str(path))
    assert export_entry(back) == export_entry(e)


def test_malformed_model_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ModelFileError):
        load_model(str(bad))
    data = export_entry(load_builtin("cz2_cone"))
    data["poisson"]["brackets"][0][2] = "1 +"
    with pytest.raises(ModelFileError):
        entry_from_dict(data)
    data = export_entry(load_builtin("torus4"))
    data["schema_version"] = 99
    with pytest.raises(ModelFileError):
        entry_from_dict(data)
    data = export_entry(load_builtin("torus4"))
    data["omega"] = [[1, 2, "1"]]  # degenerate
    with pytest.raises(ModelFileError):
        entry_from_dict(json.loads(json.dumps(data)))


def test_cz2_pullback_random_points():
    # {u, v} evaluated through u = x^2, v = y^2, w = xy must equal 4xy
    e = load_builtin("cz2_cone")
    gens = e.poisson.generators
    uv = poisson_bracket(Poly.var("u", gens), Poly.var("v", gens), e.poisson)
    r = random.Random(5)
    for _ in range(100):
        x = Fraction(r.randint(-50, 50), r.randint(1, 9))
        y = Fraction(r.randint(-50, 50), r.randint(1, 9))
        assert uv.evaluate({"u": x * x, "v": y * y, "w": x * y}) == 4 * x * y


def test_sl2_relation_is_casimir():
    e = load_builtin("sl2_cone")
    gens = e.poisson.generators
    rel = e.poisson.presentation.relations[0]
    for g in gens:
        assert poly_reduce(poisson_bracket(Poly.var(g, gens), rel, e.poisson), e.poisson.presentation).is_zero()


def test_kt_standard_form_not_closed():
    from stratsymp.exterior import d, parse_form
    kt = load_builtin("kodaira_thurston").symplectic
    assert d(parse_form(kt.chart, "d[e3,e4]")) == parse_form(kt.chart, "d[e1,e2,e3]")
