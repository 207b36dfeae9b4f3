import random
from fractions import Fraction
from math import factorial

import pytest

from stratsymp.errors import DegreeAboveMiddle
from stratsymp.exterior import Form, parse_form
from stratsymp.lefschetz import (
    brute_force_constant,
    is_harmonic,
    is_primitive,
    is_primitive_dual,
    lef_decompose,
    lefschetz_constant,
    primitive_basis,
)
from stratsymp.models import load_builtin
from stratsymp.sampling import random_form
from stratsymp.symplectic import L_power, Lstar


def coord_model(n):
    return load_builtin(f"r2n({n})").symplectic


# frozen from the brute-force oracle (see test_constants_match_oracle)
CONSTANTS = {0: Fraction(1), 1: Fraction(1), 2: Fraction(1, 4), 3: Fraction(1, 36)}


def test_constants_table():
    for k, c in CONSTANTS.items():
        assert lefschetz_constant(k) == c == Fraction(1, factorial(k) ** 2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_constants_match_oracle(n):
    model = coord_model(n)
    for k in range(n + 1):
        assert brute_force_constant(model, k) == lefschetz_constant(k)


def random_primitive(r, model, degree):
    basis = primitive_basis(model, degree)
    out = Form.zero(model.chart)
    for b in basis:
        out = out + b.scale(r.randint(-3, 3))
    return out


@pytest.mark.parametrize("n", [1, 2, 3])
def test_decomposition_reconstructs(n):
    model = coord_model(n)
    r = random.Random(30 + n)
    for _ in range(100):
        k = r.randint(0, 2 * n)
        a = random_form(r, model.chart, k, k + 2)
        dec = lef_decompose(a, model)
        assert dec.reconstruct(model) == a
        for rr, comp in dec:
            assert comp.degree() == k - 2 * rr
            assert is_primitive(comp, model)


@pytest.mark.parametrize("n", [2, 3])
def test_decomposition_uniqueness(n):
    model = coord_model(n)
    r = random.Random(40 + n)
    for j in range(2 * n + 1):
        parts = {}
        for rr in range(0, j // 2 + 1):
            s = j - 2 * rr
            if s > n or s + rr > n:
                continue
            p = random_primitive(r, model, s)
            if not p.is_zero() and not L_power(p, model, rr).is_zero():
                parts[rr] = p
        if not parts:
            continue
        total = sum((L_power(p, model, rr) for rr, p in parts.items()), Form.zero(model.chart))
        assert dict(lef_decompose(total, model).components) == parts


def test_decompose_examples():
    model = coord_model(3)
    p = parse_form(model.chart, "d[x1,x2]")
    assert not L_power(p, model, 1).is_zero()
    assert lef_decompose(p, model).components == ((0, p),)
    assert lef_decompose(L_power(p, model, 1), model).components == ((1, p),)
    assert len(lef_decompose(Form.zero(model.chart), model)) == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_primitivity_tests_agree(n):
    model = coord_model(n)
    r = random.Random(50 + n)
    for _ in range(60):
        k = r.randint(0, n)
        a = random_form(r, model.chart, k, k + 2) if r.random() < 0.5 else random_primitive(r, model, k)
        assert is_primitive(a, model) == is_primitive_dual(a, model) == Lstar(a, model).is_zero()


def test_primitivity_above_middle():
    model = coord_model(1)
    with pytest.raises(DegreeAboveMiddle):
        is_primitive(model.volume, model)


def test_harmonic_examples():
    kt = load_builtin("kodaira_thurston").symplectic
    torus = load_builtin("torus4").symplectic
    assert is_harmonic(Form.function(torus.chart, 1), torus)
    assert is_harmonic(torus.volume, torus)
    assert not is_harmonic(parse_form(kt.chart, "d[e4]"), kt)
