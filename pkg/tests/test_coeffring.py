import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stratsymp.coeffring import (
    AlgebraPresentation,
    Gen,
    normalized_step,
    parse_poly,
    poly_partial,
    poly_reduce,
    smooth_eval,
    smooth_invert,
    smooth_step,
)
from stratsymp.errors import GuardViolated, NonpositiveBound, ParseError, UnknownVariable
from stratsymp.sampling import random_poly

CZ2 = AlgebraPresentation(("u", "v", "w"), ("w^2 - u*v",), monomial_order=("grlex", ("w", "u", "v")))
SL2 = AlgebraPresentation(("e", "f", "h"), ("h^2 + 4*e*f",), monomial_order=("grlex", ("h", "e", "f")))


def P(text, pres=CZ2):
    return parse_poly(text, pres.generators)


def test_parse_and_print_roundtrip():
    p = parse_poly("3/2*u^2*w - v", ("u", "v", "w"))
    assert p.coefficient((2, 0, 1)) == Fraction(3, 2)
    assert parse_poly(str(p), ("u", "v", "w")) == p


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_poly("u +* v", ("u", "v"))
    with pytest.raises(UnknownVariable):
        parse_poly("q", ("u", "v"))


def test_reduce_examples():
    assert poly_reduce(P("w^2 - u*v"), CZ2).is_zero()
    assert poly_reduce(P("w^3"), CZ2) == P("u*v*w")
    assert poly_reduce(P("u + v"), CZ2) == P("u + v")


def test_reduce_unknown_variable():
    with pytest.raises(UnknownVariable):
        poly_reduce(parse_poly("z", ("z",)), CZ2)


@pytest.mark.parametrize("pres", [CZ2, SL2])
def test_reduce_idempotent_and_multiplicative(pres):
    r = random.Random(1)
    for _ in range(100):
        p = random_poly(r, pres.generators, 4, 4)
        q = random_poly(r, pres.generators, 3, 3)
        rp = poly_reduce(p, pres)
        assert poly_reduce(rp, pres) == rp
        assert poly_reduce(p * q, pres) == poly_reduce(rp * poly_reduce(q, pres), pres)
        # the remainder differs from p by a multiple of the relation
        diff = p - rp
        rel = pres.relations[0]
        assert poly_reduce(diff, pres).is_zero()
        assert not rp.terms or all(
            any(e[i] < l for i, l in enumerate(pres.leading(rel)[0])) for e in rp.terms
        )


def test_partial():
    v = ("x", "y")
    assert poly_partial(parse_poly("x^2*y", v), "x") == parse_poly("2*x*y", v)
    assert poly_partial(P("w^2 - u*v"), "w") == P("2*w")
    with pytest.raises(UnknownVariable):
        poly_partial(parse_poly("x^2*y", v), "z")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_partial_is_derivation(seed):
    r = random.Random(seed)
    v = ("x", "y", "z")
    p, q = random_poly(r, v, 3, 4), random_poly(r, v, 3, 4)
    for x in v:
        assert (p * q).partial(x) == p.partial(x) * q + p * q.partial(x)


def test_smooth_invert_examples():
    assert smooth_eval(smooth_invert(2, 1), {}) == 0.5
    f = 1 + Gen("x") * Gen("x")
    assert smooth_eval(smooth_invert(f, 1), {"x": 1.0}) == 0.5
    with pytest.raises(NonpositiveBound):
        smooth_invert(f, 0)
    with pytest.raises(GuardViolated):
        smooth_eval(smooth_invert(Gen("x"), 1), {"x": 0.5})


def test_smooth_invert_product_is_one():
    r = random.Random(7)
    f = 1 + Gen("x") * Gen("x") + Gen("y") * Gen("y")
    inv = smooth_invert(f, 1)
    for _ in range(100):
        pt = {"x": r.uniform(-3, 3), "y": r.uniform(-3, 3)}
        assert abs(smooth_eval(f, pt) * smooth_eval(inv, pt) - 1) < 1e-12


def test_smooth_step_values():
    assert smooth_eval(Gen("u"), {"u": 3}) == 3
    assert smooth_eval(smooth_step(Gen("t")), {"t": -1.0}) == 0.0
    assert smooth_eval(smooth_step(Gen("t")), {"t": 0.5}) == pytest.approx(math.exp(-2))
    t = Gen("t")
    for x in (0.1, 0.5, 0.73):
        pair = smooth_eval(normalized_step(t) + normalized_step(1 - t), {"t": x})
        s, s1 = math.exp(-1 / x), math.exp(-1 / (1 - x))
        assert abs(pair - 1) < 1e-15
        assert smooth_eval(normalized_step(t), {"t": x}) == pytest.approx(s / (s + s1), rel=1e-15)
    assert smooth_eval(normalized_step(t), {"t": 1.5}) == 1.0
    assert smooth_eval(normalized_step(t), {"t": 0.0}) == 0.0


def test_extended_precision_evaluation():
    t = Gen("t")
    # 1 - n(t) ~ exp(-400) near t = 1: invisible in doubles, resolved at 200 digits
    x = Fraction(1) - Fraction(1, 400)
    assert smooth_eval(normalized_step(t), {"t": float(x)}) == 1.0
    assert smooth_eval(normalized_step(t), {"t": x}, digits=200) < 1


def test_poly_substitute_and_evaluate():
    v = ("x", "y")
    u = parse_poly("x^2", v)
    p = parse_poly("u*v - 4", ("u", "v"))
    out = p.substitute({"u": u, "v": parse_poly("y^2", v)})
    assert out.with_variables(v) == parse_poly("x^2*y^2 - 4", v)
    assert out.evaluate({"x": Fraction(1, 2), "y": 2}) == -3
