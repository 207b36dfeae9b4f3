import math
import random
from fractions import Fraction

import pytest
import sympy

from stratsymp.coeffring import parse_poly
from stratsymp.errors import CoverGap, IdenticalPoints, InvalidStratification, NoFiberCoordinate, UnknownVariable
from stratsymp.sampling import random_poly
from stratsymp.stratified import (
    BumpSpec,
    ConeRadius,
    Distance,
    FibrationSpec,
    StratifiedModel,
    StratumRecord,
    bump_function,
    cone,
    cone_line_model,
    cotangent_growth_witness,
    fiber_constancy_membership,
    isomorphic,
    join,
    partition_of_unity,
    point,
    product,
    separates_points,
)

SPEC = FibrationSpec(3, 2, 1)
V = SPEC.variables


def g(text):
    return parse_poly(text, V)


# --- posets -----------------------------------------------------------------


def test_cone_depth():
    c = cone(point())
    assert c.depth == 1 and len(c) == 2
    assert cone(c).depth == 2
    assert c.by_id["apex"].dimension == 0


def test_product_depth_and_point():
    c = cone(point())
    assert isomorphic(product(c, point()), c)
    assert product(c, c).depth == 2
    for m1 in (point(), c, cone(c)):
        for m2 in (point(), c):
            assert product(m1, m2).depth == m1.depth + m2.depth
            assert cone(m1).depth == m1.depth + 1


def test_product_of_cones_is_cone_of_join():
    # c(L1 x L2 x [0,1]) = pt u L1 x (0,1) u L2 x (0,1) u L1 x L2 x (0,1)
    L1, L2 = point("a"), point("b")
    lhs = cone(join(L1, L2))
    assert len(lhs) == 4
    assert sorted(s.dimension for s in lhs.strata) == [0, 1, 1, 2]
    assert isomorphic(lhs, product(cone(L1), cone(L2)))


def test_invalid_orders_rejected():
    a, b = StratumRecord("a", 0), StratumRecord("b", 1, True)
    with pytest.raises(InvalidStratification):
        StratifiedModel([a, b], [("a", "b"), ("b", "a")])
    with pytest.raises(InvalidStratification):
        StratifiedModel([a, b], [("b", "a")])  # regular stratum must be maximal
    with pytest.raises(InvalidStratification):
        StratifiedModel([a, b], [("a", "zz")])


def test_transitive_closure():
    s = [StratumRecord("p", 0), StratumRecord("e", 1), StratumRecord("r", 2, True)]
    m = StratifiedModel(s, [("p", "e"), ("e", "r")])
    assert m.less("p", "r") and m.depth == 2 and m.depth_of("p") == 2


# --- fiber-constant functions -----------------------------------------------


def test_membership_examples():
    r = fiber_constancy_membership(g("x1*y1 + z1"), SPEC)
    assert r.member and r.c == g("z1")
    assert not fiber_constancy_membership(g("y1"), SPEC).member
    r = fiber_constancy_membership(g("x1*y1^3 + z1*z1"), SPEC)
    assert r.member and r.g[0] == g("y1^3")
    with pytest.raises(UnknownVariable):
        fiber_constancy_membership(parse_poly("q", ("q",)), SPEC)


def _oracle_member(p):
    # substitute x~ = 0 and inspect the y~-degree
    x1, y1, z1 = sympy.symbols("x1 y1 z1")
    expr = sympy.sympify(str(p).replace("^", "**")).subs(x1, 0)
    return sympy.Poly(expr, y1, z1).degree(y1) <= 0 if expr != 0 else True


def test_membership_random_against_oracle():
    r = random.Random(77)
    for _ in range(50):
        p = random_poly(r, V, 4, 5)
        res = fiber_constancy_membership(p, SPEC)
        assert res.member == _oracle_member(p)
        if res.member:
            assert res.reassemble(SPEC) == p


def _random_member(r):
    out = random_poly(r, ("z1",), 3, 2).with_variables(V)
    return out + g("x1") * random_poly(r, V, 3, 3)


def test_membership_subalgebra():
    r = random.Random(78)
    for _ in range(50):
        a, b = _random_member(r), _random_member(r)
        assert fiber_constancy_membership(a + b, SPEC).member
        assert fiber_constancy_membership(a * b, SPEC).member


def test_cotangent_witness():
    assert cotangent_growth_witness(SPEC, 1).rank == 1
    w = cotangent_growth_witness(SPEC, 8)
    assert w.rank == 8 and w.independent
    with pytest.raises(NoFiberCoordinate):
        cotangent_growth_witness(FibrationSpec(3, 1, 1), 3)


# --- bumps and partitions ---------------------------------------------------


def test_bump_values():
    f = bump_function(BumpSpec(1, rho_cL=ConeRadius("t")))
    assert f.at(0.0) == 1.0
    assert f.at(1.0) == 0.0
    assert f.at(0.5) == 0.0  # chi = 1 on the midband, so psi = 1 and f = 0
    assert f({"t": 0.0}) == 1.0


@pytest.mark.parametrize("eps", [Fraction(1), Fraction(1, 3), Fraction(5, 2)])
def test_bump_diagnostics(eps):
    diag = bump_function(BumpSpec(eps, rho_cL=ConeRadius("t"))).diagnostics()
    assert diag.center_value == 1.0
    assert diag.range_ok and diag.support_ok
    assert all(diag.chi_conditions.values()), diag.chi_conditions
    assert diag.max_seam_jump < 1e-6
    assert diag.passed


def test_bump_rejects_bad_epsilon():
    with pytest.raises(ValueError):
        BumpSpec(0)


def _grid(n=1000, hi=3.0):
    return [{"t": hi * i / (n - 1)} for i in range(n)]


def test_partition_two_regions():
    cover = [BumpSpec(1, rho_cL=ConeRadius("t")), BumpSpec(2, rho_B=Distance(("t",), (1.5,)))]
    pts = _grid()
    pou = partition_of_unity(cover, pts)
    for p in pts:
        vals = pou.values(p)
        assert all(v >= 0 for v in vals)
        assert abs(math.fsum(vals) - 1) <= 1e-12
        # support containment: f_i vanishes outside U_i
        for spec, v in zip(cover, vals):
            if spec.averaged(p) >= float(spec.epsilon):
                assert v == 0.0


def test_partition_single_region():
    pts = _grid(200, 1.0)
    pou = partition_of_unity([BumpSpec(10, rho_cL=ConeRadius("t"))], pts)
    assert all(v == [1.0] for v in map(pou.values, pts))


def test_partition_gap():
    cover = [BumpSpec(1, rho_cL=ConeRadius("t")), BumpSpec(Fraction(1, 2), rho_B=Distance(("t",), (3.0,)))]
    with pytest.raises(CoverGap):
        partition_of_unity(cover, _grid())


def test_separation():
    f = separates_points({"t": 0.2}, {"t": 2.0})
    assert abs(f({"t": 0.2})) <= 1e-9 and abs(f({"t": 2.0}) - 1) <= 1e-9
    f = separates_points({"t": 1.0}, {"t": 0.0}, cone_coordinate="t")
    assert f({"t": 1.0}) == 0.0 and f({"t": 0.0}) == 1.0
    f = separates_points({"t": 0.0}, {"t": 1e-3}, cone_coordinate="t")
    assert f({"t": 0.0}) == 0.0 and f({"t": 1e-3}) == 1.0
    with pytest.raises(IdenticalPoints):
        separates_points({"t": 1.0}, {"t": 1.0})


def test_cone_line_model():
    m = cone_line_model()
    assert m.depth == 1 and m.by_id["ray"].is_regular
