"""Seeded random polynomials and forms for property checks."""
from __future__ import annotations

import random
from fractions import Fraction

from .coeffring import Poly
from .exterior import Form, ModelChart, basis_indices
from .homology import monomials

DEFAULT_SEED = 20240531


def rng(seed: int | None = None) -> random.Random:
    return random.Random(DEFAULT_SEED if seed is None else seed)


def random_rational(r: random.Random, size: int = 5) -> Fraction:
    num = r.randint(-size, size)
    while not num:
        num = r.randint(-size, size)
    return Fraction(num, r.randint(1, 3))


def random_poly(r: random.Random, variables, max_degree: int = 2, terms: int = 3) -> Poly:
    out = {}
    for _ in range(terms):
        deg = r.randint(0, max_degree)
        e = r.choice(monomials(len(variables), deg)) if variables else ()
        out[e] = out.get(e, 0) + random_rational(r)
    return Poly(variables, out)


def random_form(r: random.Random, chart: ModelChart, degree: int | None = None,
                max_total_degree: int = 6, terms: int = 3) -> Form:
    """Random form; homogeneous of ``degree`` if given.

    Coefficient degrees are capped so every term has total degree
    (polynomial plus form degree) at most ``max_total_degree``.
    """
    dim = chart.dimension
    out = Form.zero(chart)
    for _ in range(terms):
        k = r.randint(0, dim) if degree is None else degree
        idx = r.choice(basis_indices(dim, k))
        if chart.kind == "ce":
            c = Poly.constant(random_rational(r))
        else:
            c = random_poly(r, chart.names, max(0, max_total_degree - k), 2)
        out = out + Form(chart, {idx: c})
    return out
