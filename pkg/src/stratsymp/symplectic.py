"""Symplectic operators on model charts.

Conventions: for a constant antisymmetric matrix ``omega`` the 2-form is
``sum_{i<j} omega[i][j] e^i ^ e^j`` and the Poisson bivector is
``G = -omega^{-1}``, so that on ``omega = dx ^ dy`` we get ``{x, y} = 1``
(equivalently ``omega @ G.T`` is the identity).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from . import linalg
from .coeffring import AlgebraPresentation, Poly, as_fraction, poly_reduce
from .exterior import (
    COORDINATE,
    Form,
    ModelChart,
    contract_bivector,
    d,
    merge_sign,
    wedge,
    wedge_power,
)
from .errors import (
    ChartKindError,
    DegenerateForm,
    DimensionMismatch,
    InvalidPresentation,
    JacobiViolation,
    NonHomogeneous,
    NotClosed,
    UnknownVariable,
)


def standard_omega(dim: int) -> list[list[Fraction]]:
    """Matrix of ``sum_i dx_i ^ dy_i`` for coordinates ordered x1, y1, x2, y2, ..."""
    m = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(0, dim, 2):
        m[i][i + 1] = Fraction(1)
        m[i + 1][i] = Fraction(-1)
    return m


class SymplecticModel:
    """A chart with a constant symplectic form."""

    def __init__(self, chart: ModelChart, omega: Sequence[Sequence] | None = None, label: str = ""):
        self.chart = chart
        self.label = label or chart.label
        dim = chart.dimension
        if omega is None:
            omega = standard_omega(dim)
        omega = tuple(tuple(as_fraction(x) for x in row) for row in omega)
        if len(omega) != dim or any(len(r) != dim for r in omega):
            raise DimensionMismatch(f"omega must be {dim}x{dim}")
        for i in range(dim):
            for j in range(dim):
                if omega[i][j] != -omega[j][i]:
                    raise ValueError("omega must be antisymmetric")
        if not linalg.determinant(omega):
            raise DegenerateForm("omega is degenerate")
        self.omega = omega
        inv = linalg.inverse(omega)
        self.G = tuple(tuple(-inv[i][j] for j in range(dim)) for i in range(dim))
        self.omega_form = Form(
            chart, {(i, j): omega[i][j] for i in range(dim) for j in range(i + 1, dim) if omega[i][j]}
        )
        if not d(self.omega_form).is_zero():
            raise NotClosed(f"omega is not closed on {chart}: d(omega) = {d(self.omega_form)}")
        self.volume = wedge_power(self.omega_form, self.n).scale(Fraction(1, math.factorial(self.n)))
        if self.volume.is_zero():
            raise DegenerateForm("volume form vanishes")

    @property
    def n(self) -> int:
        return self.chart.n

    @property
    def dimension(self) -> int:
        return self.chart.dimension

    @cached_property
    def volume_coefficient(self) -> Fraction:
        return self.volume.terms[tuple(range(self.dimension))].constant_term()

    @cached_property
    def _star_tables(self) -> dict:
        # star(e_I) = sum_K det(G[K, I]) / (sign(K, K^c) * vol) e_{K^c}
        dim = self.dimension
        tables = {}
        for k in range(dim + 1):
            table = {}
            for I in itertools.combinations(range(dim), k):
                image = {}
                for K in itertools.combinations(range(dim), k):
                    g = linalg.determinant([[self.G[a][b] for b in I] for a in K]) if k else Fraction(1)
                    if not g:
                        continue
                    Kc = tuple(i for i in range(dim) if i not in K)
                    sign, _ = merge_sign(K, Kc)
                    image[Kc] = g / (sign * self.volume_coefficient)
                table[I] = image
            tables[k] = table
        return tables

    def __repr__(self):
        return f"SymplecticModel({self.label or self.chart})"


@dataclass(frozen=True)
class PoissonPresentation:
    """A Poisson bracket on a presented polynomial algebra.

    ``brackets`` maps generator pairs to polynomials; the antisymmetric
    partner of each entry is filled in automatically.
    """

    presentation: AlgebraPresentation
    brackets: Mapping = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        gens = self.presentation.generators
        table: dict = {}
        for (a, b), value in dict(self.brackets).items():
            for g in (a, b):
                if g not in gens:
                    raise UnknownVariable(f"{g!r} is not a generator")
            p = value if isinstance(value, Poly) else self.presentation.poly(str(value))
            p = poly_reduce(p, self.presentation)
            if a == b:
                if p:
                    raise InvalidPresentation(f"{{{a}, {a}}} must vanish")
                continue
            if (b, a) in table and table[(b, a)] != -p:
                raise InvalidPresentation(f"bracket table not antisymmetric at ({a}, {b})")
            table[(a, b)] = p
            table[(b, a)] = -p
        object.__setattr__(self, "brackets", table)
        self.validate()

    @property
    def generators(self) -> tuple[str, ...]:
        return self.presentation.generators

    def table(self, a: str, b: str) -> Poly:
        return self.brackets.get((a, b), Poly.zero(self.generators))

    def validate(self):
        gens = self.generators
        for a, b, c in itertools.combinations(gens, 3):
            ga, gb, gc = (Poly.var(x, gens) for x in (a, b, c))
            jac = (
                poisson_bracket(ga, poisson_bracket(gb, gc, self), self)
                + poisson_bracket(gb, poisson_bracket(gc, ga, self), self)
                + poisson_bracket(gc, poisson_bracket(ga, gb, self), self)
            )
            if poly_reduce(jac, self.presentation):
                raise JacobiViolation(f"Jacobi fails on ({a}, {b}, {c}): {jac}")
        for rel in self.presentation.relations:
            for g in gens:
                br = poisson_bracket(rel, Poly.var(g, gens), self)
                if br:
                    raise InvalidPresentation(
                        f"{{{rel}, {g}}} = {br} is not in the ideal: bracket not well defined"
                    )


def poisson_bracket(f: Poly, g: Poly, model) -> Poly:
    """``{f, g}`` for a symplectic model or a Poisson presentation."""
    if isinstance(model, PoissonPresentation):
        gens = model.generators
        for p in (f, g):
            unknown = p.used_variables() - set(gens)
            if unknown:
                raise UnknownVariable(f"{sorted(unknown)} are not generators")
        f, g = f.with_variables(gens), g.with_variables(gens)
        out = Poly.zero(gens)
        dfs = {a: f.partial(a) for a in gens}
        dgs = {b: g.partial(b) for b in gens}
        for (a, b), value in model.brackets.items():
            if dfs[a] and dgs[b]:
                out = out + dfs[a] * dgs[b] * value
        return poly_reduce(out, model.presentation)
    if model.chart.kind != COORDINATE:
        raise ChartKindError("Poisson brackets of functions need a coordinate chart")
    names = model.chart.names
    for p in (f, g):
        unknown = p.used_variables() - set(names)
        if unknown:
            raise UnknownVariable(f"{sorted(unknown)} are not coordinates of {model.chart}")
    f, g = f.with_variables(names), g.with_variables(names)
    dfs = [f.partial(v) for v in names]
    dgs = [g.partial(v) for v in names]
    out = Poly.zero(names)
    for i, row in enumerate(model.G):
        if not dfs[i]:
            continue
        for j, gij in enumerate(row):
            if gij and dgs[j]:
                out = out + (dfs[i] * dgs[j]).scale(gij)
    return out


def _df(chart: ModelChart, p: Poly) -> Form:
    return d(Form.function(chart, p))


def delta_decomposable(f0: Poly, fs: Sequence[Poly], model: SymplecticModel) -> Form:
    """The two-sum boundary formula applied to ``f0 df1 ^ ... ^ dfk``."""
    chart = model.chart
    k = len(fs)
    dfs = [_df(chart, f) for f in fs]

    def wedge_all(forms):
        out = Form.function(chart, 1)
        for w in forms:
            out = wedge(out, w)
        return out

    result = Form.zero(chart)
    for i in range(k):
        sign = 1 if i % 2 == 0 else -1  # (-1)^{(i+1)+1} with 1-based i+1
        br = poisson_bracket(f0, fs[i], model)
        if br:
            rest = wedge_all(dfs[:i] + dfs[i + 1 :])
            result = result + rest.scale(br).scale(sign)
    for i, j in itertools.combinations(range(k), 2):
        sign = 1 if (i + j) % 2 == 0 else -1  # (-1)^{(i+1)+(j+1)}
        br = poisson_bracket(fs[i], fs[j], model)
        dbr = _df(chart, br)
        if not dbr:
            continue
        rest = [w for m, w in enumerate(dfs) if m not in (i, j)]
        result = result + wedge_all([dbr] + rest).scale(f0).scale(sign)
    return result


def delta_formula(a: Form, model: SymplecticModel) -> Form:
    """Boundary operator from the explicit formula, expanding each term of ``a``
    as ``p dx_{i1} ^ ... ^ dx_{ik}`` with coordinate functions ``x_i``."""
    chart = model.chart
    if chart.kind != COORDINATE:
        raise ChartKindError("the explicit boundary formula needs coordinate functions")
    coords = [Poly.var(v, chart.names) for v in chart.names]
    result = Form.zero(chart)
    for idx, c in a.terms.items():
        result = result + delta_decomposable(c, [coords[i] for i in idx], model)
    return result


def delta_commutator(a: Form, model: SymplecticModel) -> Form:
    """``delta = i(G) d - d i(G)``."""
    return contract_bivector(model.G, d(a)) - d(contract_bivector(model.G, a))


delta = delta_commutator


def star(a: Form, model: SymplecticModel) -> Form:
    """Symplectic star: ``beta ^ star(a) = G^k(beta, a) vol`` for all k-forms beta."""
    if a.is_zero():
        return a
    k = a.degree()
    if k is None:
        raise NonHomogeneous(f"star needs a homogeneous form, got degrees {sorted(a.degrees())}")
    table = model._star_tables[k]
    out: dict = {}
    for idx, c in a.terms.items():
        for key, v in table[idx].items():
            s = c.scale(v)
            s = out[key] + s if key in out else s
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return Form._raw(a.chart, out)


def delta_via_star(a: Form, model: SymplecticModel) -> Form:
    """``(-1)^{k+1} star d star`` applied degree by degree."""
    result = Form.zero(a.chart)
    for k, part in a.components().items():
        term = star(d(star(part, model)), model)
        result = result + (term if k % 2 else -term)
    return result


def gram_pairing(beta: Form, alpha: Form, model: SymplecticModel) -> Poly:
    """``G^k(beta, alpha)``: determinant extension of the bivector pairing."""
    out = model.chart.coefficient(0)
    for K, cb in beta.terms.items():
        for I, ca in alpha.terms.items():
            if len(K) != len(I):
                continue
            g = linalg.determinant([[model.G[p][q] for q in I] for p in K]) if K else Fraction(1)
            if g:
                out = out + (cb * ca).scale(g)
    return out


def L(a: Form, model: SymplecticModel) -> Form:
    return wedge(model.omega_form, a)


def Lstar(a: Form, model: SymplecticModel) -> Form:
    return contract_bivector(model.G, a)


def A(a: Form, model: SymplecticModel) -> Form:
    """``[L*, L]``; acts on degree-k forms as ``(n - k)``."""
    return Lstar(L(a, model), model) - L(Lstar(a, model), model)


def L_power(a: Form, model: SymplecticModel, r: int) -> Form:
    for _ in range(r):
        a = L(a, model)
    return a


def Lstar_power(a: Form, model: SymplecticModel, r: int) -> Form:
    for _ in range(r):
        a = Lstar(a, model)
    return a
