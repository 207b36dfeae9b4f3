"""Differential forms with polynomial coefficients over model charts.

Two chart kinds are supported.  A *coordinate* chart is ``R^{2n}`` with
named coordinates; forms there have polynomial coefficients and ``d`` is the
usual exterior derivative.  A *Chevalley-Eilenberg* (CE) chart is given by
structure constants ``c^k_{ij}`` with ``d e^k = -sum_{i<j} c^k_{ij} e^i ^ e^j``;
forms there have constant coefficients.

Wedge monomials are stored as strictly increasing index tuples (0-based);
permutation signs are resolved on construction so every form has a single
canonical representation.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .coeffring import Poly, as_fraction, parse_poly
from .errors import ChartMismatch, DimensionMismatch, JacobiViolation, ParseError

COORDINATE = "coordinate"
CE = "ce"

Index = tuple[int, ...]


def merge_sign(left: Index, right: Index) -> tuple[int, Index]:
    """Sign and sorted index of ``e^left ^ e^right``; sign 0 if they overlap."""
    if set(left) & set(right):
        return 0, ()
    inversions = 0
    for i in left:
        for j in right:
            if i > j:
                inversions += 1
    return (-1 if inversions & 1 else 1), tuple(sorted(left + right))


def sort_sign(indices: Sequence[int]) -> tuple[int, Index]:
    """Sign of the permutation sorting ``indices``; 0 on repeats."""
    if len(set(indices)) != len(indices):
        return 0, ()
    inversions = sum(1 for a, b in itertools.combinations(indices, 2) if a > b)
    return (-1 if inversions & 1 else 1), tuple(sorted(indices))


@dataclass(frozen=True)
class ModelChart:
    """A local model on which forms live.

    ``structure`` holds CE structure constants as ``((k, i, j), value)``
    pairs with ``i < j`` (0-based) and is empty for coordinate charts.
    """

    kind: str
    names: tuple[str, ...]
    structure: tuple = ()
    label: str = field(default="", compare=False)

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if self.kind not in (COORDINATE, CE):
            raise ValueError(f"unknown chart kind {self.kind!r}")
        if not names or len(names) % 2:
            raise DimensionMismatch(f"chart dimension must be even and positive, got {len(names)}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate names {names}")
        if self.kind == COORDINATE and self.structure:
            raise ValueError("coordinate charts carry no structure constants")
        if self.kind == CE:
            object.__setattr__(self, "structure", _normalize_structure(self.structure, len(names)))
            for k in range(len(names)):
                dde = d(d(Form.basis_form(self, (k,))))
                if not dde.is_zero():
                    raise JacobiViolation(
                        f"d(d e{k + 1}) = {dde} != 0: structure constants violate Jacobi"
                    )

    @classmethod
    def coordinate(cls, names: Sequence[str], label: str = "") -> "ModelChart":
        return cls(COORDINATE, tuple(names), (), label)

    @classmethod
    def chevalley_eilenberg(
        cls, dimension: int, constants: Iterable, names: Sequence[str] | None = None, label: str = ""
    ) -> "ModelChart":
        """Build a CE chart from 1-based triples ``(k, i, j, value)``."""
        names = tuple(names) if names else tuple(f"e{i + 1}" for i in range(dimension))
        zero_based = [((k - 1, i - 1, j - 1), v) for k, i, j, v in constants]
        return cls(CE, names, tuple(zero_based), label)

    @property
    def dimension(self) -> int:
        return len(self.names)

    @property
    def n(self) -> int:
        return len(self.names) // 2

    @property
    def coefficient_variables(self) -> tuple[str, ...]:
        return self.names if self.kind == COORDINATE else ()

    def coefficient(self, value) -> Poly:
        if isinstance(value, Poly):
            if self.kind == CE and not value.is_constant():
                raise ChartMismatch("CE charts only carry constant coefficients")
            if self.kind == CE:
                return Poly.constant(value.constant_term())
            return value.with_variables(self.names)
        if isinstance(value, str):
            return parse_poly(value, self.coefficient_variables)
        return Poly.constant(value, self.coefficient_variables)

    def structure_constant(self, k: int, i: int, j: int) -> Fraction:
        if i == j:
            return Fraction(0)
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        return sign * dict(self.structure).get((k, i, j), Fraction(0))

    def __str__(self):
        return self.label or f"{self.kind}{self.names}"


def _normalize_structure(raw, dim: int):
    table: dict = {}
    for (k, i, j), value in raw:
        value = as_fraction(value)
        for idx in (k, i, j):
            if not 0 <= idx < dim:
                raise DimensionMismatch(f"structure index {idx + 1} outside 1..{dim}")
        if i == j:
            if value:
                raise ValueError(f"c^{k + 1}_{{{i + 1}{i + 1}}} must vanish (antisymmetry)")
            continue
        if i > j:
            i, j, value = j, i, -value
        key = (k, i, j)
        if key in table and table[key] != value:
            raise ValueError(f"inconsistent structure constant for {tuple(x + 1 for x in key)}")
        table[key] = value
    return tuple(sorted((key, v) for key, v in table.items() if v))


class Form:
    """A differential form: a map from wedge monomials to coefficients."""

    __slots__ = ("chart", "terms")

    def __init__(self, chart: ModelChart, terms: Mapping | None = None):
        self.chart = chart
        clean: dict = {}
        dim = chart.dimension
        for idx, coeff in (terms or {}).items():
            sign, key = sort_sign(tuple(idx))
            if not sign:
                continue
            if key and not (0 <= key[0] and key[-1] < dim):
                raise DimensionMismatch(f"wedge index {key} outside chart of dimension {dim}")
            c = chart.coefficient(coeff)
            if sign < 0:
                c = -c
            total = clean.get(key)
            c = c if total is None else total + c
            if c.is_zero():
                clean.pop(key, None)
            else:
                clean[key] = c
        self.terms = clean

    @classmethod
    def _raw(cls, chart, terms):
        f = cls.__new__(cls)
        f.chart = chart
        f.terms = terms
        return f

    @classmethod
    def zero(cls, chart: ModelChart) -> "Form":
        return cls._raw(chart, {})

    @classmethod
    def function(cls, chart: ModelChart, p) -> "Form":
        return cls(chart, {(): p})

    @classmethod
    def basis_form(cls, chart: ModelChart, index: Sequence[int], coeff=1) -> "Form":
        return cls(chart, {tuple(index): coeff})

    @classmethod
    def dx(cls, chart: ModelChart, *names: str) -> "Form":
        """``d name_1 ^ d name_2 ^ ...`` using coordinate names."""
        return cls(chart, {tuple(chart.names.index(n) for n in names): 1})

    @classmethod
    def parse(cls, chart: ModelChart, text: str) -> "Form":
        return parse_form(chart, text)

    # queries --------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> set[int]:
        return {len(k) for k in self.terms}

    def degree(self) -> int | None:
        """The form degree if homogeneous (``None`` for zero or mixed)."""
        degs = self.degrees()
        return degs.pop() if len(degs) == 1 else None

    def homogeneous(self, k: int) -> "Form":
        return Form._raw(self.chart, {i: c for i, c in self.terms.items() if len(i) == k})

    def components(self) -> dict[int, "Form"]:
        return {k: self.homogeneous(k) for k in sorted(self.degrees())}

    def total_degrees(self) -> set[int]:
        return {len(i) + sum(e) for i, c in self.terms.items() for e in c.terms}

    def total_degree_part(self, t: int) -> "Form":
        terms = {}
        for idx, c in self.terms.items():
            part = c.homogeneous_part(t - len(idx))
            if part:
                terms[idx] = part
        return Form._raw(self.chart, terms)

    def coefficient(self, index: Sequence[int]) -> Poly:
        sign, key = sort_sign(tuple(index))
        c = self.terms.get(key)
        if c is None or not sign:
            return self.chart.coefficient(0)
        return c if sign > 0 else -c

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "Form"):
        if other.chart != self.chart:
            raise ChartMismatch(f"forms live on different charts: {self.chart} vs {other.chart}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = Form.function(self.chart, other)
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            s = terms[k] + c if k in terms else c
            if s.is_zero():
                terms.pop(k, None)
            else:
                terms[k] = s
        return Form._raw(self.chart, terms)

    __radd__ = __add__

    def __neg__(self):
        return Form._raw(self.chart, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor) -> "Form":
        """Multiply every coefficient by a rational or a polynomial."""
        if isinstance(factor, Poly):
            factor = self.chart.coefficient(factor)
            terms = {}
            for k, c in self.terms.items():
                p = c * factor
                if p:
                    terms[k] = p
            return Form._raw(self.chart, terms)
        factor = as_fraction(factor)
        if not factor:
            return Form.zero(self.chart)
        return Form._raw(self.chart, {k: c.scale(factor) for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Form):
            return wedge(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not other:
            return self.is_zero()
        if not isinstance(other, Form):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        return hash((self.chart, frozenset(self.terms.items())))

    # text -----------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for idx in sorted(self.terms, key=lambda i: (len(i), i)):
            c = self.terms[idx]
            if idx:
                parts.append(f"({c})*d[{','.join(self.chart.names[i] for i in idx)}]")
            else:
                parts.append(f"({c})")
        return " + ".join(parts)

    def __repr__(self):
        return f"Form({self.chart}, {self})"


def _wedge_terms(a_terms, b_terms):
    out: dict = {}
    for i, ca in a_terms.items():
        for j, cb in b_terms.items():
            sign, key = merge_sign(i, j)
            if not sign:
                continue
            prod = ca * cb
            if sign < 0:
                prod = -prod
            if key in out:
                prod = out[key] + prod
            if prod.is_zero():
                out.pop(key, None)
            else:
                out[key] = prod
    return out


def wedge(a: Form, b: Form) -> Form:
    """Exterior product ``a ^ b``."""
    a._check(b)
    return Form._raw(a.chart, _wedge_terms(a.terms, b.terms))


def wedge_power(a: Form, r: int) -> Form:
    result = Form.function(a.chart, 1)
    for _ in range(r):
        result = wedge(a, result)
    return result


@lru_cache(maxsize=None)
def _ce_d_basis(chart: ModelChart, index: Index) -> dict:
    # d(e^{i1} ^ ... ^ e^{ik}) = sum_a (-1)^a e^{i1}..(d e^{ia})..e^{ik}
    out: dict = {}
    for a, k in enumerate(index):
        left, right = index[:a], index[a + 1 :]
        for (kk, i, j), c in chart.structure:
            if kk != k:
                continue
            s1, mid = merge_sign(left, (i, j))
            if not s1:
                continue
            s2, key = merge_sign(mid, right)
            if not s2:
                continue
            coeff = -c * s1 * s2 * (-1) ** a
            out[key] = out.get(key, 0) + coeff
    return {k: v for k, v in out.items() if v}


def d(a: Form) -> Form:
    """Exterior derivative (coordinate) or CE differential."""
    chart = a.chart
    out: dict = {}
    if chart.kind == COORDINATE:
        names = chart.names
        for idx, c in a.terms.items():
            for j, name in enumerate(names):
                if j in idx:
                    continue
                dc = c.partial(name)
                if dc.is_zero():
                    continue
                pos = sum(1 for i in idx if i < j)
                key = idx[:pos] + (j,) + idx[pos:]
                if pos & 1:
                    dc = -dc
                s = out[key] + dc if key in out else dc
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
    else:
        for idx, c in a.terms.items():
            for key, v in _ce_d_basis(chart, idx).items():
                s = c.scale(v)
                s = out[key] + s if key in out else s
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
    return Form._raw(chart, out)


def _as_matrix(G) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(as_fraction(x) for x in row) for row in G)


@lru_cache(maxsize=None)
def _contract_basis(G: tuple, index: Index) -> dict:
    out: dict = {}
    k = len(index)
    for a in range(k):
        for b in range(a + 1, k):
            g = G[index[a]][index[b]]
            if not g:
                continue
            sign = -1 if (a + b + 1) & 1 else 1
            rest = index[:a] + index[a + 1 : b] + index[b + 1 :]
            out[rest] = out.get(rest, 0) + sign * g
    return {k: v for k, v in out.items() if v}


def contract_bivector(G, a: Form) -> Form:
    """Contraction ``i(G)`` of a constant bivector into ``a`` (degree drops by 2).

    On a decomposable ``f0 df1 ^ ... ^ dfk`` this is
    ``sum_{i<j} (-1)^{i+j+1} f0 {fi, fj} df1 ^ ..^i..^j.. ^ dfk`` with the bracket
    ``{e^p, e^q} = G[p][q]`` on basis 1-forms.
    """
    G = _as_matrix(G)
    dim = a.chart.dimension
    if len(G) != dim or any(len(row) != dim for row in G):
        raise DimensionMismatch(f"bivector must be {dim}x{dim}")
    for i in range(dim):
        for j in range(dim):
            if G[i][j] != -G[j][i]:
                raise ValueError("bivector matrix must be antisymmetric")
    out: dict = {}
    for idx, c in a.terms.items():
        if len(idx) < 2:
            continue
        for key, v in _contract_basis(G, idx).items():
            s = c.scale(v)
            s = out[key] + s if key in out else s
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return Form._raw(a.chart, out)


def basis_indices(dim: int, k: int) -> list[Index]:
    return list(itertools.combinations(range(dim), k))


# --------------------------------------------------------------------------
# text grammar: "(x^2 - y)*d[x,y] + (3)"

_DREF = re.compile(r"\s*\*?\s*d\[([^\]]*)\]")


def parse_form(chart: ModelChart, text: str) -> Form:
    text = text.strip()
    if text in ("", "0"):
        return Form.zero(chart)
    pos = 0
    result = Form.zero(chart)
    first = True
    while pos < len(text):
        while pos < len(text) and text[pos].isspace():
            pos += 1
        sign = 1
        if text[pos] in "+-":
            sign = -1 if text[pos] == "-" else 1
            pos += 1
        elif not first:
            raise ParseError(f"expected '+' or '-' at {text[pos:]!r}")
        while pos < len(text) and text[pos].isspace():
            pos += 1
        coeff = chart.coefficient(1)
        had_coeff = False
        if pos < len(text) and text[pos] == "(":
            had_coeff = True
            depth, start = 0, pos
            while pos < len(text):
                if text[pos] == "(":
                    depth += 1
                elif text[pos] == ")":
                    depth -= 1
                    if depth == 0:
                        break
                pos += 1
            if depth:
                raise ParseError(f"unbalanced parentheses in {text!r}")
            coeff = chart.coefficient(parse_poly(text[start + 1 : pos], chart.coefficient_variables))
            pos += 1
        m = _DREF.match(text, pos)
        index: Index = ()
        if m:
            names = [s.strip() for s in m.group(1).split(",") if s.strip()]
            try:
                index = tuple(chart.names.index(nm) for nm in names)
            except ValueError:
                raise ParseError(f"unknown 1-form in d[{m.group(1)}]") from None
            pos = m.end()
        elif not had_coeff:
            raise ParseError(f"cannot parse form term at {text[pos:]!r}")
        result = result + Form(chart, {index: coeff.scale(sign)})
        first = False
    return result
