"""Exact homology of ``(Omega, d)`` and ``(Omega, delta)`` on finite pieces.

On a CE chart the whole exterior algebra is finite dimensional.  On a
coordinate chart forms are graded by total degree (polynomial degree plus
form degree); ``d`` preserves it and ``delta`` lowers it by two, so each
piece ``(k, t)`` is finite and homology is reported piece by piece.
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from . import linalg
from .coeffring import Poly
from .errors import ChartKindError
from .exterior import CE, COORDINATE, Form, ModelChart, basis_indices, d, wedge_power
from .symplectic import SymplecticModel, delta

THREADS_ENV = "STRATSYMP_THREADS"


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _map(fn, items, threads):
    threads = threads or default_threads()
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    # executor.map keeps input order, so merged output is deterministic
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _chart(model) -> ModelChart:
    return model.chart if isinstance(model, SymplecticModel) else model


def monomials(nvars: int, degree: int):
    if degree < 0:
        return []
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


@dataclass
class GradedPieceBasis:
    """Basis of the piece of form degree ``degree`` and total degree ``total_degree``.

    Each basis element is ``monomial * e_I``, keyed ``(I, exponents)``.
    """

    chart: ModelChart
    degree: int
    total_degree: int | None
    keys: list = field(default_factory=list)

    def __post_init__(self):
        dim = self.chart.dimension
        if not self.keys:
            if not 0 <= self.degree <= dim:
                self.keys = []
            elif self.chart.kind == CE:
                self.keys = [(I, ()) for I in basis_indices(dim, self.degree)]
            else:
                p = self.total_degree - self.degree
                self.keys = [(I, e) for I in basis_indices(dim, self.degree) for e in monomials(dim, p)]
        self.index_of = {k: i for i, k in enumerate(self.keys)}

    def __len__(self):
        return len(self.keys)

    def element(self, i: int) -> Form:
        I, e = self.keys[i]
        return Form(self.chart, {I: Poly(self.chart.coefficient_variables, {e: 1})})

    def elements(self) -> list[Form]:
        return [self.element(i) for i in range(len(self))]

    def vector(self, form: Form) -> dict:
        vec = {}
        for I, c in form.terms.items():
            c = c.with_variables(self.chart.coefficient_variables)
            for e, v in c.terms.items():
                try:
                    vec[self.index_of[(I, e)]] = v
                except KeyError:
                    raise ValueError(f"{form} does not lie in piece ({self.degree}, {self.total_degree})") from None
        return vec

    def form(self, vec: dict) -> Form:
        terms: dict = {}
        for i, v in vec.items():
            I, e = self.keys[i]
            terms.setdefault(I, {})[e] = v
        return Form(self.chart, {I: Poly(self.chart.coefficient_variables, t) for I, t in terms.items()})


@lru_cache(maxsize=None)
def piece(chart: ModelChart, degree: int, total_degree: int | None) -> GradedPieceBasis:
    if chart.kind == CE:
        total_degree = None
    return GradedPieceBasis(chart, degree, total_degree)


def _target(model, op: str, k: int, t):
    chart = _chart(model)
    if op == "d":
        return piece(chart, k + 1, t)
    return piece(chart, k - 1, None if t is None else t - 2)


def _apply(model, op: str, form: Form) -> Form:
    if op == "d":
        return d(form)
    if not isinstance(model, SymplecticModel):
        raise TypeError("delta needs a SymplecticModel")
    return delta(form, model)


@lru_cache(maxsize=None)
def operator_columns(model, op: str, k: int, t) -> tuple:
    """Images of the basis of piece ``(k, t)`` as coordinate vectors in the target piece."""
    src = piece(_chart(model), k, t)
    tgt = _target(model, op, k, t)
    cols = []
    for i in range(len(src)):
        image = _apply(model, op, src.element(i))
        cols.append(tgt.vector(image) if len(tgt) else {})
        if not len(tgt) and not image.is_zero():
            raise ValueError("operator left the expected piece")
    return tuple(cols)


@lru_cache(maxsize=None)
def operator_rank(model, op: str, k: int, t) -> int:
    return linalg.rank(operator_columns(model, op, k, t))


def kernel(model, op: str, k: int, t=None) -> list[dict]:
    cols = operator_columns(model, op, k, t)
    rows = linalg.transpose(cols)
    return linalg.nullspace(rows, len(cols))


def image(model, op: str, k: int, t=None) -> list[dict]:
    """Spanning vectors of the image of ``op`` landing in piece ``(k, t)``."""
    if op == "d":
        src_k, src_t = k - 1, t
    else:
        src_k, src_t = k + 1, None if t is None else t + 2
    if not 0 <= src_k <= _chart(model).dimension:
        return []
    return [c for c in operator_columns(model, op, src_k, src_t) if c]


@dataclass
class BettiTable:
    operator: str
    ranks: dict  # degree -> rank of homology
    total_degree: int | None = None
    chain_dims: dict = field(default_factory=dict)
    euler_consistent: bool | None = None

    def as_tuple(self) -> tuple:
        return tuple(self.ranks[k] for k in sorted(self.ranks))


def _homology_rank(model, op: str, k: int, t) -> int:
    chart = _chart(model)
    src = piece(chart, k, t)
    if not len(src):
        return 0
    out_rank = operator_rank(model, op, k, t)
    if op == "d":
        in_k, in_t = k - 1, t
    else:
        in_k, in_t = k + 1, None if t is None else t + 2
    in_rank = operator_rank(model, op, in_k, in_t) if 0 <= in_k <= chart.dimension else 0
    return len(src) - out_rank - in_rank


def betti(model, operator: str = "d", total_degree: int | None = None,
          degrees: Sequence[int] | None = None, threads: int | None = None) -> BettiTable:
    """Homology ranks per form degree (for one total degree on coordinate charts)."""
    op = "d" if operator == "d" else "delta"
    chart = _chart(model)
    if chart.kind == COORDINATE and total_degree is None:
        raise ValueError("coordinate charts need a total_degree selector")
    t = total_degree if chart.kind == COORDINATE else None
    degrees = list(range(chart.dimension + 1)) if degrees is None else list(degrees)
    # warm the rank cache in parallel, then read it back in a fixed order
    jobs = []
    for k in degrees:
        jobs.append((k, t))
        if op == "d":
            jobs.append((k - 1, t))
        else:
            jobs.append((k + 1, None if t is None else t + 2))
    jobs = sorted({j for j in jobs if 0 <= j[0] <= chart.dimension and (j[1] is None or j[1] >= 0)},
                  key=lambda j: (j[0], -1 if j[1] is None else j[1]))
    _map(lambda job: operator_rank(model, op, *job), jobs, threads)
    ranks = {k: _homology_rank(model, op, k, t) for k in degrees}
    dims = {k: len(piece(chart, k, t)) for k in degrees}
    euler = None
    full = set(degrees) == set(range(chart.dimension + 1))
    if full and (chart.kind == CE or op == "d"):
        euler = sum((-1) ** k * dims[k] for k in degrees) == sum((-1) ** k * ranks[k] for k in degrees)
    return BettiTable(op, ranks, t, dims, euler)


@dataclass
class DualityVerdict:
    passed: bool
    rows: list  # (k, poly degree or None, rank H_k(delta), rank H^{2n-k}(d))


def hodge_duality_check(model: SymplecticModel, degrees: Sequence[int] | None = None,
                        max_poly_degree: int = 2, threads: int | None = None) -> DualityVerdict:
    """Compare ``rank H_k(delta)`` with ``rank H^{2n-k}(d)``.

    On coordinate charts ``star`` keeps the polynomial degree ``p``, so the
    delta piece ``(k, p + k)`` is matched with the d piece ``(2n - k, p + 2n - k)``
    for every ``p <= max_poly_degree``.
    """
    chart = model.chart
    dim = chart.dimension
    degrees = list(range(dim + 1)) if degrees is None else list(degrees)
    rows = []
    if chart.kind == CE:
        bd = betti(model, "d", threads=threads).ranks
        bdel = betti(model, "delta", threads=threads).ranks
        for k in degrees:
            if not 0 <= k <= dim:
                continue
            rows.append((k, None, bdel[k], bd[dim - k]))
    else:
        for p in range(max_poly_degree + 1):
            for k in degrees:
                if not 0 <= k <= dim:
                    continue
                hk = betti(model, "delta", total_degree=p + k, degrees=[k], threads=threads).ranks[k]
                hd = betti(model, "d", total_degree=p + dim - k, degrees=[dim - k], threads=threads).ranks[dim - k]
                rows.append((k, p, hk, hd))
    return DualityVerdict(all(a == b for _, _, a, b in rows), rows)


# --------------------------------------------------------------------------
# cohomology classes, hard Lefschetz, harmonic representatives


def _require_ce(model):
    if _chart(model).kind != CE:
        raise ChartKindError("this check needs a finite-dimensional (CE) chart")


def cohomology_basis(model, k: int) -> list[Form]:
    """Closed k-forms whose classes form a basis of ``H^k(d)``."""
    _require_ce(model)
    chart = _chart(model)
    if not 0 <= k <= chart.dimension:
        return []
    basis = piece(chart, k, None)
    cycles = kernel(model, "d", k)
    boundaries = image(model, "d", k)
    return [basis.form(v) for v in linalg.complement_basis(boundaries, cycles)]


def hard_lefschetz_check(model: SymplecticModel) -> dict[int, bool]:
    """For each ``k <= n``: is ``[omega^k]: H^{n-k} -> H^{n+k}`` surjective?"""
    _require_ce(model)
    n = model.n
    chart = model.chart
    verdicts = {}
    for k in range(n + 1):
        wk = wedge_power(model.omega_form, k)
        tgt = piece(chart, n + k, None)
        images = [tgt.vector(wk ^ z) for z in cohomology_basis(model, n - k)]
        boundaries = image(model, "d", n + k)
        dim_h = _homology_rank(model, "d", n + k, None)
        rank = linalg.rank(list(boundaries) + images) - linalg.rank(boundaries)
        verdicts[k] = rank == dim_h
    return verdicts


def harmonic_representative_search(model: SymplecticModel, cls: Form) -> Form | None:
    """A harmonic form cohomologous to the closed form ``cls``, or ``None``.

    Solves ``delta(cls + d theta) = 0`` for ``theta`` exactly.
    """
    _require_ce(model)
    if not d(cls).is_zero():
        raise ValueError("the class representative must be closed")
    chart = model.chart
    if cls.is_zero():
        return cls
    k = cls.degree()
    if k is None:
        parts = [harmonic_representative_search(model, c) for c in cls.components().values()]
        if any(p is None for p in parts):
            return None
        return sum(parts, Form.zero(chart))
    rhs_form = -delta(cls, model)
    if rhs_form.is_zero():
        return cls
    if k == 0:
        return None
    src = piece(chart, k - 1, None)
    tgt = piece(chart, k - 1, None)
    cols = [tgt.vector(delta(d(src.element(i)), model)) for i in range(len(src))]
    rows = linalg.transpose(cols)
    rows += [{}] * (len(tgt) - len(rows))
    theta = linalg.solve(rows, tgt.vector(rhs_form), len(src))
    if theta is None:
        return None
    rep = cls + d(src.form(theta))
    assert delta(rep, model).is_zero() and d(rep).is_zero()
    return rep


def harmonic_classes_report(model: SymplecticModel) -> dict[int, list]:
    """Per degree, a list of ``(class representative, harmonic representative or None)``."""
    return {
        k: [(z, harmonic_representative_search(model, z)) for z in cohomology_basis(model, k)]
        for k in range(model.dimension + 1)
    }


def every_class_harmonic(model: SymplecticModel) -> bool:
    return all(h is not None for items in harmonic_classes_report(model).values() for _, h in items)


@dataclass
class CavalcantiVerdict:
    degree: int
    total_degree: int | None
    dim_im_delta_cap_ker_d: int
    dim_im_d_cap_im_delta: int
    holds: bool


def cavalcanti_check(model: SymplecticModel, degree: int, total_degree: int | None = None) -> CavalcantiVerdict:
    """Compare ``Im delta ∩ ker d`` with ``Im d ∩ Im delta`` in one piece."""
    chart = model.chart
    t = total_degree if chart.kind == COORDINATE else None
    if chart.kind == COORDINATE and t is None:
        raise ValueError("coordinate charts need a total_degree selector")
    if not 0 <= degree <= chart.dimension or not len(piece(chart, degree, t)):
        return CavalcantiVerdict(degree, t, 0, 0, True)
    im_delta = image(model, "delta", degree, t)
    ker_d = kernel(model, "d", degree, t)
    im_d = image(model, "d", degree, t)
    left = linalg.intersection(im_delta, ker_d)
    right = linalg.intersection(im_d, im_delta)
    return CavalcantiVerdict(degree, t, len(left), len(right), linalg.same_span(left, right))
