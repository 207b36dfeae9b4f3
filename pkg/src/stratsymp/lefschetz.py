"""Primitive forms and the Lefschetz decomposition.

Every form of degree ``j`` splits uniquely as ``sum_r L^r(p_r)`` with
``p_r`` primitive of degree ``j - 2r``.  :func:`lef_decompose` peels the
components off from the lowest form degree upwards: a suitable power of
``L`` annihilates every other component, and the surviving one is recovered
with ``c_{n,k} (L*)^k L^k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import DegreeAboveMiddle, NonHomogeneous
from .exterior import Form, basis_indices, d
from .symplectic import SymplecticModel, L_power, Lstar, Lstar_power, delta


def lefschetz_constant(k: int) -> Fraction:
    """``c_{n,k}`` with ``p = c_{n,k} (L*)^k L^k p`` for primitive ``p`` of degree n-k.

    Under the package's conventions this is ``1/(k!)^2``, independent of n.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    return Fraction(1, math.factorial(k) ** 2)


def _degree(a: Form) -> int:
    k = a.degree()
    if k is None:
        raise NonHomogeneous(f"expected a homogeneous form, got degrees {sorted(a.degrees())}")
    return k


def is_primitive(a: Form, model: SymplecticModel) -> bool:
    """``L^{k+1} a = 0`` for ``a`` of degree ``n - k``.

    The zero form counts as primitive in every degree.
    """
    if a.is_zero():
        return True
    deg = _degree(a)
    n = model.n
    if deg > n:
        raise DegreeAboveMiddle(f"degree {deg} exceeds the middle degree {n}")
    return L_power(a, model, n - deg + 1).is_zero()


def is_primitive_dual(a: Form, model: SymplecticModel) -> bool:
    """Cross-check of :func:`is_primitive`: ``L* a = 0``."""
    if a.is_zero():
        return True
    deg = _degree(a)
    if deg > model.n:
        raise DegreeAboveMiddle(f"degree {deg} exceeds the middle degree {model.n}")
    return Lstar(a, model).is_zero()


@dataclass(frozen=True)
class PrimitiveDecomposition:
    input_degree: int
    components: tuple  # of (r, primitive form of degree input_degree - 2r)

    def reconstruct(self, model: SymplecticModel, chart=None) -> Form:
        chart = chart or model.chart
        out = Form.zero(chart)
        for r, p in self.components:
            out = out + L_power(p, model, r)
        return out

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)


def lef_decompose(a: Form, model: SymplecticModel) -> PrimitiveDecomposition:
    if a.is_zero():
        return PrimitiveDecomposition(0, ())
    j = _degree(a)
    n = model.n
    remaining = a
    found = []
    for r in range(j // 2, max(0, j - n) - 1, -1):
        s = j - 2 * r
        m = n - j + r
        k = n - s
        piece = Lstar_power(L_power(remaining, model, m), model, k).scale(lefschetz_constant(k))
        if piece.is_zero():
            continue
        found.append((r, piece))
        remaining = remaining - L_power(piece, model, r)
    if not remaining.is_zero():
        raise ArithmeticError(f"Lefschetz decomposition left a remainder {remaining}")
    found.sort(key=lambda item: item[0])
    return PrimitiveDecomposition(j, tuple(found))


def is_harmonic(a: Form, model: SymplecticModel) -> bool:
    return d(a).is_zero() and delta(a, model).is_zero()


# --------------------------------------------------------------------------
# brute-force oracle for the constants


def _vector(form: Form, index_of: dict) -> dict:
    return {index_of[i]: c.constant_term() for i, c in form.terms.items()}


def primitive_basis(model: SymplecticModel, degree: int) -> list[Form]:
    """Basis of constant-coefficient primitive forms of ``degree`` (kernel of L*)."""
    dim = model.dimension
    src = basis_indices(dim, degree)
    tgt = basis_indices(dim, degree - 2) if degree >= 2 else []
    tgt_index = {idx: i for i, idx in enumerate(tgt)}
    columns = [_vector(Lstar(Form.basis_form(model.chart, idx), model), tgt_index) for idx in src]
    rows = linalg.transpose(columns)
    rows += [{}] * (len(tgt) - len(rows))
    kernel = linalg.nullspace(rows, len(src))
    return [Form(model.chart, {src[i]: v for i, v in vec.items()}) for vec in kernel]


def brute_force_constant(model: SymplecticModel, k: int) -> Fraction | None:
    """Solve ``c (L*)^k L^k p = p`` on a primitive basis of degree ``n - k``.

    Returns ``None`` when there are no primitive forms in that degree; raises
    if the basis elements disagree (which would mean the scalar is not constant).
    """
    degree = model.n - k
    values = set()
    for p in primitive_basis(model, degree):
        image = Lstar_power(L_power(p, model, k), model, k)
        idx = next(iter(p.terms))
        lam = image.coefficient(idx).constant_term() / p.terms[idx].constant_term()
        if image != p.scale(lam):
            raise ArithmeticError("(L*)^k L^k is not a scalar on primitive forms")
        values.add(1 / lam)
    if len(values) > 1:
        raise ArithmeticError(f"inconsistent constants {values}")
    return values.pop() if values else None
