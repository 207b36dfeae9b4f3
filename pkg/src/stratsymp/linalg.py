"""Exact sparse linear algebra over the rationals.

Vectors are ``dict[int, Fraction]`` with zero entries omitted; matrices are
lists of such rows.  Everything is Gaussian elimination on Fractions, so
ranks and kernels are exact.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vector = dict


def _axpy(target: dict, factor, source: dict):
    # target -= factor * source, in place
    for k, v in source.items():
        s = target.get(k, 0) - factor * v
        if s:
            target[k] = s
        else:
            target.pop(k, None)


def dense_to_sparse(rows: Sequence[Sequence]) -> list[dict]:
    return [{j: Fraction(v) for j, v in enumerate(row) if v} for row in rows]


def sparse_to_dense(rows: Iterable[dict], ncols: int) -> list[list[Fraction]]:
    out = []
    for row in rows:
        dense = [Fraction(0)] * ncols
        for j, v in row.items():
            dense[j] = v
        out.append(dense)
    return out


class Echelon:
    """Incrementally maintained row echelon basis of a span of vectors."""

    def __init__(self, vectors: Iterable[dict] = ()):
        self.pivots: dict[int, dict] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, vector: dict) -> dict:
        row = dict(vector)
        while row:
            col = min(row)
            piv = self.pivots.get(col)
            if piv is None:
                # pivot columns below col may still appear in row
                later = [c for c in row if c in self.pivots]
                if not later:
                    return row
                col = min(later)
                piv = self.pivots[col]
            _axpy(row, row[col], piv)
        return row

    def add(self, vector: dict) -> bool:
        """Add ``vector`` to the span; return True if the rank grew."""
        row = self.reduce(vector)
        if not row:
            return False
        col = min(row)
        lead = row[col]
        row = {k: v / lead for k, v in row.items()}
        self.pivots[col] = row
        return True

    def contains(self, vector: dict) -> bool:
        return not self.reduce(vector)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def basis(self) -> list[dict]:
        return [self.pivots[c] for c in sorted(self.pivots)]


def rank(rows: Iterable[dict]) -> int:
    return Echelon(rows).rank


def rref(rows: Iterable[dict]) -> dict[int, dict]:
    """Fully reduced row echelon form as ``pivot column -> row``."""
    ech = Echelon(rows)
    cols = sorted(ech.pivots)
    piv = {c: dict(ech.pivots[c]) for c in cols}
    for c in reversed(cols):
        row = piv[c]
        for other in cols:
            if other < c and c in piv[other]:
                _axpy(piv[other], piv[other][c], row)
    return piv


def nullspace(rows: Sequence[dict], ncols: int) -> list[dict]:
    """Basis of ``{x : M x = 0}`` for the ``len(rows) x ncols`` matrix ``M``."""
    piv = rref(rows)
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        x = {f: Fraction(1)}
        for c, row in piv.items():
            v = row.get(f)
            if v:
                x[c] = -v
        basis.append(x)
    return basis


def transpose(rows: Sequence[dict]) -> list[dict]:
    cols: dict[int, dict] = {}
    for i, row in enumerate(rows):
        for j, v in row.items():
            cols.setdefault(j, {})[i] = v
    width = max(cols, default=-1) + 1
    return [cols.get(j, {}) for j in range(width)]


def solve(rows: Sequence[dict], rhs: dict, ncols: int) -> dict | None:
    """One solution ``x`` of ``M x = rhs`` or ``None`` if inconsistent."""
    aug = []
    marker = ncols
    for i, row in enumerate(rows):
        r = dict(row)
        if rhs.get(i):
            r[marker] = rhs[i]
        aug.append(r)
    extra = {i for i in rhs if i >= len(rows) and rhs[i]}
    if extra:
        return None
    piv = rref(aug)
    if marker in piv:
        return None
    x = {}
    for c, row in piv.items():
        v = row.get(marker)
        if v:
            x[c] = v
    return x


def intersection(u: Sequence[dict], v: Sequence[dict]) -> list[dict]:
    """Basis of span(u) intersected with span(v)."""
    u = Echelon(u).basis()
    v = Echelon(v).basis()
    if not u or not v:
        return []
    # columns of [U | -V]; kernel vectors (a, b) give sum a_i u_i in both spans
    columns = list(u) + [{k: -x for k, x in w.items()} for w in v]
    rows = transpose(columns)
    kernel = nullspace(rows, len(columns))
    out = Echelon()
    for ker in kernel:
        vec: dict = {}
        for i, a in ker.items():
            if i < len(u):
                _axpy(vec, -a, u[i])
        if vec:
            out.add(vec)
    return out.basis()


def same_span(u: Sequence[dict], v: Sequence[dict]) -> bool:
    eu, ev = Echelon(u), Echelon(v)
    if eu.rank != ev.rank:
        return False
    return all(eu.contains(w) for w in ev.basis())


def complement_basis(sub: Sequence[dict], whole: Sequence[dict]) -> list[dict]:
    """Vectors from ``whole`` extending a basis of span(sub) to span(sub + whole)."""
    ech = Echelon(sub)
    out = []
    for w in whole:
        if ech.add(w):
            out.append(w)
    return out


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in matrix]
    size = len(m)
    det = Fraction(1)
    for c in range(size):
        p = next((r for r in range(c, size) if m[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, size):
            if m[r][c]:
                f = m[r][c] / m[c][c]
                for k in range(c, size):
                    m[r][k] -= f * m[c][k]
    return det


def inverse(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact inverse by Gauss-Jordan; raises ZeroDivisionError if singular."""
    size = len(matrix)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(size)]
         for i, row in enumerate(matrix)]
    for c in range(size):
        p = next((r for r in range(c, size) if m[r][c]), None)
        if p is None:
            raise ZeroDivisionError("matrix is singular")
        m[c], m[p] = m[p], m[c]
        lead = m[c][c]
        m[c] = [x / lead for x in m[c]]
        for r in range(size):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[size:] for row in m]
