"""Stratified spaces: strata posets, cones and products, fiber-constant
functions, and the numeric bump / partition-of-unity constructions.

The frontier relation is declared data.  We check that it is a partial
order compatible with the dimensions; we do not verify any geometry.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import networkx as nx

from . import linalg
from .coeffring import Gen, Poly, SmoothExpr, as_expr, as_fraction, normalized_step, smooth_eval, smooth_invert
from .errors import CoverGap, IdenticalPoints, InvalidStratification, NoFiberCoordinate, UnknownVariable


@dataclass(frozen=True)
class StratumRecord:
    id: object
    dimension: int
    is_regular: bool = False

    def __post_init__(self):
        if self.dimension < 0:
            raise InvalidStratification(f"stratum {self.id!r} has negative dimension")


# smooth-structure presentations


@dataclass(frozen=True)
class Embedded:
    """Functions restricted from an ambient ``R^n``."""

    ambient_dimension: int
    defining: tuple = ()


@dataclass(frozen=True)
class Quotient:
    """Invariant functions of a group action, given by invariant generators."""

    action: str
    invariants: tuple = ()
    relations: tuple = ()


@dataclass(frozen=True)
class Resolvable:
    """Functions whose pullback along a resolution is smooth."""

    fibration: "FibrationSpec"


class StratifiedModel:
    """A finite poset of strata.  ``order`` lists pairs ``(a, b)`` with ``a < b``,
    i.e. stratum ``a`` lies in the closure of stratum ``b``."""

    def __init__(self, strata: Sequence[StratumRecord], order: Sequence[tuple] = (),
                 presentation=None, charts: Mapping | None = None, label: str = ""):
        self.strata = tuple(strata)
        self.by_id = {s.id: s for s in self.strata}
        if len(self.by_id) != len(self.strata):
            raise InvalidStratification("duplicate stratum ids")
        graph = nx.DiGraph()
        graph.add_nodes_from(self.by_id)
        for a, b in order:
            for x in (a, b):
                if x not in self.by_id:
                    raise InvalidStratification(f"order mentions unknown stratum {x!r}")
            if a == b:
                raise InvalidStratification(f"{a!r} < {a!r} is not a strict order")
            graph.add_edge(a, b)
        if not nx.is_directed_acyclic_graph(graph):
            raise InvalidStratification("frontier relation has a cycle (not antisymmetric)")
        closure = nx.transitive_closure_dag(graph)
        for a, b in closure.edges:
            if self.by_id[a].dimension >= self.by_id[b].dimension:
                raise InvalidStratification(f"{a!r} < {b!r} but dim {a!r} >= dim {b!r}")
        for s in self.strata:
            if s.is_regular and closure.out_degree(s.id):
                raise InvalidStratification(f"regular stratum {s.id!r} is not maximal")
        self.order = closure
        self.presentation = presentation
        self.charts = dict(charts or {})
        self.label = label

    def less(self, a, b) -> bool:
        return self.order.has_edge(a, b)

    def relations(self) -> list[tuple]:
        return sorted(self.order.edges, key=repr)

    @property
    def depth(self) -> int:
        return nx.dag_longest_path_length(self.order) if self.order.number_of_edges() else 0

    def depth_of(self, sid) -> int:
        """Longest chain of strata above ``sid``."""
        return _longest_from(self.order, sid)

    def regular_strata(self) -> list[StratumRecord]:
        return [s for s in self.strata if s.is_regular]

    def __len__(self):
        return len(self.strata)

    def __repr__(self):
        return f"StratifiedModel({self.label or len(self.strata)} strata, depth {self.depth})"


def _longest_from(graph, node) -> int:
    best = {}
    for v in reversed(list(nx.topological_sort(graph))):
        best[v] = max((best[w] + 1 for w in graph.successors(v)), default=0)
    return best[node]


def point(label: str = "pt") -> StratifiedModel:
    return StratifiedModel([StratumRecord(label, 0, True)], label=label)


def cone(m: StratifiedModel, apex="apex") -> StratifiedModel:
    """``cL``: an apex of dimension 0 below everything, other strata one dimension up."""
    while apex in m.by_id:
        apex = f"{apex}'"
    strata = [StratumRecord(apex, 0, False)] + [StratumRecord(s.id, s.dimension + 1, s.is_regular) for s in m.strata]
    order = [(apex, s.id) for s in m.strata] + list(m.order.edges)
    return StratifiedModel(strata, order, label=f"c({m.label})" if m.label else "")


def product(m1: StratifiedModel, m2: StratifiedModel) -> StratifiedModel:
    strata = [StratumRecord((a.id, b.id), a.dimension + b.dimension, a.is_regular and b.is_regular)
              for a in m1.strata for b in m2.strata]

    def le(m, x, y):
        return x == y or m.less(x, y)

    order = [((a.id, b.id), (c.id, e.id))
             for a, b, c, e in itertools.product(m1.strata, m2.strata, m1.strata, m2.strata)
             if (a.id, b.id) != (c.id, e.id) and le(m1, a.id, c.id) and le(m2, b.id, e.id)]
    label = f"{m1.label}x{m2.label}" if m1.label and m2.label else ""
    return StratifiedModel(strata, order, label=label)


def join(m1: StratifiedModel, m2: StratifiedModel) -> StratifiedModel:
    """``L1 x L2 x [0,1]`` with ``L1 x {0}`` and ``L2 x {1}`` collapsed.

    Strata: those of L1, those of L2, and ``S1 x S2 x (0, 1)``.
    """
    strata = [StratumRecord((1, s.id), s.dimension, False) for s in m1.strata]
    strata += [StratumRecord((2, s.id), s.dimension, False) for s in m2.strata]
    strata += [StratumRecord((a.id, b.id), a.dimension + b.dimension + 1, a.is_regular and b.is_regular)
               for a in m1.strata for b in m2.strata]
    order = [((1, a), (1, b)) for a, b in m1.order.edges] + [((2, a), (2, b)) for a, b in m2.order.edges]
    for a, b in itertools.product(m1.strata, m2.strata):
        for c, e in itertools.product(m1.strata, m2.strata):
            le1 = a.id == c.id or m1.less(a.id, c.id)
            le2 = b.id == e.id or m2.less(b.id, e.id)
            if (a.id, b.id) != (c.id, e.id) and le1 and le2:
                order.append(((a.id, b.id), (c.id, e.id)))
        order.append(((1, a.id), (a.id, b.id)))
        order.append(((2, b.id), (a.id, b.id)))
    return StratifiedModel(strata, order)


def isomorphic(m1: StratifiedModel, m2: StratifiedModel) -> bool:
    """Order isomorphism preserving stratum dimensions."""
    for m in (m1, m2):
        for s in m.strata:
            m.order.nodes[s.id]["dim"] = s.dimension
    return nx.is_isomorphic(m1.order, m2.order, node_match=lambda a, b: a["dim"] == b["dim"])


# --------------------------------------------------------------------------
# fiber-constant functions


@dataclass(frozen=True)
class FibrationSpec:
    """Local coordinates ``(x~, y~, z~)`` on ``R^n`` around a stratum of dimension l
    whose preimage has dimension k: ``n-k`` normal, ``k-l`` fiber, ``l`` base."""

    n: int
    k: int
    l: int

    def __post_init__(self):
        if not 0 <= self.l <= self.k <= self.n:
            raise ValueError(f"need 0 <= l <= k <= n, got {(self.n, self.k, self.l)}")

    @property
    def normal(self) -> tuple[str, ...]:
        return tuple(f"x{i}" for i in range(1, self.n - self.k + 1))

    @property
    def fiber(self) -> tuple[str, ...]:
        return tuple(f"y{i}" for i in range(1, self.k - self.l + 1))

    @property
    def base(self) -> tuple[str, ...]:
        return tuple(f"z{i}" for i in range(1, self.l + 1))

    @property
    def variables(self) -> tuple[str, ...]:
        return self.normal + self.fiber + self.base


@dataclass
class MembershipResult:
    member: bool
    g: tuple  # the g_i multiplying x~^i
    c: Poly  # z~-only part (on success)
    obstruction: Poly  # terms of g(0, y, z) that depend on y~

    def reassemble(self, spec: FibrationSpec) -> Poly:
        out = self.c
        for name, gi in zip(spec.normal, self.g):
            out = out + Poly.var(name, spec.variables) * gi
        return out

    def __bool__(self):
        return self.member


def fiber_constancy_membership(g: Poly, spec: FibrationSpec) -> MembershipResult:
    """Is ``g`` constant along the fibers ``{x~ = 0, z~ = const}``?

    A term divisible by some ``x~^i`` goes (divided by the first such
    ``x~^i``) into ``g_i``; the rest is ``g(0, y~, z~)`` and must not involve ``y~``.
    """
    names = spec.variables
    unknown = g.used_variables() - set(names)
    if unknown:
        raise UnknownVariable(f"{sorted(unknown)} are not coordinates of the fibration chart")
    g = g.with_variables(names)
    nx_ = len(spec.normal)
    ny = len(spec.fiber)
    parts = [dict() for _ in range(nx_)]
    rest, bad = {}, {}
    for e, c in g.terms.items():
        i = next((i for i in range(nx_) if e[i]), None)
        if i is not None:
            q = list(e)
            q[i] -= 1
            parts[i][tuple(q)] = c
        elif any(e[nx_:nx_ + ny]):
            bad[e] = c
        else:
            rest[e] = c
    gi = tuple(Poly(names, p) for p in parts)
    return MembershipResult(not bad, gi, Poly(names, rest), Poly(names, bad))


@dataclass
class CotangentWitness:
    m_max: int
    truncation: int
    rank: int
    independent: bool
    vectors: list  # the polynomials x~1 (y~1)^m


def cotangent_growth_witness(spec: FibrationSpec, m_max: int) -> CotangentWitness:
    """Rank of ``{x~1 (y~1)^m : 1 <= m <= m_max}`` in ``m_s / m_s^2``, truncated.

    ``m_s`` (fiber-constant functions vanishing at the origin) is spanned by
    monomials divisible by some ``x~^i`` together with nonconstant
    ``z~``-monomials; ``m_s^2`` by products of two such monomials.  Everything
    is cut off at total degree ``m_max + 2``.
    """
    if not spec.fiber:
        raise NoFiberCoordinate("the fibration has no fiber coordinate; nothing grows")
    if not spec.normal:
        raise NoFiberCoordinate("no normal coordinate x~ to multiply by")
    if m_max < 1:
        raise ValueError("m_max must be positive")
    names = spec.variables
    nvars = len(names)
    nx_, ny = len(spec.normal), len(spec.fiber)
    top = m_max + 2

    def in_ms(e):
        return any(e[:nx_]) or (not any(e[nx_:nx_ + ny]) and any(e))

    monos = [e for deg in range(1, top + 1) for e in _monomials(nvars, deg)]
    gens = [e for e in monos if in_ms(e)]
    index = {e: i for i, e in enumerate(monos)}
    square = set()
    for a, b in itertools.combinations_with_replacement(gens, 2):
        e = tuple(x + y for x, y in zip(a, b))
        if sum(e) <= top:
            square.add(e)
    m2 = [{index[e]: Fraction(1)} for e in sorted(square)]
    vectors, rows = [], []
    for m in range(1, m_max + 1):
        e = [0] * nvars
        e[0] = 1
        e[nx_] = m
        e = tuple(e)
        vectors.append(Poly(names, {e: 1}))
        rows.append({index[e]: Fraction(1)})
    rank = linalg.rank(rows + m2) - linalg.rank(m2)
    return CotangentWitness(m_max, top, rank, rank == m_max, vectors)


def _monomials(nvars, degree):
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        yield tuple(e)


# --------------------------------------------------------------------------
# bump functions and partitions of unity
#
# Points are dicts coordinate -> float.  A selector turns a point into a
# nonnegative number (rho_B or rho_cL of the local model B(eps) x cL(eps)).


@dataclass(frozen=True)
class Distance:
    """Euclidean distance to ``center`` in the listed coordinates."""

    coords: tuple
    center: tuple

    def __call__(self, p: Mapping[str, float]) -> float:
        return math.hypot(*(p[c] - x for c, x in zip(self.coords, self.center)))


@dataclass(frozen=True)
class ConeRadius:
    """The cone's defining function: the radial coordinate itself."""

    coord: str

    def __call__(self, p: Mapping[str, float]) -> float:
        return float(p[self.coord])


@dataclass(frozen=True)
class Zero:
    def __call__(self, p) -> float:
        return 0.0


@dataclass(frozen=True)
class BumpSpec:
    epsilon: Fraction
    rho_B: object = Zero()
    rho_cL: object = Zero()

    def __post_init__(self):
        eps = as_fraction(self.epsilon)
        if eps <= 0:
            raise ValueError(f"epsilon must be positive, got {eps}")
        object.__setattr__(self, "epsilon", eps)

    def averaged(self, p) -> float:
        return (self.rho_B(p) + self.rho_cL(p)) / 2


def chi(a, epsilon) -> SmoothExpr:
    """0 on (0, eps/5], 1 on [2eps/5, 3eps/5], 0 on [4eps/5, eps), strictly between elsewhere."""
    a = as_expr(a)
    r = Fraction(5) / as_fraction(epsilon)
    return normalized_step(a * r - 1) * normalized_step(4 - a * r)


def _psi(a, epsilon) -> SmoothExpr:
    # agrees with chi for a <= 3eps/5, and is 1 from 2eps/5 on
    return normalized_step(as_expr(a) * (Fraction(5) / as_fraction(epsilon)) - 1)


@dataclass
class Bump:
    """``f = 1 - psi(a)`` with ``a = (rho_B + rho_cL) / 2``, as a tree in the
    generators ``rho_B<tag>`` and ``rho_cL<tag>``."""

    spec: BumpSpec
    expr: SmoothExpr
    chi_expr: SmoothExpr
    tag: str = ""

    @property
    def generators(self) -> tuple[str, str]:
        return (f"rho_B{self.tag}", f"rho_cL{self.tag}")

    def bind(self, p) -> dict:
        gb, gc = self.generators
        return {gb: self.spec.rho_B(p), gc: self.spec.rho_cL(p)}

    def __call__(self, p) -> float:
        return smooth_eval(self.expr, self.bind(p))

    def at(self, a: float) -> float:
        """Evaluate as a function of the averaged defining function."""
        gb, gc = self.generators
        return smooth_eval(self.expr, {gb: 2 * a, gc: 0.0})

    def chi_at(self, a: float, digits: int | None = None):
        return smooth_eval(self.chi_expr, {"a": a}, digits)

    def diagnostics(self, samples: int = 2001, h: float = 1e-4) -> "BumpDiagnostics":
        return bump_diagnostics(self, samples, h)


def bump_function(spec: BumpSpec, tag: str = "") -> Bump:
    gb, gc = Gen(f"rho_B{tag}"), Gen(f"rho_cL{tag}")
    a = (gb + gc) * Fraction(1, 2)
    f = 1 - _psi(a, spec.epsilon)
    return Bump(spec, f, chi(Gen("a"), spec.epsilon), tag)


@dataclass
class BumpDiagnostics:
    center_value: float
    range_ok: bool
    support_ok: bool
    chi_conditions: dict  # interval name -> bool
    max_seam_jump: float

    @property
    def passed(self) -> bool:
        return (self.center_value == 1.0 and self.range_ok and self.support_ok
                and all(self.chi_conditions.values()) and self.max_seam_jump < 1e-6)


def bump_diagnostics(bump: Bump, samples: int = 2001, h: float = 1e-4) -> BumpDiagnostics:
    eps = float(bump.spec.epsilon)
    grid = [eps * i / (samples - 1) for i in range(samples)]
    values = [bump.at(a) for a in grid]
    range_ok = all(0.0 <= v <= 1.0 for v in values)
    support_ok = all(v == 0.0 for a, v in zip(grid, values) if a >= 4 * eps / 5)
    c = {}
    # exact rational grid so interval ends are hit exactly
    E = bump.spec.epsilon
    inner = [E * i / (samples - 1) for i in range(1, samples - 1)]
    conds = [
        ("(0,1/5]", lambda a: a <= E / 5, lambda x: x == 0),
        ("(1/5,2/5)", lambda a: E / 5 < a < 2 * E / 5, lambda x: 0 < x < 1),
        ("[2/5,3/5]", lambda a: 2 * E / 5 <= a <= 3 * E / 5, lambda x: x == 1),
        ("(3/5,4/5)", lambda a: 3 * E / 5 < a < 4 * E / 5, lambda x: 0 < x < 1),
        ("[4/5,1)", lambda a: 4 * E / 5 <= a, lambda x: x == 0),
    ]
    # near the ends of the transition bands chi is within exp(-1/t) of 0 or 1,
    # so strict inequalities are decided in extended precision
    tmin = 5.0 / (samples - 1)
    digits = int(1 / (tmin * math.log(10))) + 30
    for name, where, ok in conds:
        c[name] = all(ok(bump.chi_at(a, digits)) for a in inner if where(a))
    jumps = []
    for j in (1, 2, 3, 4):
        s = eps * j / 5
        for fn in (bump.at, bump.chi_at):
            left = (fn(s) - fn(s - h)) / h
            right = (fn(s + h) - fn(s)) / h
            jumps.append(abs(right - left))
    return BumpDiagnostics(bump.at(0.0), range_ok, support_ok, c, max(jumps))


@dataclass
class PartitionOfUnity:
    bumps: list  # of Bump, one per region
    functions: list  # of SmoothExpr f_i = g_i / sum g_j
    bound: Fraction

    def bind(self, p) -> dict:
        env = {}
        for b in self.bumps:
            env.update(b.bind(p))
        return env

    def values(self, p) -> list[float]:
        env = self.bind(p)
        return [smooth_eval(f, env) for f in self.functions]

    def __len__(self):
        return len(self.functions)


def partition_of_unity(cover: Sequence[BumpSpec], samples: Sequence[Mapping[str, float]]) -> PartitionOfUnity:
    """``f_i = g_i / sum_j g_j`` for bumps ``g_i`` on the regions of ``cover``.

    The reciprocal guard is half the smallest value of ``sum_j g_j`` over the
    sample points; a zero there is a gap in the cover.
    """
    if not cover:
        raise CoverGap("empty cover")
    bumps = [bump_function(spec, tag=f"_{i}") for i, spec in enumerate(cover)]
    total = sum((b.expr for b in bumps[1:]), bumps[0].expr)
    lowest = math.inf
    for p in samples:
        env = {}
        for b in bumps:
            env.update(b.bind(p))
        s = smooth_eval(total, env)
        if s <= 0.0:
            raise CoverGap(f"no region covers {dict(p)}")
        lowest = min(lowest, s)
    if lowest is math.inf:
        raise CoverGap("no sample points")
    bound = Fraction(lowest) / 2
    inv = smooth_invert(total, bound)
    return PartitionOfUnity(bumps, [b.expr * inv for b in bumps], bound)


def separates_points(x1: Mapping[str, float], x2: Mapping[str, float], cone_coordinate: str | None = None) -> Bump:
    """A bump with ``f(x2) = 1`` and ``f(x1) = 0``.

    If ``x2`` is the apex of a cone (its ``cone_coordinate`` vanishes) the bump
    uses the cone's defining function plus the distance in the remaining
    coordinates; otherwise the plain distance to ``x2``.
    """
    coords = tuple(sorted(set(x1) | set(x2)))
    a = {c: float(x1.get(c, 0.0)) for c in coords}
    b = {c: float(x2.get(c, 0.0)) for c in coords}
    if a == b:
        raise IdenticalPoints("cannot separate a point from itself")
    if cone_coordinate is not None and b.get(cone_coordinate) == 0.0:
        rest = tuple(c for c in coords if c != cone_coordinate)
        rho_B = Distance(rest, tuple(b[c] for c in rest)) if rest else Zero()
        spec_rho = dict(rho_B=rho_B, rho_cL=ConeRadius(cone_coordinate))
    else:
        spec_rho = dict(rho_B=Distance(coords, tuple(b[c] for c in coords)), rho_cL=Zero())
    probe = BumpSpec(1, **spec_rho)
    dist = probe.rho_B(a) + probe.rho_cL(a)
    # f vanishes once (rho_B + rho_cL)/2 >= 2 eps/5, i.e. for rho sum >= 4 eps/5
    eps = Fraction(dist) * Fraction(9, 10)
    return bump_function(BumpSpec(eps, **spec_rho))


def cone_line_model() -> StratifiedModel:
    """The 1-D cone ``c(pt) = [0, inf)`` with apex and open ray."""
    return cone(point("ray"), apex="apex")


def grid_csv(rows: Sequence[Sequence], header: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()
