"""Hamiltonian flows on Poisson presentations.

The vector field ``X_H(f) = {H, f}`` is computed exactly; its flow is
integrated numerically with classical fixed-step RK4.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .coeffring import Poly, poly_reduce
from .errors import InvalidPresentation, NonFiniteState
from .symplectic import PoissonPresentation, poisson_bracket

CLASSIFIER_TOLERANCE = 1e-10


@dataclass(frozen=True)
class StratumPredicate:
    """``all |p| <= tol for p in zero`` and, if ``nonzero`` is given,
    ``some |q| > tol for q in nonzero``."""

    id: str
    zero: tuple = ()
    nonzero: tuple = ()

    def holds(self, values: Mapping[str, float], tol: float = CLASSIFIER_TOLERANCE) -> bool:
        if any(abs(float(p.evaluate(values))) > tol for p in self.zero):
            return False
        if self.nonzero and not any(abs(float(q.evaluate(values))) > tol for q in self.nonzero):
            return False
        return True


class HamiltonianSystem:
    def __init__(self, poisson: PoissonPresentation, H, strata: Sequence[StratumPredicate] = ()):
        self.poisson = poisson
        gens = poisson.generators
        self.H = poisson.presentation.poly(H) if isinstance(H, str) else H.with_variables(gens)
        self.strata = tuple(strata)
        for rel in poisson.presentation.relations:
            br = poisson_bracket(self.H, rel, poisson)
            if br:
                raise InvalidPresentation(f"{{H, {rel}}} = {br} does not vanish: flow leaves the variety")

    @property
    def generators(self) -> tuple[str, ...]:
        return self.poisson.generators

    @property
    def relations(self) -> tuple[Poly, ...]:
        return self.poisson.presentation.relations

    def classify(self, values: Mapping[str, float]) -> str | None:
        hits = [s.id for s in self.strata if s.holds(values)]
        if len(hits) > 1:
            raise ValueError(f"stratum predicates overlap at {dict(values)}: {hits}")
        return hits[0] if hits else None

    def __repr__(self):
        return f"HamiltonianSystem(H={self.H})"


def ham_vector_field(sys: HamiltonianSystem) -> list[Poly]:
    """Components ``{H, g}`` for each generator ``g``, reduced."""
    gens = sys.generators
    return [poisson_bracket(sys.H, Poly.var(g, gens), sys.poisson) for g in gens]


def symbolic_conservation(sys: HamiltonianSystem) -> dict[str, Poly]:
    """``{H, H}`` and ``{H, r}`` for each relation; all should be zero."""
    out = {"H": poisson_bracket(sys.H, sys.H, sys.poisson)}
    for r in sys.relations:
        out[str(r)] = poisson_bracket(sys.H, r, sys.poisson)
    return out


def vanishes_on(sys: HamiltonianSystem, stratum_id: str) -> bool:
    """Do all components of ``X_H`` lie in the ideal of the stratum?

    Only strata cut out by generators (``zero`` entries that are single
    variables) are supported, which covers the apex of the shipped cones.
    """
    pred = next(s for s in sys.strata if s.id == stratum_id)
    gens = sys.generators
    zero_vars = {}
    for p in pred.zero:
        used = p.used_variables()
        if len(p.terms) != 1 or len(used) != 1 or p.degree() != 1:
            raise ValueError(f"stratum {stratum_id!r} is not cut out by generators")
        zero_vars[used.pop()] = Poly.zero(gens)
    return all(not poly_reduce(c.substitute(zero_vars).with_variables(gens), sys.poisson.presentation)
               for c in ham_vector_field(sys))


@dataclass
class Trajectory:
    generators: tuple
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    stratum_ids: list = field(default_factory=list)

    def values(self, i: int) -> dict:
        return dict(zip(self.generators, self.states[i]))

    def __len__(self):
        return len(self.times)

    def to_csv(self, sys: HamiltonianSystem) -> str:
        gens = self.generators
        Hf = sys.H.compile(gens)
        rels = [r.compile(gens) for r in sys.relations]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", *gens, "H", *[f"residual_{i}" for i in range(len(rels))], "stratum"])
        for t, x, s in zip(self.times, self.states, self.stratum_ids):
            w.writerow([repr(t), *map(repr, x), repr(Hf(x)), *[repr(r(x)) for r in rels], s])
        return buf.getvalue()


def _check_finite(x, t):
    if not all(math.isfinite(v) for v in x):
        raise NonFiniteState(f"state became non-finite at t = {t}: {x}")


def integrate(sys: HamiltonianSystem, initial, t_end: float, dt: float, record_every: int = 1) -> Trajectory:
    """Classical RK4 with fixed step ``dt`` from ``t = 0`` to ``t_end``.

    The state update uses compensated summation so that roundoff stays well
    below the method's truncation error over long runs.
    """
    gens = sys.generators
    if isinstance(initial, Mapping):
        x = [float(initial[g]) for g in gens]
    else:
        x = [float(v) for v in initial]
    if len(x) != len(gens):
        raise ValueError(f"initial state needs {len(gens)} values")
    if not dt > 0:
        raise ValueError("dt must be positive")
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    _check_finite(x, 0.0)
    point = dict(zip(gens, x))
    for r in sys.relations:
        if abs(float(r.evaluate(point))) > 1e-12:
            raise ValueError(f"initial state violates relation {r} = 0")
    field_ = [c.compile(gens) for c in ham_vector_field(sys)]
    dim = len(x)

    def F(y):
        return [f(y) for f in field_]

    steps = int(round(t_end / dt))
    traj = Trajectory(gens)
    comp = [0.0] * dim

    def record(i, y):
        t = i * dt
        traj.times.append(t)
        traj.states.append(tuple(y))
        traj.stratum_ids.append(sys.classify(dict(zip(gens, y))))

    record(0, x)
    half = dt / 2
    for i in range(1, steps + 1):
        k1 = F(x)
        k2 = F([a + half * b for a, b in zip(x, k1)])
        k3 = F([a + half * b for a, b in zip(x, k2)])
        k4 = F([a + dt * b for a, b in zip(x, k3)])
        for j in range(dim):
            inc = dt / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]) - comp[j]
            new = x[j] + inc
            comp[j] = (new - x[j]) - inc
            x[j] = new
        _check_finite(x, i * dt)
        if i % record_every == 0 or i == steps:
            record(i, x)
    return traj


@dataclass
class ConservationReport:
    H_drift: float
    relation_drifts: list
    stratum_changes: int

    def max_drift(self) -> float:
        return max([self.H_drift, *self.relation_drifts])

    def passed(self, tol: float = 1e-9) -> bool:
        return self.max_drift() < tol and self.stratum_changes == 0


def conservation_report(traj: Trajectory, sys: HamiltonianSystem) -> ConservationReport:
    """Drifts recomputed from the stored states."""
    gens = traj.generators
    Hf = sys.H.compile(gens)
    rels = [r.compile(gens) for r in sys.relations]
    x0 = traj.states[0]
    H0 = Hf(x0)
    r0 = [r(x0) for r in rels]
    H_drift = max(abs(Hf(x) - H0) for x in traj.states)
    drifts = [max(abs(r(x) - c) for x in traj.states) for r, c in zip(rels, r0)]
    changes = sum(1 for a, b in zip(traj.stratum_ids, traj.stratum_ids[1:]) if a != b)
    return ConservationReport(H_drift, drifts, changes)
