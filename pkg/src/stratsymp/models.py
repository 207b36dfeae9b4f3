"""Built-in models and the JSON model-file format.

Catalog:

- ``r2n(n)``: coordinate ``R^{2n}`` with the standard form.
- ``torus4``: abelian CE chart of the 4-torus.
- ``kodaira_thurston``: CE chart with ``de4 = -e1^e2``, the standard
  example failing hard Lefschetz.
- ``cz2_cone``: ``R^2 / Z_2`` presented by ``u = x^2, v = y^2, w = xy``.
- ``sl2_cone``: the nilpotent cone of sl_2 with its Lie-Poisson bracket.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .coeffring import AlgebraPresentation, Poly
from .errors import ModelFileError, StratSympError, UnknownModel
from .exterior import CE, COORDINATE, ModelChart
from .hamflow import StratumPredicate
from .stratified import Embedded, Quotient, StratifiedModel, StratumRecord
from .symplectic import PoissonPresentation, SymplecticModel

SCHEMA_VERSION = 1


@dataclass
class ModelCatalogEntry:
    name: str
    doc: str = ""
    symplectic: SymplecticModel | None = None
    poisson: PoissonPresentation | None = None
    stratified: StratifiedModel | None = None
    flow_strata: tuple = ()

    @property
    def chart(self) -> ModelChart | None:
        return self.symplectic.chart if self.symplectic else None

    def summary(self) -> dict:
        out = {"name": self.name, "doc": self.doc}
        if self.symplectic:
            out["chart"] = self.chart.kind
            out["dimension"] = self.chart.dimension
        if self.poisson:
            out["generators"] = list(self.poisson.generators)
            out["relations"] = [str(r) for r in self.poisson.presentation.relations]
        if self.stratified:
            out["strata"] = len(self.stratified)
            out["depth"] = self.stratified.depth
        return out


def _coordinate_names(n: int) -> list[str]:
    if n == 1:
        return ["x", "y"]
    return [f"{c}{i}" for i in range(1, n + 1) for c in ("x", "y")]


def r2n(n: int) -> ModelCatalogEntry:
    if n < 1:
        raise UnknownModel(f"r2n needs n >= 1, got {n}")
    names = _coordinate_names(n)
    chart = ModelChart.coordinate(names, label=f"r2n({n})")
    sym = SymplecticModel(chart)
    pres = AlgebraPresentation(tuple(names))
    brackets = {(names[2 * i], names[2 * i + 1]): "1" for i in range(n)}
    strat = StratifiedModel([StratumRecord("R", 2 * n, True)], presentation=Embedded(2 * n), label=f"r2n({n})")
    return ModelCatalogEntry(f"r2n({n})", f"coordinate R^{2 * n} with the standard symplectic form",
                             sym, PoissonPresentation(pres, brackets, f"r2n({n})"), strat)


def torus4() -> ModelCatalogEntry:
    chart = ModelChart.chevalley_eilenberg(4, [], label="torus4")
    return ModelCatalogEntry("torus4", "invariant forms on the 4-torus (all structure constants zero)",
                             SymplecticModel(chart))


KT_OMEGA = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]


def kodaira_thurston() -> ModelCatalogEntry:
    chart = ModelChart.chevalley_eilenberg(4, [(4, 1, 2, 1)], label="kodaira_thurston")
    # e1^e2 + e3^e4 is not closed here (d(e3^e4) = e1^e2^e3); e1^e3 + e2^e4 is
    return ModelCatalogEntry("kodaira_thurston",
                             "nilmanifold with de4 = -e1^e2 and omega = e1^e3 + e2^e4",
                             SymplecticModel(chart, KT_OMEGA))


def _cone_strata(pres: AlgebraPresentation, dim: int, action: str, invariants, label: str):
    gens = pres.generators
    polys = tuple(Poly.var(g, gens) for g in gens)
    strata = (StratumPredicate("apex", zero=polys), StratumPredicate("regular", nonzero=polys))
    model = StratifiedModel([StratumRecord("apex", 0), StratumRecord("regular", dim, True)],
                            [("apex", "regular")],
                            presentation=Quotient(action, tuple(invariants), tuple(str(r) for r in pres.relations)),
                            label=label)
    return strata, model


def cz2_cone() -> ModelCatalogEntry:
    pres = AlgebraPresentation(("u", "v", "w"), ("w^2 - u*v",), monomial_order=("grlex", ("w", "u", "v")))
    poisson = PoissonPresentation(pres, {("u", "v"): "4*w", ("u", "w"): "2*u", ("v", "w"): "-2*v"}, "cz2_cone")
    strata, model = _cone_strata(pres, 2, "Z2 acting on R^2 by (x, y) -> (-x, -y)",
                                 ("u = x^2", "v = y^2", "w = x*y"), "cz2_cone")
    return ModelCatalogEntry("cz2_cone", "R^2/Z2 as the cone w^2 = uv with the reduced bracket",
                             poisson=poisson, stratified=model, flow_strata=strata)


def sl2_cone() -> ModelCatalogEntry:
    pres = AlgebraPresentation(("e", "f", "h"), ("h^2 + 4*e*f",), monomial_order=("grlex", ("h", "e", "f")))
    poisson = PoissonPresentation(pres, {("h", "e"): "2*e", ("h", "f"): "-2*f", ("e", "f"): "h"}, "sl2_cone")
    strata, model = _cone_strata(pres, 2, "adjoint action of SL2 on its nilpotent orbit closure",
                                 ("e", "f", "h"), "sl2_cone")
    return ModelCatalogEntry("sl2_cone", "nilpotent cone h^2 + 4ef = 0 in sl2* with the Lie-Poisson bracket",
                             poisson=poisson, stratified=model, flow_strata=strata)


_BUILDERS = {
    "torus4": torus4,
    "kodaira_thurston": kodaira_thurston,
    "cz2_cone": cz2_cone,
    "sl2_cone": sl2_cone,
}


def builtin_names() -> list[str]:
    return ["r2n(n)", *sorted(_BUILDERS)]


def load_builtin(name: str) -> ModelCatalogEntry:
    m = re.fullmatch(r"r2n(?:\((\d+)\))?", name.strip())
    if m:
        return r2n(int(m.group(1) or 1))
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise UnknownModel(f"unknown model {name!r}; available: {', '.join(builtin_names())}") from None


# --------------------------------------------------------------------------
# model files


def export_entry(entry: ModelCatalogEntry) -> dict:
    out: dict = {"schema_version": SCHEMA_VERSION, "name": entry.name, "doc": entry.doc}
    if entry.symplectic:
        chart = entry.chart
        out["chart"] = {
            "kind": chart.kind,
            "names": list(chart.names),
            "structure": [[k + 1, i + 1, j + 1, str(v)] for (k, i, j), v in chart.structure],
        }
        om = entry.symplectic.omega
        out["omega"] = [[i + 1, j + 1, str(om[i][j])] for i in range(len(om)) for j in range(i + 1, len(om)) if om[i][j]]
    if entry.poisson:
        pres = entry.poisson.presentation
        out["poisson"] = {
            "generators": list(pres.generators),
            "priority": list(pres.monomial_order[1]),
            "relations": [str(r) for r in pres.relations],
            "brackets": [[a, b, str(v)] for (a, b), v in sorted(entry.poisson.brackets.items())
                         if pres.generators.index(a) < pres.generators.index(b)],
        }
    if entry.stratified:
        s = entry.stratified
        out["strata"] = [{"id": r.id, "dimension": r.dimension, "regular": r.is_regular} for r in s.strata]
        out["order"] = [list(p) for p in s.relations()]
    if entry.flow_strata:
        out["flow_strata"] = [{"id": p.id, "zero": [str(q) for q in p.zero], "nonzero": [str(q) for q in p.nonzero]}
                              for p in entry.flow_strata]
    return out


def dumps_entry(entry: ModelCatalogEntry) -> str:
    return json.dumps(export_entry(entry), indent=2, sort_keys=True) + "\n"


def entry_from_dict(data: dict) -> ModelCatalogEntry:
    try:
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ModelFileError(f"unsupported schema_version {data.get('schema_version')!r}")
        name = data.get("name", "unnamed")
        sym = poisson = strat = None
        flow = ()
        if "chart" in data:
            c = data["chart"]
            names = c["names"]
            if c["kind"] == CE:
                chart = ModelChart.chevalley_eilenberg(len(names), [(k, i, j, Fraction(v)) for k, i, j, v in c.get("structure", [])],
                                                       names, label=name)
            elif c["kind"] == COORDINATE:
                chart = ModelChart.coordinate(names, label=name)
            else:
                raise ModelFileError(f"unknown chart kind {c['kind']!r}")
            omega = None
            if "omega" in data:
                dim = len(names)
                omega = [[Fraction(0)] * dim for _ in range(dim)]
                for i, j, v in data["omega"]:
                    omega[i - 1][j - 1] = Fraction(v)
                    omega[j - 1][i - 1] = -Fraction(v)
            sym = SymplecticModel(chart, omega, label=name)
        if "poisson" in data:
            p = data["poisson"]
            gens = tuple(p["generators"])
            pres = AlgebraPresentation(gens, tuple(p.get("relations", ())),
                                       monomial_order=("grlex", tuple(p.get("priority", gens))))
            poisson = PoissonPresentation(pres, {(a, b): v for a, b, v in p.get("brackets", [])}, name)
            flow = tuple(
                StratumPredicate(s["id"], tuple(pres.poly(q) for q in s.get("zero", [])),
                                 tuple(pres.poly(q) for q in s.get("nonzero", [])))
                for s in data.get("flow_strata", [])
            )
        if "strata" in data:
            strat = StratifiedModel([StratumRecord(s["id"], s["dimension"], s.get("regular", False)) for s in data["strata"]],
                                    [tuple(p) for p in data.get("order", [])], label=name)
        return ModelCatalogEntry(name, data.get("doc", ""), sym, poisson, strat, flow)
    except ModelFileError:
        raise
    except (StratSympError, KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ModelFileError(f"invalid model file: {type(exc).__name__}: {exc}") from exc


def load_model_file(path) -> ModelCatalogEntry:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelFileError(f"cannot read model file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ModelFileError("model file must hold a JSON object")
    return entry_from_dict(data)


def load_model(source: str) -> ModelCatalogEntry:
    """A builtin name or a path to a model file."""
    p = Path(source)
    if p.suffix == ".json" or p.exists():
        return load_model_file(p)
    return load_builtin(source)
