"""Command-line front end.

Exit codes: 0 when every verdict passes, 1 when a verdict fails, 2 for a
bad model or bad parameters.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import homology, lefschetz, stratified
from .coeffring import parse_poly
from .errors import CoverGap, StratSympError
from .exterior import CE, d
from .hamflow import HamiltonianSystem, conservation_report, integrate, symbolic_conservation, vanishes_on
from .models import SCHEMA_VERSION, builtin_names, dumps_entry, load_builtin, load_model
from .sampling import DEFAULT_SEED, random_form, rng
from .symplectic import delta, delta_formula, delta_via_star, star

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive(kind):
    def parse(text):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
        return value

    return parse


def _model(args):
    try:
        return load_model(args.model)
    except StratSympError as exc:
        raise UsageError(str(exc)) from exc


def _symplectic(args):
    entry = _model(args)
    if entry.symplectic is None:
        raise UsageError(f"model {entry.name!r} has no symplectic chart")
    return entry


# ---------------------------------------------------------------------------
# commands; each returns (exit code, report dict, csv rows or None)


def cmd_homology(args):
    entry = _symplectic(args)
    model = entry.symplectic
    dim = model.dimension
    degrees = None
    if args.degree is not None:
        if not 0 <= args.degree <= dim:
            raise UsageError(f"--degree must lie in 0..{dim}")
        degrees = [args.degree]
    report = {"model": entry.name, "chart": model.chart.kind}
    rows = []
    if model.chart.kind == CE:
        bd = homology.betti(model, "d", degrees=degrees, threads=args.threads)
        bdel = homology.betti(model, "delta", degrees=degrees, threads=args.threads)
        report["betti_d"] = [bd.ranks[k] for k in sorted(bd.ranks)]
        report["betti_delta"] = [bdel.ranks[k] for k in sorted(bdel.ranks)]
        for k in sorted(bd.ranks):
            rows.append(["d", "", k, bd.ranks[k]])
            rows.append(["delta", "", k, bdel.ranks[k]])
        verdict = homology.hodge_duality_check(model, degrees=degrees, threads=args.threads)
    else:
        top = 2 if args.total_degree is None else args.total_degree
        if top < 0:
            raise UsageError("--total-degree must be nonnegative")
        pieces = []
        for t in range(top + 1):
            bd = homology.betti(model, "d", total_degree=t, degrees=degrees, threads=args.threads)
            bdel = homology.betti(model, "delta", total_degree=t, degrees=degrees, threads=args.threads)
            pieces.append({"total_degree": t, "betti_d": [bd.ranks[k] for k in sorted(bd.ranks)],
                           "betti_delta": [bdel.ranks[k] for k in sorted(bdel.ranks)]})
            for k in sorted(bd.ranks):
                rows.append(["d", t, k, bd.ranks[k]])
                rows.append(["delta", t, k, bdel.ranks[k]])
        report["pieces"] = pieces
        verdict = homology.hodge_duality_check(model, degrees=degrees, max_poly_degree=top, threads=args.threads)
    report["duality"] = {
        "passed": verdict.passed,
        "rows": [{"k": k, "poly_degree": p, "rank_delta": a, "rank_d_dual": b} for k, p, a, b in verdict.rows],
    }
    header = ["operator", "total_degree", "degree", "rank"]
    return (EXIT_OK if verdict.passed else EXIT_FAIL), report, (header, rows)


def cmd_lefschetz(args):
    entry = _symplectic(args)
    model = entry.symplectic
    if model.chart.kind != CE:
        raise UsageError("lefschetz needs a CE chart (finite cohomology)")
    n = model.n
    if args.k is not None and not 0 <= args.k <= n:
        raise UsageError(f"--k must lie in 0..{n}")
    hlc = homology.hard_lefschetz_check(model)
    if args.k is not None:
        hlc = {args.k: hlc[args.k]}
    classes = homology.harmonic_classes_report(model)
    harmonic = []
    for k, items in classes.items():
        for z, h in items:
            harmonic.append({"degree": k, "class": str(z), "harmonic": None if h is None else str(h)})
    all_hlc = all(homology.hard_lefschetz_check(model).values())
    all_harm = all(item["harmonic"] is not None for item in harmonic)
    cav = {k: homology.cavalcanti_check(model, k) for k in range(model.dimension + 1)}
    report = {
        "model": entry.name,
        "hard_lefschetz": {str(k): v for k, v in sorted(hlc.items())},
        "harmonic_representatives": harmonic,
        "every_class_harmonic": all_harm,
        "hard_lefschetz_all": all_hlc,
        "equivalence_holds": all_harm == all_hlc,
        "cavalcanti": {str(k): {"holds": v.holds, "dim_im_delta_cap_ker_d": v.dim_im_delta_cap_ker_d,
                                "dim_im_d_cap_im_delta": v.dim_im_d_cap_im_delta} for k, v in cav.items()},
        "lefschetz_constants": {str(k): str(lefschetz.lefschetz_constant(k)) for k in range(n + 1)},
    }
    rows = [[k, hlc.get(k, ""), cav[k].holds if k in cav else ""] for k in range(model.dimension + 1)]
    return (EXIT_OK if all_harm == all_hlc else EXIT_FAIL), report, (["k", "hard_lefschetz", "cavalcanti"], rows)


def _parse_state(text, gens):
    values = {}
    for part in text.split(","):
        if not part.strip():
            continue
        name, _, value = part.partition("=")
        name = name.strip()
        if name not in gens:
            raise UsageError(f"unknown generator {name!r} in --initial")
        try:
            values[name] = float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad value in --initial: {part!r}") from None
    missing = [g for g in gens if g not in values]
    if missing:
        raise UsageError(f"--initial is missing {missing}")
    return values


def cmd_flow(args):
    entry = _model(args)
    if entry.poisson is None:
        raise UsageError(f"model {entry.name!r} has no Poisson presentation")
    gens = entry.poisson.generators
    try:
        H = parse_poly(args.hamiltonian, gens)
        sys_ = HamiltonianSystem(entry.poisson, H, entry.flow_strata)
    except StratSympError as exc:
        raise UsageError(str(exc)) from exc
    initial = _parse_state(args.initial, gens) if args.initial else {g: float(i == 0) for i, g in enumerate(gens)}
    try:
        traj = integrate(sys_, initial, args.t_end, args.dt)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    except StratSympError as exc:
        return EXIT_FAIL, {"model": entry.name, "error": str(exc)}, None
    rep = conservation_report(traj, sys_)
    symbolic = {k: str(v) for k, v in symbolic_conservation(sys_).items()}
    apex = None
    if any(p.id == "apex" for p in sys_.strata):
        apex = vanishes_on(sys_, "apex")
    ok = rep.passed(args.tolerance) and all(v == "0" for v in symbolic.values()) and apex is not False
    report = {
        "model": entry.name,
        "hamiltonian": str(sys_.H),
        "initial": {g: initial[g] for g in gens},
        "t_end": args.t_end,
        "dt": args.dt,
        "steps": len(traj) - 1,
        "final_state": dict(zip(gens, traj.states[-1])),
        "H_drift": rep.H_drift,
        "relation_drifts": rep.relation_drifts,
        "stratum_changes": rep.stratum_changes,
        "strata_visited": sorted({s for s in traj.stratum_ids if s is not None}),
        "symbolic_conservation": symbolic,
        "apex_fixed": apex,
        "tolerance": args.tolerance,
        "passed": ok,
    }
    csv_text = traj.to_csv(sys_)
    return (EXIT_OK if ok else EXIT_FAIL), report, csv_text


def _parse_region(text):
    """``center:epsilon``; a center of ``apex`` (or 0) uses the cone radius."""
    center, _, eps = text.partition(":")
    try:
        eps = Fraction(eps)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad region {text!r}; expected center:epsilon") from None
    if eps <= 0:
        raise UsageError(f"region epsilon must be positive in {text!r}")
    if center.strip() in ("apex", "0"):
        return stratified.BumpSpec(eps, rho_cL=stratified.ConeRadius("t"))
    try:
        c = float(Fraction(center))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad region center {center!r}") from None
    return stratified.BumpSpec(eps, rho_B=stratified.Distance(("t",), (c,)))


def cmd_pou(args):
    regions = args.region or ["apex:1", "3/2:2"]
    cover = [_parse_region(r) for r in regions]
    lo, _, hi = args.domain.partition(":")
    try:
        lo, hi = float(Fraction(lo)), float(Fraction(hi))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad --domain {args.domain!r}") from None
    if not 0 <= lo < hi:
        raise UsageError("--domain must satisfy 0 <= lo < hi on the cone")
    n = args.samples
    pts = [{"t": lo + (hi - lo) * i / (n - 1)} for i in range(n)]
    diag = stratified.bump_function(stratified.BumpSpec(args.epsilon, rho_cL=stratified.ConeRadius("t"))).diagnostics()
    report = {
        "model": "cone_line",
        "regions": regions,
        "samples": n,
        "bump": {"epsilon": str(Fraction(args.epsilon)), "center_value": diag.center_value,
                 "range_ok": diag.range_ok, "support_ok": diag.support_ok,
                 "chi_conditions": diag.chi_conditions, "max_seam_jump": diag.max_seam_jump},
    }
    try:
        pou = stratified.partition_of_unity(cover, pts)
    except CoverGap as exc:
        report["cover_gap"] = str(exc)
        report["passed"] = False
        return EXIT_FAIL, report, None
    rows, worst = [], 0.0
    for p in pts:
        vals = pou.values(p)
        s = math.fsum(vals)
        worst = max(worst, abs(s - 1))
        rows.append([p["t"], *vals, s])
    ok = worst <= 1e-12 and diag.passed and all(min(r[1:-1]) >= 0 for r in rows)
    report.update({"max_sum_error": worst, "reciprocal_bound": str(pou.bound), "passed": ok})
    header = ["t", *[f"f{i}" for i in range(len(cover))], "sum"]
    return (EXIT_OK if ok else EXIT_FAIL), report, (header, rows)


def cmd_membership(args):
    try:
        spec = stratified.FibrationSpec(args.n, args.k, args.l)
        g = parse_poly(args.poly, spec.variables)
        res = stratified.fiber_constancy_membership(g, spec)
    except (StratSympError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    report = {
        "poly": str(g),
        "variables": {"normal": list(spec.normal), "fiber": list(spec.fiber), "base": list(spec.base)},
        "member": res.member,
        "verdict": "member" if res.member else "not a member",
    }
    if res.member:
        report["certificate"] = {"g": [str(p) for p in res.g], "c": str(res.c)}
        report["reassembles"] = res.reassemble(spec) == g
    else:
        report["obstruction"] = str(res.obstruction)
    rows = [[str(g), res.member]]
    return EXIT_OK, report, (["poly", "member"], rows)


def cmd_cotangent(args):
    try:
        spec = stratified.FibrationSpec(args.n, args.k, args.l)
        w = stratified.cotangent_growth_witness(spec, args.m_max)
    except (StratSympError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    report = {"m_max": w.m_max, "truncation_degree": w.truncation, "rank": w.rank, "independent": w.independent,
              "vectors": [str(v) for v in w.vectors]}
    return (EXIT_OK if w.independent else EXIT_FAIL), report, (["m_max", "rank"], [[w.m_max, w.rank]])


def cmd_identities(args):
    """Seeded check of the operator identities on random forms."""
    entry = _symplectic(args)
    model = entry.symplectic
    r = rng(args.seed)
    failures = []
    for i in range(args.count):
        a = random_form(r, model.chart)
        checks = {"d2": d(d(a)).is_zero(), "delta2": delta(delta(a, model), model).is_zero(),
                  "star_route": delta_via_star(a, model) == delta(a, model)}
        if model.chart.kind != CE:
            checks["formula"] = delta_formula(a, model) == delta(a, model)
        for k, part in a.components().items():
            checks[f"star2_{k}"] = star(star(part, model), model) == part
        bad = sorted(k for k, v in checks.items() if not v)
        if bad:
            failures.append({"sample": i, "form": str(a), "failed": bad})
    report = {"model": entry.name, "seed": args.seed, "count": args.count, "failures": failures,
              "passed": not failures}
    return (EXIT_OK if not failures else EXIT_FAIL), report, (["count", "failures"], [[args.count, len(failures)]])


def cmd_list(args):
    entries = []
    for name in builtin_names():
        entries.append(load_builtin("r2n(1)" if name == "r2n(n)" else name).summary() | {"name": name})
    return EXIT_OK, {"models": entries}, (["name", "doc"], [[e["name"], e["doc"]] for e in entries])


def cmd_export(args):
    entry = _model(args)
    return EXIT_OK, None, dumps_entry(entry)


COMMANDS = {
    "homology": cmd_homology,
    "lefschetz": cmd_lefschetz,
    "flow": cmd_flow,
    "pou": cmd_pou,
    "membership": cmd_membership,
    "cotangent": cmd_cotangent,
    "identities": cmd_identities,
    "list": cmd_list,
    "export": cmd_export,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stratsymp", description="Exact symplectic exterior calculus on model charts.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--threads", type=int, default=None, help=f"worker threads (default ${homology.THREADS_ENV} or 1)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", parents=[common], help="Betti numbers for d and delta, duality verdict")
    p.add_argument("--model", required=True)
    p.add_argument("--degree", type=int)
    p.add_argument("--total-degree", type=int, help="largest total degree on coordinate charts (default 2)")

    p = sub.add_parser("lefschetz", parents=[common], help="hard Lefschetz, harmonic representatives, Cavalcanti")
    p.add_argument("--model", required=True)
    p.add_argument("--k", type=int)

    p = sub.add_parser("flow", parents=[common], help="integrate a Hamiltonian flow")
    p.add_argument("--model", required=True)
    p.add_argument("--hamiltonian", default="u + v")
    p.add_argument("--initial", help="e.g. u=1,v=0,w=0")
    p.add_argument("--t-end", type=_positive(float), default=20.0)
    p.add_argument("--dt", type=_positive(float), default=1e-3)
    p.add_argument("--tolerance", type=_positive(float), default=1e-9)

    p = sub.add_parser("pou", parents=[common], help="partition of unity on the 1-D cone")
    p.add_argument("--region", action="append", help="center:epsilon, center 'apex' for the cone point")
    p.add_argument("--domain", default="0:3")
    p.add_argument("--samples", type=_positive(int), default=1000)
    p.add_argument("--epsilon", type=_positive(Fraction), default=Fraction(1))

    for name, helptext in (("membership", "fiber-constancy membership"), ("cotangent", "cotangent growth witness")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--n", type=int, default=3)
        p.add_argument("--k", type=int, default=2)
        p.add_argument("--l", type=int, default=1)
        if name == "membership":
            p.add_argument("--poly", required=True)
        else:
            p.add_argument("--m-max", type=_positive(int), default=8)

    p = sub.add_parser("identities", parents=[common], help="seeded operator identity checks")
    p.add_argument("--model", default="r2n(2)")
    p.add_argument("--count", type=_positive(int), default=20)

    sub.add_parser("list", parents=[common], help="list builtin models")
    p = sub.add_parser("export", parents=[common], help="print a model in the JSON model-file format")
    p.add_argument("--model", required=True)
    return parser


def _render(report, table, fmt, command) -> str:
    if isinstance(table, str) and (fmt == "csv" or report is None):
        return table
    if fmt == "csv" and table is not None:
        header, rows = table
        return stratified.grid_csv(rows, header)
    return json.dumps({"schema_version": SCHEMA_VERSION, "command": command, **(report or {})},
                      indent=2, sort_keys=True) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "threads", None) is not None and args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        code, report, table = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = _render(report, table, args.format, args.command)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
