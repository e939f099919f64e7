"""Command line front end: JSON in, JSON (or DOT) out.

Exit status 0 on success, 2 when the input fails validation, 3 when two lct
engines disagree.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from datetime import datetime, timezone
from decimal import Context
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from .constellation import (
    Branch,
    CurveSpec,
    PointRecord,
    build_constellation,
    check_minimality,
    intersection_matrix,
    validation_errors,
)
from .dualgraph import build_dual_graph, dot_export, proximity_dot, sigma_table, standard_annotations
from .errors import LctError, MethodDisagreement, ValidationError
from .gen import GenConfig, random_spec
from .invariants import contact_pair, point_sets
from .lct import METHODS, LctReport, lct_complete_ideal, reconcile

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INVALID, EXIT_DISAGREE = 0, 2, 3


class InputError(Exception):
    def __init__(self, errors: list[LctError]):
        super().__init__("; ".join(str(e) for e in errors))
        self.errors = errors


# -- documents --------------------------------------------------------------------

def frac_doc(x: Fraction) -> dict[str, Any]:
    return {
        "num": str(x.numerator),
        "den": str(x.denominator),
        "decimal": str(Context(prec=20).divide(x.numerator, x.denominator)),
        "decimal_is_approximate": True,
    }


def frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_document(doc: dict) -> tuple[CurveSpec, str]:
    """``(spec, mode)``; raises :class:`InputError` listing every problem found."""
    if not isinstance(doc, dict):
        raise InputError([ValidationError("document must be a JSON object")])
    if doc.get("version", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise InputError([ValidationError(f"unsupported version {doc.get('version')!r}")])
    mode = doc.get("mode", "curve")
    if mode not in ("curve", "ideal"):
        raise InputError([ValidationError(f"mode must be 'curve' or 'ideal', got {mode!r}")])
    try:
        rows = sorted(doc["points"], key=lambda p: p["id"])
        records = [PointRecord(p["id"], p.get("parent"), p.get("satellite_of")) for p in rows]
        branches = tuple(Branch(str(b.get("name", f"f{k}")), b["at"], b.get("multiplicity", 1))
                         for k, b in enumerate(doc.get("branches", []), start=1))
    except (KeyError, TypeError) as exc:
        raise InputError([ValidationError(f"malformed document: missing or bad field {exc}")])
    errors = validation_errors(records)
    if errors:
        raise InputError(errors)
    try:
        return CurveSpec(build_constellation(records), branches), mode
    except ValidationError as exc:
        raise InputError([exc])


def spec_document(spec: CurveSpec, mode: str = "curve") -> dict[str, Any]:
    points = []
    for r in spec.constellation.points:
        p: dict[str, Any] = {"id": r.id, "parent": r.parent}
        if r.satellite_of is not None:
            p["satellite_of"] = r.satellite_of
        points.append(p)
    branches = []
    for b in spec.branches:
        entry: dict[str, Any] = {"name": b.name, "at": b.at}
        if b.multiplicity != 1:
            entry["multiplicity"] = b.multiplicity
        branches.append(entry)
    doc = {"version": SCHEMA_VERSION, "points": points, "branches": branches}
    if mode != "curve":
        doc["mode"] = mode
    return doc


def invariants_document(spec: CurveSpec) -> dict[str, Any]:
    g = build_dual_graph(spec)
    sets = g.sets
    branches = []
    for i, (b, inv) in enumerate(zip(spec.branches, g.invariants), start=1):
        branches.append({
            "index": i, "name": b.name, "at": b.at,
            "beta0": str(inv.beta0), "beta1": str(inv.beta1), "e1": str(inv.e1),
            "l0": str(inv.l0), "t_min": inv.t_min,
            "terminal_satellites": list(inv.terminal_satellites),
        })
    pairs = {}
    for (i, s), I in sorted(intersection_matrix(spec).items()):
        if i < s:
            cp = contact_pair(spec, i, s)
            pairs[f"{i},{s}"] = {"intersection": str(I), "q": str(cp.q), "c": str(cp.c)}
    return {
        "branches": branches,
        "pairs": pairs,
        "T": sorted(sets.T), "S": sorted(sets.S), "F": sorted(sets.F),
    }


def report_document(report: LctReport) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "version": SCHEMA_VERSION,
        "lct": frac_doc(report.lct),
        "distinguished_vertex": report.distinguished_vertex,
        "vertex_kind": report.vertex_kind,
        "method": report.method,
        "methods": {k: frac_str(v) for k, v in sorted(report.values.items())},
        "agree": len(set(report.values.values())) <= 1,
        "sigma": {str(k): frac_str(v) for k, v in sorted(report.sigma_table.items())},
        "candidates": {str(k): frac_str(v) for k, v in sorted(report.candidate_table.items())},
        "argmin": sorted(report.argmin),
        "warnings": list(report.warnings),
    }
    if report.corollary_case:
        doc["corollary_case"] = report.corollary_case
    if report.pair_diagnostic is not None:
        doc["pair_expression"] = {
            "values": {k: frac_str(v) for k, v in sorted(report.pair_diagnostic["pairs"].items())},
            "matches": report.pair_diagnostic["all_agree"],
        }
    if report.spec is not None and report.spec.is_reduced:
        doc["invariants"] = invariants_document(report.spec)
    return doc


# -- plumbing ---------------------------------------------------------------------

def _emit(doc: Any, out: Optional[str], deterministic: bool) -> None:
    if isinstance(doc, dict) and not deterministic:
        doc = {**doc, "timestamp": datetime.now(timezone.utc).isoformat()}
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _error_doc(errors: list[LctError]) -> dict[str, Any]:
    return {"version": SCHEMA_VERSION, "errors": [e.as_dict() for e in errors]}


def _load(path: str) -> tuple[CurveSpec, str]:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError([ValidationError(f"cannot read {path}: {exc}")])
    return parse_document(doc)


def _compute(spec: CurveSpec, mode: str, method: str) -> LctReport:
    if mode == "ideal":
        exponents: dict[int, int] = {}
        for b in spec.branches:
            exponents[b.at] = exponents.get(b.at, 0) + b.multiplicity
        return lct_complete_ideal(spec.constellation, exponents)
    return reconcile(spec, method)


# -- subcommands ------------------------------------------------------------------

def cmd_compute(args) -> int:
    spec, mode = _load(args.input)
    report = _compute(spec, mode, args.method)
    _emit(report_document(report), args.out, args.deterministic)
    return EXIT_OK


def cmd_invariants(args) -> int:
    spec, _ = _load(args.input)
    report = check_minimality(spec)
    doc = {"version": SCHEMA_VERSION, **invariants_document(spec),
           "warnings": [report.excluded] if report.excluded else []}
    _emit(doc, args.out, args.deterministic)
    return EXIT_OK


def cmd_check(args) -> int:
    spec, _ = _load(args.input)
    report = check_minimality(spec)
    doc = {
        "version": SCHEMA_VERSION,
        "valid": True,
        "minimal": report.minimal,
        "excluded": report.excluded,
        "unnecessary": list(report.unnecessary),
        "points": {str(v.point): list(v.reasons) for v in report.verdicts},
    }
    if not report.minimal:
        doc["suggestion"] = f"drop points {list(report.unnecessary)} (compute trims automatically)"
    _emit(doc, args.out, args.deterministic)
    return EXIT_OK


def cmd_dot(args) -> int:
    spec, _ = _load(args.input)
    g = build_dual_graph(spec)
    notes = standard_annotations(spec, g, sigma_table(spec, g)) if spec.is_reduced else {}
    dual = dot_export(g, notes, [b.name for b in spec.branches])
    prox = proximity_dot(spec)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "dual.dot").write_text(dual)
        (out / "proximity.dot").write_text(prox)
    else:
        sys.stdout.write(dual + prox)
    return EXIT_OK


def cmd_gen(args) -> int:
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    kinds: Counter = Counter()
    failures = []
    for seed in range(args.seed, args.seed + args.count):
        config = GenConfig(seed=seed, max_points=args.points, max_branches=args.branches)
        spec = random_spec(config)
        try:
            report = reconcile(spec)
            kinds[report.vertex_kind] += 1
        except LctError as exc:
            failures.append({"seed": seed, **exc.as_dict()})
        if out:
            text = json.dumps(spec_document(spec), indent=2, sort_keys=True) + "\n"
            (out / f"instance_{seed}.json").write_text(text)
    summary = {
        "version": SCHEMA_VERSION,
        "count": args.count,
        "seeds": [args.seed, args.seed + args.count - 1] if args.count else [],
        "all_agree": args.count - len(failures),
        "kinds": dict(sorted(kinds.items())),
        "failures": failures,
    }
    _emit(summary, str(out / "summary.json") if out else None, args.deterministic)
    return EXIT_OK if not failures else EXIT_DISAGREE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plane-lct", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_input=True):
        if with_input:
            sp.add_argument("input", help="input JSON document")
        sp.add_argument("--out", help="output file (directory for dot/gen)")
        sp.add_argument("--deterministic", action="store_true", help="omit the timestamp")

    sp = sub.add_parser("compute", help="log-canonical threshold with a full report")
    common(sp)
    sp.add_argument("--method", choices=METHODS, default="all")
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("invariants", help="branch invariants, intersections, point sets")
    common(sp)
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("check", help="validation and minimality report")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("dot", help="DOT files for the dual and proximity graphs")
    common(sp)
    sp.set_defaults(func=cmd_dot)

    sp = sub.add_parser("gen", help="random instances and a suite summary")
    common(sp, with_input=False)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--points", type=int, default=40)
    sp.add_argument("--branches", type=int, default=6)
    sp.add_argument("--count", type=int, default=1)
    sp.set_defaults(func=cmd_gen)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    deterministic = getattr(args, "deterministic", True)
    try:
        return args.func(args)
    except InputError as exc:
        _emit(_error_doc(exc.errors), None, True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except MethodDisagreement as exc:
        _emit(_error_doc([exc]), None, deterministic)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    except LctError as exc:
        _emit(_error_doc([exc]), None, True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
