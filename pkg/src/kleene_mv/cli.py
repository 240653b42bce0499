"""Command-line front end; every command prints one JSON report.

Exit codes: 0 ok, 1 rejected, 2 unreadable input, 3 search budget exhausted.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import serialize as io
from .algebra import validate_kleene_algebra
from .base import GuardError, InvalidStructureError, MalformedInputError, label
from .complex import check_kleene_complex
from .geom import (
    den,
    is_regular_simplex,
    is_regular_triangulation,
    is_valid_triangulation,
    kleene_triangulation,
    realize,
    volume,
)
from .mvalg import sample_points
from .pipeline import DEFAULT_BUDGET, demo_section6, free_over, recognize
from .space import dual_D, dual_E, validate_space

DEFAULT_SEED = 0
EXIT = {"ok": 0, "rejected": 1, "error": 2, "budget": 3}


@dataclass
class CommandReport:
    command: str
    inputs: dict = field(default_factory=dict)
    status: str = "ok"
    payload: dict = field(default_factory=dict)
    condition: str | None = None
    timing: float = 0.0

    def to_dict(self) -> dict:
        doc = {
            "command": self.command,
            "inputs": self.inputs,
            "status": self.status,
            "payload": self.payload,
            "timing_seconds": round(self.timing, 6),
        }
        if self.condition is not None:
            doc["condition"] = self.condition
        return doc


def _digest(path: str) -> str:
    try:
        return hashlib.sha256(Path(path).read_bytes()).hexdigest()
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc.strerror}") from None


def _load(report: CommandReport, path: str) -> Any:
    report.inputs[path] = _digest(path)
    return io.load_json(path)


def _reject(report: CommandReport, condition: str) -> None:
    report.status = "rejected"
    report.condition = condition


def _write(report: CommandReport, path: str | None, doc: Any) -> None:
    if path:
        io.save_json(path, doc)
        report.payload["output"] = path


# -- commands ---------------------------------------------------------------------------------


def cmd_validate(args, report: CommandReport) -> None:
    doc = _load(report, args.file)
    if args.kind == "algebra":
        A = io.algebra_from_doc(doc)
        res = validate_kleene_algebra(A)
        report.payload.update(res.to_dict(), elements=len(A), closure_added=A.closure_added)
        if not res.ok:
            v = res.violations[0]
            _reject(report, f"kleene-algebra: law {v.law} violated, witness {[label(w) for w in v.witness]}")
    elif args.kind == "space":
        X = io.space_from_doc(doc)
        res = validate_space(X)
        report.payload.update(res.to_dict(), points=len(X), closure_added=X.closure_added)
        if not res.ok:
            v = res.violations[0]
            _reject(report, f"kleene-space: law {v.law} violated, witness {[label(w) for w in v.witness]}")
    else:
        WC = io.complex_from_doc(doc)
        check = check_kleene_complex(WC)
        report.payload.update(
            vertices=len(WC.vertices),
            facets=len(WC.facets),
            f_vector=list(WC.complex.f_vector()),
            kleene_complex=check.message(),
        )


def cmd_dual(args, report: CommandReport) -> None:
    doc = _load(report, args.file)
    if args.direction == "D":
        A = io.algebra_from_doc(doc)
        res = validate_kleene_algebra(A)
        if not res.ok:
            _reject(report, f"kleene-algebra: law {res.violations[0].law} violated")
            return
        X = dual_D(A)
        out = io.space_to_doc(X)
        report.payload.update(points=len(X), marked=len(X.M), relation=len(X.R), space=out)
    else:
        X = io.space_from_doc(doc)
        res = validate_space(X)
        if not res.ok:
            _reject(report, f"kleene-space: law {res.violations[0].law} violated")
            return
        if len(X) > args.max_n:
            raise GuardError(f"space has {len(X)} points; raise --max-n to dualize it")
        A = dual_E(X)
        out = io.algebra_to_doc(A)
        report.payload.update(elements=len(A), algebra=out)
    _write(report, args.output, out)


def _presentation_summary(P, rng: random.Random) -> dict:
    T = P.realization
    samples = sample_points(T, 20, rng) if T.dim and any(len(s) > 1 for s in T.simplices) else []
    inside = [p for p in samples if all(0 <= c <= 1 for c in p)]
    defects = []
    for p in inside:
        try:
            defects.append(P.basis.partition_defect(p))
        except ValueError:
            continue
    return {
        "weights": P.complex.weight_multiset(),
        "f_vector": list(P.complex.complex.f_vector()),
        "vertex_denominators": sorted(den(v) for v in T.vertices),
        "regular": is_regular_triangulation(T),
        "partition_of_unity_at_vertices": P.basis.partition_holds_at_vertices(),
        "partition_of_unity_samples": all(d == 0 for d in defects),
        "complex": io.complex_to_doc(P.complex),
    }


def cmd_free_mv(args, report: CommandReport) -> None:
    A = io.algebra_from_doc(_load(report, args.file))
    res = validate_kleene_algebra(A)
    if not res.ok:
        _reject(report, f"kleene-algebra: law {res.violations[0].law} violated")
        return
    P = free_over(A)
    P.provenance["algebra_file"] = args.file
    report.payload.update(_presentation_summary(P, random.Random(args.seed)))
    _write(report, args.output, io.presentation_to_doc(P))


def cmd_recognize(args, report: CommandReport) -> None:
    doc = _load(report, args.file)
    if isinstance(doc, dict) and "provenance" in doc and "complex" in doc:
        doc = doc["complex"]  # a bundle: recognize its complex
    WC = io.complex_from_doc(doc)
    rec = recognize(WC)
    if not rec.ok:
        _reject(report, rec.check.message())
        return
    P = rec.presentation
    report.payload.update(
        elements=len(rec.algebra),
        isomorphism={label(a): label(b) for a, b in rec.isomorphism.items()},
        reconstructed=_presentation_summary(P, random.Random(args.seed)),
    )
    _write(report, args.output, io.algebra_to_doc(rec.algebra))
    if args.output or args.bundle:
        bundle = args.bundle or str(Path(args.output).with_suffix("")) + ".bundle.json"
        io.save_json(bundle, io.presentation_to_doc(P))
        report.payload["bundle"] = bundle


def cmd_geometry(args, report: CommandReport) -> None:
    if args.what == "kleene-triangulation":
        try:
            n = int(args.target)
        except ValueError:
            raise MalformedInputError(f"expected a dimension, got {args.target!r}") from None
        T = kleene_triangulation(n, max_n=args.max_n)
        report.payload.update(
            n=n,
            f_vector=list(T.f_vector()),
            regular=is_regular_triangulation(T),
            volume=str(volume(T)),
            triangulation=io.triangulation_to_doc(T),
        )
        _write(report, args.output, io.triangulation_to_doc(T))
    elif args.what == "regular-check":
        T = io.triangulation_from_doc(_load(report, args.target))
        bad = [list(s) for s in T.simplices if not is_regular_simplex(T.simplex_vertices(s))]
        report.payload.update(regular=not bad, irregular_simplices=bad, valid=is_valid_triangulation(T))
        if bad:
            _reject(report, f"regularity: simplex {bad[0]} is not regular")
    else:
        WC = io.complex_from_doc(_load(report, args.target))
        T = realize(WC)
        report.payload.update(
            dim=T.dim,
            vertex_denominators=[den(v) for v in T.vertices],
            triangulation=io.triangulation_to_doc(T),
        )
        _write(report, args.output, io.triangulation_to_doc(T))


def cmd_demo(args, report: CommandReport) -> None:
    r = demo_section6(budget=args.budget)
    report.payload.update(checks=r.checks, details=r.details)
    if r.search is not None and r.search.found is not None:
        report.payload["triangulation"] = io.triangulation_to_doc(r.search.found)
    if r.budget_exhausted:
        report.status = "budget"
        report.condition = f"flip search stopped after {r.search.explored} states"
    elif not r.ok:
        failed = [k for k, v in r.checks.items() if not v]
        _reject(report, "demo: failed " + ", ".join(failed))


# -- parser ------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the result document here")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for sampled checks (default 0)")
    common.add_argument("--max-n", type=int, default=None, help="override the size guard")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="flip-search budget")
    common.add_argument("--format", choices=["json"], default="json")

    p = argparse.ArgumentParser(prog="kleene-mv", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", parents=[common], help="check a file against the axioms")
    v.add_argument("kind", choices=["algebra", "space", "complex"])
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)

    d = sub.add_parser("dual", parents=[common], help="algebra to space (D) or space to algebra (E)")
    d.add_argument("file")
    d.add_argument("--direction", choices=["D", "E"], default="D")
    d.set_defaults(func=cmd_dual)

    f = sub.add_parser("free-mv", parents=[common], help="free MV-algebra over a Kleene algebra")
    f.add_argument("file")
    f.set_defaults(func=cmd_free_mv)

    r = sub.add_parser("recognize", parents=[common], help="find a Kleene algebra for a weighted complex")
    r.add_argument("file")
    r.add_argument("--bundle", help="where to write the reconstructed bundle")
    r.set_defaults(func=cmd_recognize)

    g = sub.add_parser("geometry", parents=[common], help="triangulation queries")
    g.add_argument("what", choices=["kleene-triangulation", "regular-check", "realize"])
    g.add_argument("target", help="dimension or input file")
    g.set_defaults(func=cmd_geometry)

    m = sub.add_parser("demo", parents=[common], help="worked examples")
    m.add_argument("name", choices=["section6"])
    m.set_defaults(func=cmd_demo)
    return p


def run(argv: list[str] | None = None) -> tuple[int, dict]:
    args = build_parser().parse_args(argv)
    if args.max_n is None:
        args.max_n = 3 if args.command == "geometry" else 64
    report = CommandReport(command=args.command)
    start = time.perf_counter()
    try:
        args.func(args, report)
    except (MalformedInputError, GuardError) as exc:
        report.status = "error"
        report.condition = f"input: {exc}"
    except InvalidStructureError as exc:
        _reject(report, f"structure: {exc}")
    report.timing = time.perf_counter() - start
    return EXIT[report.status], report.to_dict()


def main(argv: list[str] | None = None) -> int:
    code, doc = run(argv)
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
