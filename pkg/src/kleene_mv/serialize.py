"""JSON documents for algebras, spaces, complexes, triangulations, bases and bundles.

Every identifier is written with :func:`label`, so files always carry string
names; loading therefore yields string-named objects and ``save(load(doc))``
reproduces ``doc``.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .algebra import FiniteKleeneAlgebra
from .base import MalformedInputError, label
from .complex import WeightedComplex
from .geom import RationalTriangulation
from .mvalg import SchauderBasis, schauder_basis
from .pipeline import MVPresentation
from .space import KleeneSpace


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"invalid JSON: {exc}") from None


def _labels(items) -> dict:
    out = {}
    for x in items:
        s = label(x)
        if s in out:
            raise MalformedInputError(f"two identifiers render as {s!r}")
        out[s] = x
    return {v: k for k, v in out.items()}


def _require(doc: Any, keys: tuple[str, ...], what: str) -> dict:
    if not isinstance(doc, dict):
        raise MalformedInputError(f"{what} document must be a JSON object")
    missing = [k for k in keys if k not in doc]
    if missing:
        raise MalformedInputError(f"{what} document lacks {', '.join(missing)}")
    return doc


def _names(xs: Any, what: str) -> list[str]:
    if not isinstance(xs, list) or not all(isinstance(x, str) for x in xs):
        raise MalformedInputError(f"{what} must be a list of strings")
    if len(set(xs)) != len(xs):
        raise MalformedInputError(f"duplicate names in {what}")
    return xs


def _pairs(xs: Any, what: str) -> list[tuple[str, str]]:
    if not isinstance(xs, list) or not all(
        isinstance(p, list) and len(p) == 2 and all(isinstance(a, str) for a in p) for p in xs
    ):
        raise MalformedInputError(f"{what} must be a list of name pairs")
    return [tuple(p) for p in xs]


# -- algebras ---------------------------------------------------------------------------


def algebra_to_doc(A: FiniteKleeneAlgebra) -> dict:
    lab = _labels(A.elements)
    return {
        "elements": [lab[e] for e in A.elements],
        "leq": [[lab[a], lab[b]] for a, b in A.cover_pairs()],
        "neg": {lab[e]: lab[A.neg(e)] for e in A.elements},
        "bot": lab[A.bot],
        "top": lab[A.top],
    }


def algebra_from_doc(doc: Any) -> FiniteKleeneAlgebra:
    doc = _require(doc, ("elements", "leq", "neg", "bot", "top"), "algebra")
    elems = _names(doc["elements"], "elements")
    neg = doc["neg"]
    if not isinstance(neg, dict) or not all(isinstance(v, str) for v in neg.values()):
        raise MalformedInputError("neg must map names to names")
    known = set(elems)
    for k, v in neg.items():
        if k not in known or v not in known:
            raise MalformedInputError(f"neg entry {k!r} -> {v!r} mentions an unknown element")
    if set(neg) != known:
        raise MalformedInputError("neg must be total")
    for key in ("bot", "top"):
        if doc[key] not in known:
            raise MalformedInputError(f"{key} {doc[key]!r} is not an element")
    return FiniteKleeneAlgebra(elems, _pairs(doc["leq"], "leq"), neg, doc["bot"], doc["top"])


# -- spaces ---------------------------------------------------------------------------------


def space_to_doc(X: KleeneSpace) -> dict:
    lab = _labels(X.points)
    return {
        "points": [lab[p] for p in X.points],
        "leq": [[lab[a], lab[b]] for a, b in X.leq_pairs()],
        "R": [[lab[a], lab[b]] for a, b in sorted(X.R, key=lambda p: (X.index(p[0]), X.index(p[1])))],
        "M": [lab[p] for p in X.points if p in X.M],
    }


def space_from_doc(doc: Any) -> KleeneSpace:
    doc = _require(doc, ("points", "leq", "R", "M"), "space")
    pts = _names(doc["points"], "points")
    M = doc["M"]
    if not isinstance(M, list) or not all(isinstance(m, str) for m in M):
        raise MalformedInputError("M must be a list of names")
    return KleeneSpace(pts, _pairs(doc["leq"], "leq"), _pairs(doc["R"], "R"), M)


# -- complexes -----------------------------------------------------------------------------


def complex_to_doc(WC: WeightedComplex) -> dict:
    C = WC.complex
    lab = _labels(C.vertices)
    return {
        "vertices": [{"name": lab[v], "weight": WC.weight[v]} for v in C.vertices],
        "facets": [[lab[v] for v in C.sorted_face(f)] for f in C.facets],
    }


def complex_from_doc(doc: Any) -> WeightedComplex:
    doc = _require(doc, ("vertices", "facets"), "complex")
    verts = doc["vertices"]
    if not isinstance(verts, list):
        raise MalformedInputError("vertices must be a list")
    names, weight = [], {}
    for v in verts:
        if isinstance(v, str):
            name, w = v, 1
        elif isinstance(v, dict) and isinstance(v.get("name"), str):
            name, w = v["name"], v.get("weight", 1)
        else:
            raise MalformedInputError(f"bad vertex entry {v!r}")
        if not isinstance(w, int) or isinstance(w, bool):
            raise MalformedInputError(f"weight of {name!r} must be an integer")
        names.append(name)
        weight[name] = w
    _names(names, "vertices")
    facets = doc["facets"]
    if not isinstance(facets, list) or not all(isinstance(f, list) for f in facets):
        raise MalformedInputError("facets must be a list of name lists")
    seen = set()
    for f in facets:
        if not all(isinstance(v, str) for v in f):
            raise MalformedInputError("facet entries must be names")
        if len(set(f)) != len(f):
            raise MalformedInputError(f"facet {f} repeats a vertex")
        key = frozenset(f)
        if key in seen:
            raise MalformedInputError(f"duplicate facet {sorted(f)}")
        seen.add(key)
    return WeightedComplex.build(names, facets, weight)


# -- triangulations and bases --------------------------------------------------------------


def _rat(s: Any) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise MalformedInputError(f"rational must be a 'p/q' string or integer, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise MalformedInputError(f"bad rational {s!r}") from None


def triangulation_to_doc(T: RationalTriangulation) -> dict:
    return {
        "dim": T.dim,
        "vertices": [[str(c) for c in v] for v in T.vertices],
        "simplices": [list(s) for s in T.simplices],
    }


def triangulation_from_doc(doc: Any) -> RationalTriangulation:
    doc = _require(doc, ("dim", "vertices", "simplices"), "triangulation")
    if not isinstance(doc["dim"], int) or doc["dim"] < 0:
        raise MalformedInputError("dim must be a non-negative integer")
    verts = doc["vertices"]
    if not isinstance(verts, list) or not all(isinstance(v, list) for v in verts):
        raise MalformedInputError("vertices must be a list of coordinate lists")
    simplices = doc["simplices"]
    if not isinstance(simplices, list) or not all(
        isinstance(s, list) and all(isinstance(i, int) and not isinstance(i, bool) for i in s) for s in simplices
    ):
        raise MalformedInputError("simplices must be lists of vertex indices")
    return RationalTriangulation([[_rat(c) for c in v] for v in verts], simplices, dim=doc["dim"])


def basis_to_doc(B: SchauderBasis) -> dict:
    doc = triangulation_to_doc(B.triangulation)
    doc["mult"] = {str(i): m for i, m in enumerate(B.mult)}
    return doc


def basis_from_doc(doc: Any) -> SchauderBasis:
    T = triangulation_from_doc(doc)
    B = schauder_basis(T)
    mult = _require(doc, ("mult",), "basis")["mult"]
    if {int(k): v for k, v in mult.items()} != dict(enumerate(B.mult)):
        raise MalformedInputError("stored multipliers disagree with the vertex denominators")
    return B


# -- presentation bundles -----------------------------------------------------------------


def presentation_to_doc(P: MVPresentation) -> dict:
    prov = P.provenance
    return {
        "complex": complex_to_doc(P.complex),
        "triangulation": triangulation_to_doc(P.realization),
        "mult": {str(i): m for i, m in enumerate(P.basis.mult)},
        "provenance": {
            "algebra_file": prov.get("algebra_file"),
            "algebra": algebra_to_doc(prov["algebra"]) if prov.get("algebra") is not None else None,
            "space": space_to_doc(prov["space"]) if prov.get("space") is not None else None,
        },
    }


def presentation_from_doc(doc: Any) -> MVPresentation:
    doc = _require(doc, ("complex", "triangulation", "mult", "provenance"), "bundle")
    WC = complex_from_doc(doc["complex"])
    B = basis_from_doc({**doc["triangulation"], "mult": doc["mult"]})
    prov_doc = doc["provenance"] or {}
    prov = {"algebra_file": prov_doc.get("algebra_file")}
    if prov_doc.get("algebra") is not None:
        prov["algebra"] = algebra_from_doc(prov_doc["algebra"])
    if prov_doc.get("space") is not None:
        prov["space"] = space_from_doc(prov_doc["space"])
    return MVPresentation(WC, B.triangulation, B, prov)


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc.strerror}") from None


def save_json(path: str, doc: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))
