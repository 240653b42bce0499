"""Shared exceptions, validation reports and labelling helpers."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable


class MalformedInputError(ValueError):
    """Input references unknown identifiers or is otherwise structurally broken.

    Kept distinct from law violations: a malformed object cannot even be
    checked against the axioms.
    """


class InvalidStructureError(ValueError):
    """An operation required a valid algebra/space/complex and got something else."""


class NotClosedError(ValueError):
    """A subset is not closed under the algebra operations."""

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


class GuardError(ValueError):
    """A size guard (arity, dimension) was exceeded."""


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple

    def __str__(self) -> str:
        return f"{self.law}: witness {tuple(label(w) for w in self.witness)}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def laws(self) -> set[str]:
        return {v.law for v in self.violations}

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"law": v.law, "witness": [label(w) for w in v.witness]}
                for v in self.violations
            ],
            "notes": list(self.notes),
        }


def label(x: Hashable) -> str:
    """Render an identifier as a string; the inverse direction is never needed
    because file formats always carry string names."""
    if isinstance(x, str):
        return x
    if isinstance(x, (Fraction, int)):
        return str(Fraction(x))
    if isinstance(x, tuple):
        return "(" + ",".join(label(y) for y in x) + ")"
    if isinstance(x, frozenset):
        return "{" + ",".join(sorted(label(y) for y in x)) + "}"
    return str(x)


def reflexive_transitive_closure(n: int, pairs: Iterable[tuple[int, int]]) -> list[list[bool]]:
    """Warshall closure of an index relation on range(n), reflexive."""
    rel = [[i == j for j in range(n)] for i in range(n)]
    for i, j in pairs:
        rel[i][j] = True
    for k in range(n):
        rk = rel[k]
        for i in range(n):
            if rel[i][k]:
                ri = rel[i]
                for j in range(n):
                    if rk[j]:
                        ri[j] = True
    return rel
