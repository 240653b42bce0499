"""Free MV-algebras over finite Kleene algebras, and recognition of their bases."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import HALF, ONE, ZERO, FiniteKleeneAlgebra, free_kleene, is_isomorphic_alg, k_prime, k_squared
from .complex import (
    KleeneCheck,
    WeightedComplex,
    check_kleene_complex,
    complex_isomorphic,
    embed_poset,
    weighted_nerve,
)
from .geom import (
    RationalTriangulation,
    flip_neighbors,
    is_regular_triangulation,
    kleene_triangulation,
    realize,
    sc_of,
)
from .mvalg import SchauderBasis, schauder_basis
from .space import dual_D, dual_E, is_isomorphic_space, subspace_from_subset

DEFAULT_BUDGET = 10_000


@dataclass(frozen=True, eq=False)
class MVPresentation:
    """A free MV-algebra given by a weighted complex, its realization and Schauder basis."""

    complex: WeightedComplex
    realization: RationalTriangulation
    basis: SchauderBasis
    provenance: dict = field(default_factory=dict)


def free_over(B: FiniteKleeneAlgebra) -> MVPresentation:
    """Dual space, its weighted nerve, the realization and the Schauder basis over it."""
    X = dual_D(B)
    WC = weighted_nerve(X)
    T = realize(WC)
    return MVPresentation(WC, T, schauder_basis(T), {"algebra": B, "space": X})


@dataclass(frozen=True)
class Recognition:
    check: KleeneCheck
    algebra: FiniteKleeneAlgebra | None = None
    presentation: MVPresentation | None = None
    embedding: dict | None = None
    isomorphism: dict | None = None

    @property
    def ok(self) -> bool:
        return self.algebra is not None


def recognize(WC: WeightedComplex) -> Recognition:
    """Find a finite Kleene algebra whose free MV-algebra has the weighted complex ``WC``.

    The witness poset is embedded in a power of K~; the algebra is dual to the
    image.  Absence is reported through ``check`` with the failing condition.
    """
    check = check_kleene_complex(WC)
    if not check.ok:
        return Recognition(check)
    P = check.witness.poset
    phi = embed_poset(P, WC.weight)
    X = subspace_from_subset([phi[v] for v in P.elements])
    B = dual_E(X)
    pres = free_over(B)
    iso = complex_isomorphic(pres.complex, WC)
    if iso is None:
        raise AssertionError("reconstructed complex is not isomorphic to the input")
    return Recognition(check, B, pres, phi, iso)


# -- the two worked questions ----------------------------------------------------------------


def section6_subset() -> list[tuple[Fraction, ...]]:
    """(({0,1/2,1}^2 x {0}) minus (0,1/2,0)) together with (1,1/2,1/2)."""
    vals = (ZERO, HALF, ONE)
    W = [(a, b, ZERO) for a in vals for b in vals if (a, b) != (ZERO, HALF)]
    return W + [(ONE, HALF, HALF)]


@dataclass
class SearchResult:
    found: RationalTriangulation | None
    isomorphism: dict | None
    explored: int
    exhausted_budget: bool


def flip_search(start: RationalTriangulation, target: WeightedComplex, budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Breadth-first search over edge flips for a regular triangulation whose complex matches ``target``."""
    seen = {start.simplices}
    queue = deque([start])
    explored = 0
    while queue:
        if explored >= budget:
            return SearchResult(None, None, explored, True)
        T = queue.popleft()
        explored += 1
        if is_regular_triangulation(T):
            iso = complex_isomorphic(sc_of(T), target)
            if iso is not None:
                return SearchResult(T, iso, explored, False)
        for N in flip_neighbors(T):
            if N.simplices not in seen:
                seen.add(N.simplices)
                queue.append(N)
    return SearchResult(None, None, explored, False)


@dataclass
class Section6Report:
    checks: dict = field(default_factory=dict)
    search: SearchResult | None = None
    details: dict = field(default_factory=dict)

    @property
    def budget_exhausted(self) -> bool:
        return self.search is not None and self.search.exhausted_budget

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def demo_section6(budget: int = DEFAULT_BUDGET) -> Section6Report:
    report = Section6Report()
    c = report.checks

    # Q1: different algebras, different dual spaces, same weighted complex
    K2, Kp = k_squared(), k_prime()
    D2, Dp = dual_D(K2), dual_D(Kp)
    c["q1_algebras_not_isomorphic"] = is_isomorphic_alg(K2, Kp) is None
    c["q1_spaces_not_isomorphic"] = is_isomorphic_space(D2, Dp) is None
    # the points are homomorphisms with different domains, so compare after
    # naming them by position (the projections in both cases)
    c["q1_nerves_equal"] = weighted_nerve(D2).indexed() == weighted_nerve(Dp).indexed()
    c["q1_free_complexes_equal"] = free_over(K2).complex.indexed() == free_over(Kp).complex.indexed()

    # Q2: a Kleene algebra that is not free, whose free MV-algebra lives on the square
    W = section6_subset()
    X = subspace_from_subset(W, 3)
    BW = dual_E(X)
    pres = free_over(BW)
    F2 = free_kleene(2)
    c["q2_not_free"] = len(BW) != len(F2) or is_isomorphic_alg(BW, F2) is None
    fv = pres.complex.complex.f_vector()
    c["q2_f_vector"] = fv == (9, 16, 8)
    c["q2_kleene_complex"] = check_kleene_complex(pres.complex).ok
    report.details.update(
        algebra_size=len(BW),
        free_kleene_2_size=len(F2),
        f_vector=list(fv),
        weights=pres.complex.weight_multiset(),
    )
    report.search = flip_search(kleene_triangulation(2), pres.complex, budget)
    c["q2_triangulation_found"] = report.search.found is not None
    report.details["explored"] = report.search.explored
    return report

