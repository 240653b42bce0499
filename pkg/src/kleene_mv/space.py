"""Kleene spaces and the dual functors D (algebras -> spaces) and E (spaces -> algebras).

Points of K~ are the Fractions 0, 1/2, 1; in its order 1/2 sits below both
0 and 1, and the relation ~ relates every pair except {0, 1}.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from typing import Hashable, Iterable, Sequence

from .algebra import (
    HALF,
    K_NEG,
    K_VALUES,
    ONE,
    ZERO,
    FiniteKleeneAlgebra,
    KleeneHom,
    hom_enumerate,
    standard_K,
)
from .base import (
    GuardError,
    MalformedInputError,
    ValidationReport,
    Violation,
    reflexive_transitive_closure,
)

DEFAULT_MAX_POWER = 4

Point = Hashable
Table = tuple  # values of a map {0,1/2,1}^n -> {0,1/2,1}, aligned with cube_points(n)
TermPair = tuple[Table, Table]


def k_leq(x: Fraction, y: Fraction) -> bool:
    """The order of K~: 1/2 below 0 and 1, which are incomparable."""
    return x == y or x == HALF


def k_sim(x: Fraction, y: Fraction) -> bool:
    return x == y or x == HALF or y == HALF


def k_marked(x: Fraction) -> bool:
    return x != HALF


class KleeneSpace:
    """A finite poset with a binary relation ``R`` and marked points ``M``.

    The order is closed reflexively and transitively on construction.
    """

    def __init__(
        self,
        points: Iterable[Point],
        leq: Iterable[tuple[Point, Point]],
        R: Iterable[tuple[Point, Point]],
        M: Iterable[Point],
    ):
        self.points = tuple(points)
        self._index = {p: i for i, p in enumerate(self.points)}
        if len(self._index) != len(self.points):
            raise MalformedInputError("duplicate point identifiers")
        idx = self._index

        def known(pair, what):
            a, b = pair
            if a not in idx or b not in idx:
                raise MalformedInputError(f"{what} pair {pair!r} mentions an unknown point")
            return idx[a], idx[b]

        raw = {known(p, "order") for p in leq}
        closed = reflexive_transitive_closure(len(self.points), raw)
        self.closure_added = sum(map(sum, closed)) - len(raw)
        self._le = tuple(tuple(r) for r in closed)
        self.R = frozenset((self.points[i], self.points[j]) for i, j in (known(p, "R") for p in R))
        M = frozenset(M)
        for m in M:
            if m not in idx:
                raise MalformedInputError(f"marked point {m!r} is unknown")
        self.M = M

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        return f"KleeneSpace(<{len(self)} points, |M|={len(self.M)}>)"

    def index(self, p: Point) -> int:
        return self._index[p]

    def leq(self, x: Point, y: Point) -> bool:
        return self._le[self._index[x]][self._index[y]]

    def leq_pairs(self) -> list[tuple[Point, Point]]:
        P = self.points
        n = len(P)
        return [(P[i], P[j]) for i in range(n) for j in range(n) if self._le[i][j]]

    def maximal(self) -> list[Point]:
        n = len(self.points)
        return [
            self.points[i]
            for i in range(n)
            if not any(j != i and self._le[i][j] for j in range(n))
        ]

    def same_as(self, other: "KleeneSpace") -> bool:
        return (
            self.points == other.points
            and set(self.leq_pairs()) == set(other.leq_pairs())
            and self.R == other.R
            and self.M == other.M
        )


@dataclass(frozen=True)
class SpaceMorphism:
    source: KleeneSpace
    target: KleeneSpace
    images: tuple

    def __call__(self, p: Point) -> Point:
        return self.images[self.source.index(p)]

    def compose(self, first: "SpaceMorphism") -> "SpaceMorphism":
        return SpaceMorphism(first.source, self.target, tuple(self(first(p)) for p in first.source.points))

    def __hash__(self) -> int:
        return hash(self.images)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SpaceMorphism)
            and self.source is other.source
            and self.target is other.target
            and self.images == other.images
        )


def is_space_morphism(X: KleeneSpace, Y: KleeneSpace, images: dict) -> bool:
    for x, y in X.leq_pairs():
        if not Y.leq(images[x], images[y]):
            return False
    for x, y in X.R:
        if (images[x], images[y]) not in Y.R:
            return False
    return all(images[m] in Y.M for m in X.M)


def validate_space(X: KleeneSpace) -> ValidationReport:
    found: dict[str, tuple] = {}
    notes = []
    if X.closure_added:
        notes.append(f"reflexive-transitive closure added {X.closure_added} order pairs")
    P = X.points
    n = len(P)
    for i in range(n):
        for j in range(i + 1, n):
            if X._le[i][j] and X._le[j][i]:
                found.setdefault("partial-order", (P[i], P[j]))
    maxima = set(X.maximal())
    for m in P:
        if m in X.M and m not in maxima:
            found.setdefault("M-maximal", (m,))
    for x in P:
        if (x, x) not in X.R:
            found.setdefault("reflexive-R", (x,))
    for x, y in sorted(X.R, key=lambda p: (X.index(p[0]), X.index(p[1]))):
        if x in X.M and not X.leq(y, x):
            found.setdefault("marked-R", (x, y))
        for z in P:
            if X.leq(z, y) and (z, x) not in X.R:
                found.setdefault("down-R", (x, y, z))
    order = ["partial-order", "M-maximal", "reflexive-R", "marked-R", "down-R"]
    return ValidationReport(
        tuple(Violation(k, found[k]) for k in order if k in found), tuple(notes)
    )


# -- K~ and its powers ------------------------------------------------------------


@lru_cache(maxsize=None)
def cube_points(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """{0,1/2,1}^n in product order; the canonical point order of K~^n."""
    return tuple(cartesian(K_VALUES, repeat=n))


def leq_n(x: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
    return all(k_leq(a, b) for a, b in zip(x, y))


def sim_n(x: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
    return all(k_sim(a, b) for a, b in zip(x, y))


def marked_n(x: Sequence[Fraction]) -> bool:
    return all(k_marked(a) for a in x)


def _subspace(points: Sequence[tuple]) -> KleeneSpace:
    pts = tuple(points)
    return KleeneSpace(
        pts,
        [(x, y) for x in pts for y in pts if leq_n(x, y)],
        [(x, y) for x in pts for y in pts if sim_n(x, y)],
        [x for x in pts if marked_n(x)],
    )


def ktilde() -> KleeneSpace:
    return KleeneSpace(
        K_VALUES,
        [(x, y) for x in K_VALUES for y in K_VALUES if k_leq(x, y)],
        [(x, y) for x in K_VALUES for y in K_VALUES if k_sim(x, y)],
        [ZERO, ONE],
    )


def power_space(n: int, *, max_n: int = DEFAULT_MAX_POWER) -> KleeneSpace:
    """K~^n with componentwise order and relation; points are n-tuples."""
    if n < 1 or n > max_n:
        raise GuardError(f"power_space needs 1 <= n <= {max_n}, got {n}")
    return _subspace(cube_points(n))


def subspace_from_subset(W: Iterable[Sequence[Fraction]], n: int | None = None) -> KleeneSpace:
    """Restrict the structure of K~^n to the points of ``W`` (kept in given order)."""
    pts = [tuple(Fraction(c) for c in w) for w in W]
    for p in pts:
        if n is not None and len(p) != n:
            raise MalformedInputError(f"{p!r} does not have {n} coordinates")
        if any(c not in K_VALUES for c in p):
            raise MalformedInputError(f"{p!r} is not a point of K~^n")
    return _subspace(pts)


def projection_table(n: int, i: int) -> Table:
    """The generator rho_{i+1}: {0,1/2,1}^n -> {0,1/2,1}."""
    return tuple(v[i] for v in cube_points(n))


# -- the functors -----------------------------------------------------------------


def dual_D(B: FiniteKleeneAlgebra) -> KleeneSpace:
    """Hom(B, K) with the structure inherited pointwise from K~^B.

    A point is the tuple of images of ``B.elements``.
    """
    homs = [h.images for h in hom_enumerate(B, standard_K())]
    return KleeneSpace(
        homs,
        [(h, g) for h in homs for g in homs if leq_n(h, g)],
        [(h, g) for h in homs for g in homs if sim_n(h, g)],
        [h for h in homs if marked_n(h)],
    )


def _morphism_tables(X: KleeneSpace) -> list[tuple]:
    """All morphisms X -> K~ as value tuples aligned with ``X.points``."""
    n = len(X)
    P = X.points
    height = [sum(X._le[k][i] for k in range(n)) for i in range(n)]
    order = sorted(range(n), key=lambda i: (height[i], i))
    # constraints against earlier points in ``order``
    pos = {p: r for r, p in enumerate(order)}
    R_idx = {(X.index(a), X.index(b)) for a, b in X.R}
    checks: list[list[tuple[int, str]]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if pos[j] < pos[i]:
                if X._le[j][i]:
                    checks[i].append((j, "below"))
                if X._le[i][j]:
                    checks[i].append((j, "above"))
                if (i, j) in R_idx:
                    checks[i].append((j, "R-out"))
                if (j, i) in R_idx:
                    checks[i].append((j, "R-in"))
    marked = [P[i] in X.M for i in range(n)]
    self_R = [(i, i) in R_idx for i in range(n)]
    # values coded 0 -> 0, 1/2 -> 1, 1 -> 2; allowed[kind][w][v] for v placed after w
    LEQ = [[k_leq(a, b) for b in K_VALUES] for a in K_VALUES]
    SIM = [[k_sim(a, b) for b in K_VALUES] for a in K_VALUES]
    allowed = {
        "below": LEQ,
        "above": [[LEQ[v][w] for v in range(3)] for w in range(3)],
        "R-out": [[SIM[v][w] for v in range(3)] for w in range(3)],
        "R-in": SIM,
    }
    compiled = [[(j, allowed[kind]) for j, kind in checks[i]] for i in range(n)]
    value: list[int] = [-1] * n
    codes: list[tuple[int, ...]] = []

    def rec(r: int) -> None:
        if r == n:
            codes.append(tuple(value))
            return
        i = order[r]
        for v in (0, 1, 2):
            if v == 1 and marked[i]:
                continue
            if self_R[i] and not SIM[v][v]:
                continue
            if all(table[value[j]][v] for j, table in compiled[i]):
                value[i] = v
                rec(r + 1)
        value[i] = -1

    rec(0)
    codes.sort()
    return [tuple(K_VALUES[c] for c in t) for t in codes]


def algebra_of_tables(tables: Sequence[tuple], generators: Sequence[tuple] = ()) -> FiniteKleeneAlgebra:
    """Pointwise Kleene algebra on a set of {0,1/2,1}-valued tuples closed under the operations."""
    width = len(tables[0]) if tables else 0
    return FiniteKleeneAlgebra.from_operations(
        tables,
        lambda f, g: tuple(min(a, b) for a, b in zip(f, g)),
        lambda f, g: tuple(max(a, b) for a, b in zip(f, g)),
        lambda f: tuple(K_NEG[a] for a in f),
        (ZERO,) * width,
        (ONE,) * width,
        generators=generators,
    )


def dual_E(X: KleeneSpace) -> FiniteKleeneAlgebra:
    """Morphisms X -> K~ with operations pointwise from K.

    Elements are value tuples aligned with ``X.points``.
    """
    return algebra_of_tables(_morphism_tables(X))


def D_on_hom(f: KleeneHom, DA: KleeneSpace | None = None, DB: KleeneSpace | None = None) -> SpaceMorphism:
    """D(f): D(B) -> D(A), h |-> h o f, for f: A -> B."""
    A, B = f.source, f.target
    DA = DA if DA is not None else dual_D(A)
    DB = DB if DB is not None else dual_D(B)
    images = tuple(tuple(h[B.index(f(a))] for a in A.elements) for h in DB.points)
    return SpaceMorphism(DB, DA, images)


def E_on_morphism(
    g: SpaceMorphism, EX: FiniteKleeneAlgebra | None = None, EY: FiniteKleeneAlgebra | None = None
) -> KleeneHom:
    """E(g): E(Y) -> E(X), h |-> h o g, for g: X -> Y."""
    X, Y = g.source, g.target
    EX = EX if EX is not None else dual_E(X)
    EY = EY if EY is not None else dual_E(Y)
    images = tuple(tuple(h[Y.index(g(x))] for x in X.points) for h in EY.elements)
    return KleeneHom(EY, EX, images)


# -- solution sets ---------------------------------------------------------------


def sol_K(theta: Iterable[TermPair], n: int) -> list[tuple[Fraction, ...]]:
    """Points of {0,1/2,1}^n where every pair (f, g) agrees."""
    pts = cube_points(n)
    theta = list(theta)
    for f, g in theta:
        if len(f) != len(pts) or len(g) != len(pts):
            raise MalformedInputError(f"term pair is not over arity {n}")
    return [v for k, v in enumerate(pts) if all(f[k] == g[k] for f, g in theta)]


def separating_pair(x: Sequence[Fraction], W: Iterable[Sequence[Fraction]], n: int) -> TermPair:
    """Two elements of E(K~^n) that agree on ``W`` but not at ``x``."""
    x = tuple(x)
    W = [tuple(w) for w in W]
    if x in W:
        raise ValueError(f"{x!r} lies in W; nothing to separate")
    pts = cube_points(n)
    above_x = [z for z in W if leq_n(x, z)]

    def f(y):
        if any(leq_n(z, y) for z in above_x):
            return ONE
        return ZERO if marked_n(y) else HALF

    def g(z):
        if leq_n(x, z):
            return ONE
        return ZERO if marked_n(z) else HALF

    return tuple(f(y) for y in pts), tuple(g(z) for z in pts)


def separating_family(W: Iterable[Sequence[Fraction]], n: int) -> list[TermPair]:
    W = {tuple(w) for w in W}
    return [separating_pair(x, W, n) for x in cube_points(n) if x not in W]


def is_morphism_table(table: Sequence[Fraction], n: int) -> bool:
    """Direct check that a table on {0,1/2,1}^n is a Kleene-space morphism into K~."""
    pts = cube_points(n)
    val = dict(zip(pts, table))
    for x in pts:
        if marked_n(x) and not k_marked(val[x]):
            return False
        for y in pts:
            if leq_n(x, y) and not k_leq(val[x], val[y]):
                return False
            if sim_n(x, y) and not k_sim(val[x], val[y]):
                return False
    return True


# -- isomorphism ----------------------------------------------------------------------


def is_isomorphic_space(X: KleeneSpace, Y: KleeneSpace) -> dict | None:
    """A bijection preserving and reflecting order, R and M, or ``None``."""
    if len(X) != len(Y) or len(X.M) != len(Y.M) or len(X.R) != len(Y.R):
        return None

    def sig(S: KleeneSpace, p) -> tuple:
        i = S.index(p)
        n = len(S)
        return (
            sum(S._le[k][i] for k in range(n)),
            sum(S._le[i][k] for k in range(n)),
            sum(1 for q in S.points if (p, q) in S.R),
            sum(1 for q in S.points if (q, p) in S.R),
            p in S.M,
        )

    sx = {p: sig(X, p) for p in X.points}
    sy = {q: sig(Y, q) for q in Y.points}
    if sorted(sx.values()) != sorted(sy.values()):
        return None
    mapping: dict = {}
    used: set = set()
    pts = X.points

    def consistent(p, q) -> bool:
        for p2, q2 in mapping.items():
            if X.leq(p, p2) != Y.leq(q, q2) or X.leq(p2, p) != Y.leq(q2, q):
                return False
            if ((p, p2) in X.R) != ((q, q2) in Y.R) or ((p2, p) in X.R) != ((q2, q) in Y.R):
                return False
        return ((p, p) in X.R) == ((q, q) in Y.R)

    def rec(k: int) -> bool:
        if k == len(pts):
            return True
        p = pts[k]
        for q in Y.points:
            if q not in used and sx[p] == sy[q] and consistent(p, q):
                mapping[p] = q
                used.add(q)
                if rec(k + 1):
                    return True
                del mapping[p]
                used.discard(q)
        return False

    return dict(mapping) if rec(0) else None
