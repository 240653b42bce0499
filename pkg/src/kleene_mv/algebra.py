"""Finite Kleene algebras.

An algebra is given by its lattice order together with the negation and the
bounds; meets and joins are derived from the order and cached.  Algebras that
arise as sets of functions (products, duals of spaces) carry their operations
pointwise instead, so huge carriers never need an explicit order table.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .base import (
    GuardError,
    InvalidStructureError,
    MalformedInputError,
    NotClosedError,
    ValidationReport,
    Violation,
    reflexive_transitive_closure,
)


class KValue(Fraction):
    """A Fraction with a cached hash.

    Tables over {0,1/2,1} are hashed constantly (as dict keys of large carriers)
    and Fraction recomputes its hash on every call.
    """

    __slots__ = ("_hash",)

    def __new__(cls, numerator=0, denominator=None):
        self = super().__new__(cls, numerator, denominator)
        self._hash = Fraction.__hash__(self)
        return self

    def __hash__(self) -> int:
        return self._hash


ZERO = KValue(0)
HALF = KValue(1, 2)
ONE = KValue(1)
K_VALUES = (ZERO, HALF, ONE)
K_NEG = {ZERO: ONE, HALF: HALF, ONE: ZERO}

DEFAULT_MAX_FREE = 3


class FiniteKleeneAlgebra:
    """A finite algebra (A, meet, join, neg, bot, top).

    ``elements`` is the canonical ordering used by every enumeration.  The
    constructor accepts any relation whose reflexive-transitive closure is the
    intended order; ``closure_added`` counts the pairs that closure introduced.
    Law violations are *not* raised here -- see :func:`validate_kleene_algebra`.
    """

    def __init__(
        self,
        elements: Iterable[Hashable],
        leq: Iterable[tuple[Hashable, Hashable]],
        neg: Mapping[Hashable, Hashable],
        bot: Hashable,
        top: Hashable,
        *,
        generators: Sequence[Hashable] = (),
    ):
        elems = tuple(elements)
        index = self._make_index(elems)
        raw = set()
        for pair in leq:
            a, b = pair
            if a not in index or b not in index:
                raise MalformedInputError(f"order pair {pair!r} mentions an unknown element")
            raw.add((index[a], index[b]))
        n = len(elems)
        closed = reflexive_transitive_closure(n, raw)
        self._init_common(elems, index, neg, bot, top, generators)
        self._le_table = tuple(tuple(row) for row in closed)
        self.closure_added = sum(map(sum, closed)) - len(raw)
        self._meet_table: list[list[int | None]] | None = None
        self._join_table: list[list[int | None]] | None = None
        self._meet_fn: Callable[[int, int], int] | None = None
        self._join_fn: Callable[[int, int], int] | None = None

    @staticmethod
    def _make_index(elems: tuple) -> dict:
        if not elems:
            raise MalformedInputError("an algebra needs at least one element")
        index = {e: i for i, e in enumerate(elems)}
        if len(index) != len(elems):
            raise MalformedInputError("duplicate element identifiers")
        return index

    def _init_common(self, elems, index, neg, bot, top, generators):
        self.elements = elems
        self._index = index
        for name, value in (("bot", bot), ("top", top)):
            if value not in index:
                raise MalformedInputError(f"{name} {value!r} is not an element")
        negidx = []
        for e in elems:
            if e not in neg:
                raise MalformedInputError(f"negation undefined at {e!r}")
            if neg[e] not in index:
                raise MalformedInputError(f"neg({e!r}) = {neg[e]!r} is not an element")
            negidx.append(index[neg[e]])
        if any(k not in index for k in neg):
            raise MalformedInputError("negation mentions an unknown element")
        for g in generators:
            if g not in index:
                raise MalformedInputError(f"generator {g!r} is not an element")
        self._neg = tuple(negidx)
        self._bot = index[bot]
        self._top = index[top]
        self.generators = tuple(generators)

    @classmethod
    def from_operations(
        cls,
        elements: Iterable[Hashable],
        meet: Callable[[Hashable, Hashable], Hashable],
        join: Callable[[Hashable, Hashable], Hashable],
        neg: Callable[[Hashable], Hashable],
        bot: Hashable,
        top: Hashable,
        *,
        generators: Sequence[Hashable] = (),
    ) -> "FiniteKleeneAlgebra":
        """Build an algebra whose operations are given as functions on elements.

        Used for products, subalgebras and algebras of functions; the caller
        guarantees the functions are closed on ``elements``.
        """
        self = cls.__new__(cls)
        elems = tuple(elements)
        index = cls._make_index(elems)
        self._init_common(elems, index, {e: neg(e) for e in elems}, bot, top, generators)
        self._le_table = None
        self.closure_added = 0
        self._meet_table = self._join_table = None
        self._meet_fn = lambda i, j: index[meet(elems[i], elems[j])]
        self._join_fn = lambda i, j: index[join(elems[i], elems[j])]
        return self

    # -- index-level primitives -------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self.elements)

    def __repr__(self) -> str:
        return f"FiniteKleeneAlgebra(<{len(self)} elements>)"

    def index(self, e: Hashable) -> int:
        return self._index[e]

    def _le(self, i: int, j: int) -> bool:
        if self._le_table is not None:
            return self._le_table[i][j]
        return self._meet_fn(i, j) == i

    def _glb(self, i: int, j: int) -> int | None:
        n = len(self.elements)
        lower = [k for k in range(n) if self._le(k, i) and self._le(k, j)]
        for g in lower:
            if all(self._le(k, g) for k in lower):
                return g
        return None

    def _lub(self, i: int, j: int) -> int | None:
        n = len(self.elements)
        upper = [k for k in range(n) if self._le(i, k) and self._le(j, k)]
        for g in upper:
            if all(self._le(g, k) for k in upper):
                return g
        return None

    def _derive_tables(self) -> None:
        n = len(self.elements)
        self._meet_table = [[self._glb(i, j) for j in range(n)] for i in range(n)]
        self._join_table = [[self._lub(i, j) for j in range(n)] for i in range(n)]

    def _meet(self, i: int, j: int) -> int:
        if self._meet_fn is not None:
            return self._meet_fn(i, j)
        if self._meet_table is None:
            self._derive_tables()
        m = self._meet_table[i][j]
        if m is None:
            raise InvalidStructureError(
                f"no meet for {self.elements[i]!r}, {self.elements[j]!r}: not a lattice"
            )
        return m

    def _join(self, i: int, j: int) -> int:
        if self._join_fn is not None:
            return self._join_fn(i, j)
        if self._join_table is None:
            self._derive_tables()
        m = self._join_table[i][j]
        if m is None:
            raise InvalidStructureError(
                f"no join for {self.elements[i]!r}, {self.elements[j]!r}: not a lattice"
            )
        return m

    # -- element-level API ------------------------------------------------------

    @property
    def bot(self) -> Hashable:
        return self.elements[self._bot]

    @property
    def top(self) -> Hashable:
        return self.elements[self._top]

    def leq(self, a: Hashable, b: Hashable) -> bool:
        return self._le(self._index[a], self._index[b])

    def meet(self, a: Hashable, b: Hashable) -> Hashable:
        return self.elements[self._meet(self._index[a], self._index[b])]

    def join(self, a: Hashable, b: Hashable) -> Hashable:
        return self.elements[self._join(self._index[a], self._index[b])]

    def neg(self, a: Hashable) -> Hashable:
        return self.elements[self._neg[self._index[a]]]

    def neg_map(self) -> dict:
        return {e: self.elements[self._neg[i]] for i, e in enumerate(self.elements)}

    def leq_pairs(self) -> list[tuple[Hashable, Hashable]]:
        """The full (reflexive) order relation, in canonical order."""
        E = self.elements
        n = len(E)
        return [(E[i], E[j]) for i in range(n) for j in range(n) if self._le(i, j)]

    def cover_pairs(self) -> list[tuple[Hashable, Hashable]]:
        """Hasse diagram edges; enough to recover the order by closure."""
        E = self.elements
        n = len(E)
        out = []
        for i in range(n):
            ups = [j for j in range(n) if j != i and self._le(i, j)]
            for j in ups:
                if not any(k != j and self._le(k, j) for k in ups):
                    out.append((E[i], E[j]))
        return out

    def linear_extension(self) -> list[int]:
        """Indices sorted so that every element comes after everything below it."""
        n = len(self.elements)
        height = [sum(1 for k in range(n) if self._le(k, i)) for i in range(n)]
        return sorted(range(n), key=lambda i: (height[i], i))

    def with_generators(self, generators: Sequence[Hashable]) -> "FiniteKleeneAlgebra":
        clone = object.__new__(type(self))
        clone.__dict__.update(self.__dict__)
        for g in generators:
            if g not in self._index:
                raise MalformedInputError(f"generator {g!r} is not an element")
        clone.generators = tuple(generators)
        return clone

    def same_as(self, other: "FiniteKleeneAlgebra") -> bool:
        """Equality on the nose: same elements, order, negation and bounds."""
        return (
            self.elements == other.elements
            and self.bot == other.bot
            and self.top == other.top
            and self.neg_map() == other.neg_map()
            and set(self.leq_pairs()) == set(other.leq_pairs())
        )


@dataclass(frozen=True)
class KleeneHom:
    """A map between algebras, stored as the tuple of images of ``source.elements``."""

    source: FiniteKleeneAlgebra
    target: FiniteKleeneAlgebra
    images: tuple

    def __call__(self, a: Hashable) -> Hashable:
        return self.images[self.source.index(a)]

    def as_dict(self) -> dict:
        return dict(zip(self.source.elements, self.images))

    def compose(self, first: "KleeneHom") -> "KleeneHom":
        """``self`` after ``first``."""
        return KleeneHom(first.source, self.target, tuple(self(first(a)) for a in first.source))

    def __hash__(self) -> int:
        return hash(self.images)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, KleeneHom)
            and self.source is other.source
            and self.target is other.target
            and self.images == other.images
        )


# -- validation -------------------------------------------------------------------


def validate_kleene_algebra(A: FiniteKleeneAlgebra) -> ValidationReport:
    """Check every Kleene-algebra law, one violation (first witness) per law."""
    E = A.elements
    n = len(E)
    found: dict[str, tuple] = {}
    notes = []
    if A.closure_added:
        notes.append(f"reflexive-transitive closure added {A.closure_added} order pairs")

    def flag(law: str, *witness) -> None:
        found.setdefault(law, tuple(witness))

    for i in range(n):
        for j in range(i + 1, n):
            if A._le(i, j) and A._le(j, i):
                flag("partial-order", E[i], E[j])
    lattice = "partial-order" not in found
    if lattice and A._meet_fn is None:
        if A._meet_table is None:
            A._derive_tables()
        for i in range(n):
            for j in range(n):
                if A._meet_table[i][j] is None:
                    flag("lattice", E[i], E[j])
                    lattice = False
                elif A._join_table[i][j] is None:
                    flag("lattice", E[i], E[j])
                    lattice = False
    for i in range(n):
        if not A._le(A._bot, i):
            flag("bounds", E[i])
        if not A._le(i, A._top):
            flag("bounds", E[i])
    neg = A._neg
    for i in range(n):
        if neg[neg[i]] != i:
            flag("involution", E[i])
    if neg[A._bot] != A._top:
        flag("neg-bottom", A.bot)
    if lattice:
        M = [[A._meet(i, j) for j in range(n)] for i in range(n)]
        J = [[A._join(i, j) for j in range(n)] for i in range(n)]
        for x in range(n):
            Mx = M[x]
            for y in range(n):
                xy = Mx[y]
                if neg[xy] != J[neg[x]][neg[y]]:
                    flag("DM", E[x], E[y])
                rhs = J[y][neg[y]]
                if J[Mx[neg[x]]][rhs] != rhs:
                    flag("K", E[x], E[y])
                Jy, Jxy = J[y], J[xy]
                for z in range(n):
                    if Mx[Jy[z]] != Jxy[Mx[z]]:
                        flag("distributive", E[x], E[y], E[z])
    order = ["partial-order", "lattice", "bounds", "distributive", "involution", "neg-bottom", "DM", "K"]
    violations = tuple(Violation(law, found[law]) for law in order if law in found)
    return ValidationReport(violations, tuple(notes))


def _require_valid(*algebras: FiniteKleeneAlgebra) -> None:
    for A in algebras:
        report = validate_kleene_algebra(A)
        if not report.ok:
            raise InvalidStructureError(f"not a Kleene algebra: {report.violations[0]}")


# -- constructions ------------------------------------------------------------------


def chain_algebra(names: Sequence[Hashable], neg: Mapping[Hashable, Hashable] | None = None) -> FiniteKleeneAlgebra:
    """A chain ``names[0] < names[1] < ...`` with order-reversing negation by default."""
    names = tuple(names)
    if neg is None:
        neg = {a: b for a, b in zip(names, reversed(names))}
    leq = list(zip(names, names[1:]))
    return FiniteKleeneAlgebra(names, leq, neg, names[0], names[-1])


def standard_K() -> FiniteKleeneAlgebra:
    """The three-element chain 0 < 1/2 < 1 with 1/2 fixed by negation."""
    return chain_algebra(K_VALUES)


def boolean_2() -> FiniteKleeneAlgebra:
    return chain_algebra((ZERO, ONE))


def c6() -> FiniteKleeneAlgebra:
    """The six-element Kleene chain 0 < a < b < c < d < 1 with neg a = d, neg b = c."""
    return chain_algebra(("0", "a", "b", "c", "d", "1"))


def de_morgan_diamond() -> FiniteKleeneAlgebra:
    """Four-element De Morgan algebra whose two atoms are negation-fixed; fails (K)."""
    return FiniteKleeneAlgebra(
        ("0", "a", "b", "1"),
        [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        {"0": "1", "a": "a", "b": "b", "1": "0"},
        "0",
        "1",
    )


def product(A: FiniteKleeneAlgebra, B: FiniteKleeneAlgebra) -> FiniteKleeneAlgebra:
    """Direct product with componentwise operations on pairs ``(a, b)``."""
    _require_valid(A, B)
    return FiniteKleeneAlgebra.from_operations(
        [(a, b) for a in A for b in B],
        lambda x, y: (A.meet(x[0], y[0]), B.meet(x[1], y[1])),
        lambda x, y: (A.join(x[0], y[0]), B.join(x[1], y[1])),
        lambda x: (A.neg(x[0]), B.neg(x[1])),
        (A.bot, B.bot),
        (A.top, B.top),
    )


def k_squared() -> FiniteKleeneAlgebra:
    return product(standard_K(), standard_K())


def k_prime() -> FiniteKleeneAlgebra:
    """K x K without the two pairs (0, 1) and (1, 0)."""
    K2 = k_squared()
    return subalgebra(K2, [e for e in K2.elements if e not in ((ZERO, ONE), (ONE, ZERO))])


def subalgebra(A: FiniteKleeneAlgebra, subset: Iterable[Hashable]) -> FiniteKleeneAlgebra:
    """Restriction of ``A`` to a subset closed under all operations.

    Raises :class:`NotClosedError` naming the offending element or pair.
    """
    S = set(subset)
    unknown = [s for s in S if s not in A._index]
    if unknown:
        raise MalformedInputError(f"{unknown[0]!r} is not an element")
    for const in (A.bot, A.top):
        if const not in S:
            raise NotClosedError(f"subset misses the constant {const!r}", (const,))
    elems = [e for e in A.elements if e in S]
    for a in elems:
        if A.neg(a) not in S:
            raise NotClosedError(f"neg({a!r}) = {A.neg(a)!r} is missing", (a,))
    for a in elems:
        for b in elems:
            for op in (A.meet, A.join):
                if op(a, b) not in S:
                    raise NotClosedError(
                        f"{op.__name__}({a!r}, {b!r}) = {op(a, b)!r} is missing", (a, b)
                    )
    return FiniteKleeneAlgebra.from_operations(
        elems, A.meet, A.join, A.neg, A.bot, A.top,
        generators=[g for g in A.generators if g in S],
    )


# -- homomorphisms --------------------------------------------------------------------


def _search_homs(
    A: FiniteKleeneAlgebra,
    B: FiniteKleeneAlgebra,
    *,
    injective: bool = False,
    candidates: list[list[int]] | None = None,
    first_only: bool = False,
) -> list[tuple[int, ...]]:
    """Backtracking over A in a linear extension of its order.

    Every assignment is closed under the consequences it forces (negation,
    meets and joins with already-assigned elements) before branching, so the
    search never enumerates raw |B|^|A| maps.
    """
    n = len(A)
    assign: list[int | None] = [None] * n
    used: set[int] = set()
    assigned: list[int] = []
    allowed = [set(c) for c in candidates] if candidates is not None else None

    def push(i: int, j: int, trail: list[int]) -> bool:
        queue = [(i, j)]
        while queue:
            a, b = queue.pop()
            cur = assign[a]
            if cur is not None:
                if cur != b:
                    return False
                continue
            if injective and b in used:
                return False
            if allowed is not None and b not in allowed[a]:
                return False
            assign[a] = b
            trail.append(a)
            if injective:
                used.add(b)
            queue.append((A._neg[a], B._neg[b]))
            for c in assigned:
                bc = assign[c]
                queue.append((A._meet(a, c), B._meet(b, bc)))
                queue.append((A._join(a, c), B._join(b, bc)))
            assigned.append(a)
        return True

    def undo(trail: list[int]) -> None:
        for a in reversed(trail):
            if injective:
                used.discard(assign[a])
            assign[a] = None
            assigned.remove(a)

    results: list[tuple[int, ...]] = []
    order = A.linear_extension()

    def recurse() -> bool:
        nxt = next((i for i in order if assign[i] is None), None)
        if nxt is None:
            results.append(tuple(assign))
            return first_only
        for j in range(len(B)):
            trail: list[int] = []
            if push(nxt, j, trail):
                if recurse():
                    return True
            undo(trail)
        return False

    trail: list[int] = []
    if push(A._bot, B._bot, trail) and push(A._top, B._top, trail):
        recurse()
    results.sort()
    return results


def hom_enumerate(A: FiniteKleeneAlgebra, B: FiniteKleeneAlgebra) -> list[KleeneHom]:
    """All homomorphisms A -> B, sorted lexicographically by image indices."""
    return [
        KleeneHom(A, B, tuple(B.elements[j] for j in imgs))
        for imgs in _search_homs(A, B)
    ]


def is_homomorphism(A: FiniteKleeneAlgebra, B: FiniteKleeneAlgebra, images: Mapping) -> bool:
    """Full-table preservation check, independent of the search above."""
    if images[A.bot] != B.bot or images[A.top] != B.top:
        return False
    for a in A:
        if images[A.neg(a)] != B.neg(images[a]):
            return False
        for b in A:
            if images[A.meet(a, b)] != B.meet(images[a], images[b]):
                return False
            if images[A.join(a, b)] != B.join(images[a], images[b]):
                return False
    return True


def _signature(A: FiniteKleeneAlgebra, i: int) -> tuple:
    n = len(A)
    below = sum(1 for k in range(n) if A._le(k, i))
    above = sum(1 for k in range(n) if A._le(i, k))
    return (below, above, A._neg[i] == i)


def is_isomorphic_alg(A: FiniteKleeneAlgebra, B: FiniteKleeneAlgebra) -> dict | None:
    """An isomorphism A -> B as a dict, or ``None``."""
    if len(A) != len(B):
        return None
    sigA = [_signature(A, i) for i in range(len(A))]
    sigB = [_signature(B, j) for j in range(len(B))]
    if sorted(sigA) != sorted(sigB):
        return None
    cands = [[j for j in range(len(B)) if sigB[j] == sigA[i]] for i in range(len(A))]
    found = _search_homs(A, B, injective=True, candidates=cands, first_only=True)
    if not found:
        return None
    return {A.elements[i]: B.elements[j] for i, j in enumerate(found[0])}


def free_kleene(n: int, *, max_n: int = DEFAULT_MAX_FREE) -> FiniteKleeneAlgebra:
    """The free Kleene algebra on ``n`` generators, as morphisms K~^n -> K~.

    Generators are the coordinate projections, in order.
    """
    from .space import dual_E, power_space, projection_table

    if n < 1 or n > max_n:
        raise GuardError(f"free_kleene needs 1 <= n <= {max_n}, got {n}")
    F = dual_E(power_space(n, max_n=max(n, 4)))
    return F.with_generators([projection_table(n, i) for i in range(n)])
