"""Abstract and weighted simplicial complexes, nerves of posets and their recognition.

Complexes are stored by their facets; a set is a face iff it lies inside some
facet.  All searches break ties by the canonical vertex order and return the
first witness they meet.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

from .algebra import HALF, ONE, ZERO
from .base import InvalidStructureError, MalformedInputError, label, reflexive_transitive_closure

Vertex = Hashable


class Poset:
    """A finite partial order; the given relation is closed reflexively and transitively."""

    def __init__(self, elements: Iterable[Hashable], leq: Iterable[tuple[Hashable, Hashable]] = ()):
        self.elements = tuple(elements)
        self._index = {e: i for i, e in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise MalformedInputError("duplicate poset elements")
        raw = set()
        for a, b in leq:
            if a not in self._index or b not in self._index:
                raise MalformedInputError(f"order pair {(a, b)!r} mentions an unknown element")
            raw.add((self._index[a], self._index[b]))
        n = len(self.elements)
        self._le = reflexive_transitive_closure(n, raw)
        for i in range(n):
            for j in range(i + 1, n):
                if self._le[i][j] and self._le[j][i]:
                    raise InvalidStructureError(
                        f"not a partial order: {self.elements[i]!r} and {self.elements[j]!r} are mutually below"
                    )

    def __len__(self) -> int:
        return len(self.elements)

    def leq(self, a: Hashable, b: Hashable) -> bool:
        return self._le[self._index[a]][self._index[b]]

    def leq_pairs(self) -> list[tuple[Hashable, Hashable]]:
        E = self.elements
        return [(a, b) for a in E for b in E if self.leq(a, b)]

    def maximal(self) -> list[Hashable]:
        return [a for a in self.elements if not any(b != a and self.leq(a, b) for b in self.elements)]

    def upper_covers(self, a: Hashable) -> list[Hashable]:
        ups = [b for b in self.elements if b != a and self.leq(a, b)]
        return [b for b in ups if not any(c != b and self.leq(c, b) for c in ups)]


class AbstractComplex:
    """Simplicial complex on ``vertices`` generated by ``facets``.

    Non-maximal generators are dropped and uncovered vertices become singleton
    facets, so ``facets`` are always the maximal faces in canonical order.
    """

    def __init__(self, vertices: Iterable[Vertex], facets: Iterable[Iterable[Vertex]]):
        self.vertices = tuple(vertices)
        self._index = {v: i for i, v in enumerate(self.vertices)}
        if len(self._index) != len(self.vertices):
            raise MalformedInputError("duplicate vertex identifiers")
        gens = set()
        for f in facets:
            f = frozenset(f)
            if not f:
                continue
            for v in f:
                if v not in self._index:
                    raise MalformedInputError(f"facet vertex {v!r} is not a declared vertex")
            gens.add(f)
        maximal = [f for f in gens if not any(f < g for g in gens)]
        covered = set().union(*maximal) if maximal else set()
        maximal += [frozenset([v]) for v in self.vertices if v not in covered]
        self.facets = tuple(sorted(maximal, key=self._key))

    def _key(self, face: Iterable[Vertex]) -> tuple[int, ...]:
        return tuple(sorted(self._index[v] for v in face))

    def index(self, v: Vertex) -> int:
        return self._index[v]

    def sorted_face(self, face: Iterable[Vertex]) -> tuple:
        return tuple(self.vertices[i] for i in self._key(face))

    def is_face(self, face: Iterable[Vertex]) -> bool:
        face = frozenset(face)
        return any(face <= f for f in self.facets)

    def faces(self, k: int) -> list[frozenset]:
        """All faces with exactly ``k`` vertices."""
        out = set()
        for f in self.facets:
            if len(f) >= k:
                out.update(frozenset(c) for c in combinations(f, k))
        return sorted(out, key=self._key)

    def edges(self) -> list[frozenset]:
        return self.faces(2)

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.faces(k)) for k in range(1, self.dimension + 2))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AbstractComplex)
            and self.vertices == other.vertices
            and set(self.facets) == set(other.facets)
        )

    def __hash__(self) -> int:
        return hash((self.vertices, frozenset(self.facets)))

    def __repr__(self) -> str:
        return f"AbstractComplex(<{len(self.vertices)} vertices, {len(self.facets)} facets>)"


class WeightedComplex:
    """A complex with a positive integer weight on every vertex."""

    def __init__(self, complex: AbstractComplex, weight: Mapping[Vertex, int]):
        self.complex = complex
        for v in complex.vertices:
            if v not in weight:
                raise MalformedInputError(f"vertex {v!r} has no weight")
            w = weight[v]
            if not isinstance(w, int) or isinstance(w, bool) or w < 1:
                raise MalformedInputError(f"weight of {v!r} must be a positive integer, got {w!r}")
        self.weight = {v: weight[v] for v in complex.vertices}

    @classmethod
    def build(cls, vertices, facets, weight) -> "WeightedComplex":
        return cls(AbstractComplex(vertices, facets), weight)

    @property
    def vertices(self) -> tuple:
        return self.complex.vertices

    @property
    def facets(self) -> tuple:
        return self.complex.facets

    def indexed(self) -> "WeightedComplex":
        """Same complex with vertices renamed 0..d-1 in canonical order."""
        C = self.complex
        return WeightedComplex.build(
            range(len(C.vertices)),
            [[C.index(v) for v in f] for f in C.facets],
            {i: self.weight[v] for i, v in enumerate(C.vertices)},
        )

    def weight_multiset(self) -> list[int]:
        return sorted(self.weight.values())

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightedComplex) and self.complex == other.complex and self.weight == other.weight

    def __hash__(self) -> int:
        return hash(self.complex)

    def __repr__(self) -> str:
        return f"WeightedComplex(<{len(self.vertices)} vertices, weights {self.weight_multiset()}>)"


# -- nerves -------------------------------------------------------------------------


def nerve(P: Poset) -> AbstractComplex:
    """Order complex: faces are the chains, facets the maximal chains."""
    chains = []

    def extend(chain: list) -> None:
        ups = P.upper_covers(chain[-1])
        if not ups:
            chains.append(tuple(chain))
            return
        for b in ups:
            chain.append(b)
            extend(chain)
            chain.pop()

    for a in P.elements:
        if not any(b != a and P.leq(b, a) for b in P.elements):
            extend([a])
    return AbstractComplex(P.elements, chains)


def weighted_nerve(X) -> WeightedComplex:
    """Nerve of a Kleene space, weight 1 on marked points and 2 elsewhere."""
    P = Poset(X.points, X.leq_pairs())
    return WeightedComplex(nerve(P), {p: 1 if p in X.M else 2 for p in X.points})


def missing_faces(C: AbstractComplex) -> list[frozenset]:
    """Inclusion-minimal non-faces, ordered by size and then canonically."""
    n = len(C.vertices)
    idx_facets = [frozenset(C.index(v) for v in f) for f in C.facets]
    faces = set()
    for f in idx_facets:
        for k in range(1, len(f) + 1):
            faces.update(frozenset(c) for c in combinations(sorted(f), k))
    out = []
    top = max((len(f) for f in idx_facets), default=0) + 1
    level = sorted((f for f in faces if len(f) == 1), key=sorted)
    for k in range(2, top + 1):
        for F in level:
            hi = max(F)
            for v in range(hi + 1, n):
                N = F | {v}
                if N in faces:
                    continue
                if all(N - {u} in faces for u in N):
                    out.append(N)
        level = sorted((f for f in faces if len(f) == k), key=sorted)
    out.sort(key=lambda s: (len(s), sorted(s)))
    return [frozenset(C.vertices[i] for i in s) for s in out]


def skeleton(C: AbstractComplex, k: int) -> list[frozenset]:
    return C.faces(k)


# -- comparability ------------------------------------------------------------------


def transitive_orientation(
    vertices: Sequence[Vertex],
    edges: Iterable[Iterable[Vertex]],
    required_sinks: Iterable[Vertex] = (),
) -> frozenset[tuple[Vertex, Vertex]] | None:
    """A transitive orientation in which every required sink has no outgoing edge.

    Backtracking over edges in canonical order; each choice is closed under the
    orientations it forces before branching.  An edge ``(p, q)`` points from
    ``p`` to ``q``.
    """
    V = tuple(vertices)
    idx = {v: i for i, v in enumerate(V)}
    n = len(V)
    adj: list[set[int]] = [set() for _ in range(n)]
    keys = set()
    for e in edges:
        u, v = tuple(e)
        a, b = idx[u], idx[v]
        if a == b:
            raise MalformedInputError("loops are not allowed")
        adj[a].add(b)
        adj[b].add(a)
        keys.add((min(a, b), max(a, b)))
    keys = sorted(keys)
    sinks = {idx[s] for s in required_sinks}
    orient: dict[tuple[int, int], tuple[int, int]] = {}

    def key(a: int, b: int) -> tuple[int, int]:
        return (a, b) if a < b else (b, a)

    def force(tail: int, head: int, trail: list) -> bool:
        stack = [(tail, head)]
        while stack:
            a, b = stack.pop()
            k = key(a, b)
            cur = orient.get(k)
            if cur is not None:
                if cur != (a, b):
                    return False
                continue
            if a in sinks:
                return False
            orient[k] = (a, b)
            trail.append(k)
            for c in adj[a]:
                if c != b and c not in adj[b]:
                    stack.append((a, c))
            for c in adj[b]:
                if c != a and c not in adj[a]:
                    stack.append((c, b))
            for c in adj[b]:
                if c != a and orient.get(key(b, c)) == (b, c):
                    if c not in adj[a]:
                        return False
                    stack.append((a, c))
            for c in adj[a]:
                if c != b and orient.get(key(a, c)) == (c, a):
                    if c not in adj[b]:
                        return False
                    stack.append((c, b))
        return True

    def undo(trail: list) -> None:
        for k in trail:
            del orient[k]

    start: list = []
    for s in sorted(sinks):
        for t in sorted(adj[s]):
            if not force(t, s, start):
                return None

    def rec() -> bool:
        k = next((k for k in keys if k not in orient), None)
        if k is None:
            return True
        for tail, head in (k, k[::-1]):
            trail: list = []
            if force(tail, head, trail) and rec():
                return True
            undo(trail)
        return False

    if not rec():
        return None
    return frozenset((V[a], V[b]) for a, b in orient.values())


def is_transitive_orientation(edges: Iterable[Iterable[Vertex]], orientation: Iterable[tuple]) -> bool:
    """Each edge oriented exactly once and p->r->q implies p->q."""
    E = {frozenset(e) for e in edges}
    O = set(orientation)
    if {frozenset(o) for o in O} != E or len(O) != len(E):
        return False
    out: dict = {}
    for p, q in O:
        out.setdefault(p, set()).add(q)
    return all((p, q) in O for p, r in O for q in out.get(r, ()) if q != p)


def _has_large_missing_face(C: AbstractComplex) -> frozenset | None:
    return next((f for f in missing_faces(C) if len(f) >= 3), None)


def is_order_complex(C: AbstractComplex) -> Poset | None:
    """A poset whose nerve is ``C`` (same vertex set), or ``None``."""
    if _has_large_missing_face(C) is not None:
        return None
    orientation = transitive_orientation(C.vertices, C.edges())
    if orientation is None:
        return None
    return Poset(C.vertices, orientation)


@dataclass(frozen=True)
class KleeneWitness:
    orientation: frozenset
    poset: Poset


@dataclass(frozen=True)
class KleeneCheck:
    witness: KleeneWitness | None
    condition: str | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.witness is not None

    def message(self) -> str:
        if self.ok:
            return "kleene-complex: ok"
        return f"kleene-complex: condition ({self.condition}) violated, {self.detail}"


def check_kleene_complex(WC: WeightedComplex) -> KleeneCheck:
    """Decide the three Kleene-complex conditions, naming the first that fails."""
    for v in WC.vertices:
        if WC.weight[v] not in (1, 2):
            return KleeneCheck(None, "a", f"vertex {label(v)} has weight {WC.weight[v]}")
    big = _has_large_missing_face(WC.complex)
    if big is not None:
        names = ",".join(label(v) for v in WC.complex.sorted_face(big))
        return KleeneCheck(None, "b", f"missing face {{{names}}}")
    ones = [v for v in WC.vertices if WC.weight[v] == 1]
    orientation = transitive_orientation(WC.vertices, WC.complex.edges(), ones)
    if orientation is None:
        return KleeneCheck(
            None, "c", "no transitive orientation of the 1-skeleton has every weight-1 vertex as a sink"
        )
    return KleeneCheck(KleeneWitness(orientation, Poset(WC.vertices, orientation)))


def is_kleene_complex(WC: WeightedComplex) -> KleeneWitness | None:
    return check_kleene_complex(WC).witness


def embed_poset(P: Poset, weight: Mapping[Hashable, int]) -> dict[Hashable, tuple[Fraction, ...]]:
    """Order-embedding of ``P`` into K~^(|P|+1) whose marked points are the weight-1 elements.

    The first coordinate records the weight; coordinate j+1 records how
    element j sits below (1), outside-and-maximal (0) or neither (1/2).
    """
    maxima = set(P.maximal())
    for v in P.elements:
        if weight[v] not in (1, 2):
            raise ValueError(f"weight of {v!r} is {weight[v]}, expected 1 or 2")
        if weight[v] == 1 and v not in maxima:
            raise ValueError(f"{v!r} has weight 1 but is not maximal")
    out = {}
    for vi in P.elements:
        d = ONE if weight[vi] == 1 else HALF
        deltas = []
        for vj in P.elements:
            if P.leq(vj, vi):
                deltas.append(ONE)
            elif vi in maxima:
                deltas.append(ZERO)
            else:
                deltas.append(HALF)
        out[vi] = (d, *deltas)
    return out


# -- isomorphism ----------------------------------------------------------------------


def _as_weighted(C) -> WeightedComplex:
    if isinstance(C, WeightedComplex):
        return C
    return WeightedComplex(C, {v: 1 for v in C.vertices})


def complex_isomorphic(C1, C2) -> dict | None:
    """Weight-preserving vertex bijection carrying facets onto facets, or ``None``."""
    W1, W2 = _as_weighted(C1), _as_weighted(C2)
    A, B = W1.complex, W2.complex
    if len(A.vertices) != len(B.vertices) or len(A.facets) != len(B.facets):
        return None
    if W1.weight_multiset() != W2.weight_multiset():
        return None

    def profile(W: WeightedComplex) -> tuple[dict, dict]:
        C = W.complex
        nbrs = {v: set() for v in C.vertices}
        for e in C.edges():
            a, b = tuple(e)
            nbrs[a].add(b)
            nbrs[b].add(a)
        sig = {
            v: (W.weight[v], len(nbrs[v]), tuple(sorted(len(f) for f in C.facets if v in f)))
            for v in C.vertices
        }
        return sig, nbrs

    s1, n1 = profile(W1)
    s2, n2 = profile(W2)
    if sorted(s1.values()) != sorted(s2.values()):
        return None
    target_facets = set(B.facets)
    mapping: dict = {}
    used: set = set()
    order = sorted(A.vertices, key=lambda v: (-len(n1[v]), A.index(v)))

    def rec(k: int) -> bool:
        if k == len(order):
            return {frozenset(mapping[v] for v in f) for f in A.facets} == target_facets
        p = order[k]
        for q in B.vertices:
            if q in used or s1[p] != s2[q]:
                continue
            if any((p2 in n1[p]) != (q2 in n2[q]) for p2, q2 in mapping.items()):
                continue
            mapping[p] = q
            used.add(q)
            if rec(k + 1):
                return True
            del mapping[p]
            used.discard(q)
        return False

    return dict(mapping) if rec(0) else None
