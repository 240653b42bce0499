"""Exact rational polyhedral geometry: denominators, unimodularity, triangulations.

Vectors are tuples of Fractions.  Nothing here touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial, gcd, lcm
from typing import Iterable, Sequence

from .algebra import HALF, ONE
from .base import GuardError, InvalidStructureError, MalformedInputError
from .complex import Poset, WeightedComplex, nerve
from .space import TermPair, cube_points, leq_n, sol_K

Vector = tuple  # of Fractions

DEFAULT_MAX_KLEENE = 3


def vec(coords: Iterable) -> Vector:
    return tuple(Fraction(c) for c in coords)


def den(v: Sequence[Fraction]) -> int:
    """Least common multiple of the reduced coordinate denominators."""
    return lcm(1, *(Fraction(c).denominator for c in v))


def homogeneous(v: Sequence[Fraction]) -> tuple[int, ...]:
    q = den(v)
    return tuple(int(Fraction(c) * q) for c in v) + (q,)


def from_homogeneous(h: Sequence[int]) -> Vector:
    q = h[-1]
    return tuple(Fraction(c, q) for c in h[:-1])


def int_det(M: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    A = [list(r) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def frac_det(M: Sequence[Sequence[Fraction]]) -> Fraction:
    A = [list(r) for r in M]
    n = len(A)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        det *= A[k][k]
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            if f:
                for j in range(k, n):
                    A[i][j] -= f * A[k][j]
    return det


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    A = [list(map(Fraction, r)) for r in rows]
    if not A:
        return 0
    r = 0
    for c in range(len(A[0])):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c] / A[r][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    return r


def affinely_independent(points: Sequence[Vector]) -> bool:
    return rank([tuple(p) + (Fraction(1),) for p in points]) == len(points)


def is_regular_simplex(vertices: Sequence[Sequence[Fraction]]) -> bool:
    """The homogeneous correspondents extend to a basis of Z^(d+1).

    Decided by the gcd of the maximal minors of the matrix they form.
    """
    rows = [homogeneous(v) for v in vertices]
    if not rows:
        return True
    k, cols = len(rows), len(rows[0])
    if k > cols:
        return False
    g = 0
    for sel in combinations(range(cols), k):
        g = gcd(g, int_det([[r[c] for c in sel] for r in rows]))
        if g == 1:
            return True
    return False


# -- triangulations -------------------------------------------------------------------


class RationalTriangulation:
    """Maximal simplices over an indexed list of rational vertices.

    Vertices that lie in no given simplex become 0-simplices.
    """

    def __init__(self, vertices: Iterable[Iterable], simplices: Iterable[Iterable[int]], dim: int | None = None):
        self.vertices = tuple(vec(v) for v in vertices)
        if dim is None:
            if not self.vertices:
                raise MalformedInputError("dimension is needed for an empty triangulation")
            dim = len(self.vertices[0])
        self.dim = dim
        if any(len(v) != dim for v in self.vertices):
            raise MalformedInputError(f"all vertices must have {dim} coordinates")
        if len(set(self.vertices)) != len(self.vertices):
            raise MalformedInputError("repeated vertex")
        n = len(self.vertices)
        gens = set()
        for s in simplices:
            s = tuple(sorted(set(s)))
            if not s:
                continue
            if any(not (0 <= i < n) for i in s):
                raise MalformedInputError(f"simplex {s} refers to a missing vertex")
            gens.add(s)
        maximal = [s for s in gens if not any(set(s) < set(t) for t in gens)]
        used = {i for s in maximal for i in s}
        maximal += [(i,) for i in range(n) if i not in used]
        for s in maximal:
            if not affinely_independent([self.vertices[i] for i in s]):
                raise InvalidStructureError(f"simplex {s} has affinely dependent vertices")
        self.simplices = tuple(sorted(maximal))

    def simplex_vertices(self, s: Sequence[int]) -> list[Vector]:
        return [self.vertices[i] for i in s]

    def faces(self, k: int) -> list[tuple[int, ...]]:
        out = set()
        for s in self.simplices:
            out.update(combinations(s, k))
        return sorted(out)

    def f_vector(self) -> tuple[int, ...]:
        top = max((len(s) for s in self.simplices), default=0)
        return tuple(len(self.faces(k)) for k in range(1, top + 1))

    def index(self, v: Sequence) -> int:
        return self.vertices.index(vec(v))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalTriangulation)
            and self.dim == other.dim
            and self.vertices == other.vertices
            and self.simplices == other.simplices
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self.simplices))

    def __repr__(self) -> str:
        return f"RationalTriangulation(dim={self.dim}, <{len(self.vertices)} vertices, {len(self.simplices)} simplices>)"


def is_regular_triangulation(T: RationalTriangulation) -> bool:
    return all(is_regular_simplex(T.simplex_vertices(s)) for s in T.simplices)


def simplex_volume(vertices: Sequence[Vector], dim: int) -> Fraction:
    """d-dimensional volume; zero for lower-dimensional simplices."""
    if len(vertices) != dim + 1:
        return Fraction(0)
    v0 = vertices[0]
    M = [[a - b for a, b in zip(v, v0)] for v in vertices[1:]]
    return abs(frac_det(M)) / factorial(dim)


def volume(T: RationalTriangulation) -> Fraction:
    return sum((simplex_volume(T.simplex_vertices(s), T.dim) for s in T.simplices), Fraction(0))


def realize(WC: WeightedComplex) -> RationalTriangulation:
    """Send the i-th vertex to e_i / weight, in the complex's canonical order."""
    C = WC.complex
    d = len(C.vertices)
    verts = []
    for i, v in enumerate(C.vertices):
        row = [Fraction(0)] * d
        row[i] = Fraction(1, WC.weight[v])
        verts.append(tuple(row))
    return RationalTriangulation(verts, [[C.index(v) for v in f] for f in C.facets], dim=d)


def sc_of(T: RationalTriangulation) -> WeightedComplex:
    """Vertex-index complex of ``T`` weighted by denominators."""
    n = len(T.vertices)
    return WeightedComplex.build(range(n), T.simplices, {i: den(T.vertices[i]) for i in range(n)})


@lru_cache(maxsize=None)
def kleene_triangulation(n: int, *, max_n: int = DEFAULT_MAX_KLEENE) -> RationalTriangulation:
    """Convex hulls of the chains of {0,1/2,1}^n under the K~ order."""
    if n < 1 or n > max_n:
        raise GuardError(f"kleene_triangulation needs 1 <= n <= {max_n}, got {n}")
    pts = cube_points(n)
    P = Poset(pts, [(x, y) for x in pts for y in pts if leq_n(x, y)])
    C = nerve(P)
    idx = {p: i for i, p in enumerate(pts)}
    return RationalTriangulation(pts, [[idx[p] for p in f] for f in C.facets], dim=n)


def subtriangulation(T: RationalTriangulation, keep: Iterable[int]) -> RationalTriangulation:
    """Faces of ``T`` spanned by the kept vertices, reindexed in the original order."""
    keep = sorted(set(keep))
    new = {old: i for i, old in enumerate(keep)}
    simplices = []
    for s in T.simplices:
        part = [new[i] for i in s if i in new]
        if part:
            simplices.append(part)
    return RationalTriangulation([T.vertices[i] for i in keep], simplices, dim=T.dim)


def sigma_theta(theta: Iterable[TermPair], n: int) -> RationalTriangulation:
    """Simplices of S_n all of whose vertices solve ``theta``."""
    S = kleene_triangulation(n)
    sol = set(sol_K(theta, n))
    return subtriangulation(S, [i for i, v in enumerate(S.vertices) if v in sol])


# -- the inequality system of a Kleene simplex ------------------------------------------


def simplex_system(vertices: Sequence[Sequence[Fraction]]) -> tuple[tuple[int, ...], tuple[str, ...], tuple[str, ...]]:
    """Chain system describing a simplex of S_n.

    Returns ``(p, e, s)`` such that the simplex is the set of x in [0,1]^n with
    ``1/2 e[0] y[p[0]] e[1] ... e[n-1] y[p[n-1]] e[n] 1`` where ``y[i]`` is
    ``x[i]`` if ``s[i] == '+'`` and ``1 - x[i]`` otherwise, and every ``e`` is
    ``'<='`` or ``'='``.  ``p`` is 0-based.
    """
    chain = [vec(v) for v in vertices]
    if not chain:
        raise InvalidStructureError("empty simplex")
    n = len(chain[0])
    for a, b in combinations(chain, 2):
        if not (leq_n(a, b) or leq_n(b, a)):
            raise InvalidStructureError("vertices do not form a chain of {0,1/2,1}^n")
    for v in chain:
        if any(c not in (0, HALF, 1) for c in v):
            raise InvalidStructureError(f"{v!r} is not a point of {{0,1/2,1}}^n")
    top = max(chain, key=lambda v: sum(c != HALF for c in v))
    s = tuple("-" if top[i] == 0 else "+" for i in range(n))

    def y(v, i):
        return v[i] if s[i] == "+" else 1 - v[i]

    # ones[i]: how many vertices put y_i at 1; more ones means larger y_i
    ones = [sum(y(v, i) == ONE for v in chain) for i in range(n)]
    p = tuple(sorted(range(n), key=lambda i: (ones[i], i)))
    seq = [0] + [ones[i] for i in p] + [len(chain)]
    e = tuple("=" if seq[k] == seq[k + 1] else "<=" for k in range(n + 1))
    return p, e, s


def system_holds(system: tuple, x: Sequence[Fraction]) -> bool:
    p, e, s = system
    if any(not (0 <= c <= 1) for c in x):
        return False
    ys = [HALF] + [x[i] if s[i] == "+" else 1 - x[i] for i in p] + [ONE]
    for k, rel in enumerate(e):
        a, b = ys[k], ys[k + 1]
        if (rel == "=" and a != b) or (rel == "<=" and a > b):
            return False
    return True


# -- point location ----------------------------------------------------------------------


def _solve_square(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    n = len(A)
    M = [row[:] + [bi] for row, bi in zip(A, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        pc = M[c][c]
        M[c] = [x / pc for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [M[i][n] for i in range(n)]


class _AffineSolver:
    """Precomputed affine coordinates on one simplex."""

    __slots__ = ("chosen", "inverse", "rows", "lo", "hi")

    def __init__(self, vertices: Sequence[Vector]):
        k = len(vertices)
        dim = len(vertices[0])
        self.rows = [[Fraction(v[r]) for v in vertices] for r in range(dim)] + [[Fraction(1)] * k]
        self.lo = tuple(min(v[c] for v in vertices) for c in range(dim))
        self.hi = tuple(max(v[c] for v in vertices) for c in range(dim))
        chosen: list[int] = []
        for r in range(len(self.rows)):
            if rank([self.rows[i] for i in chosen + [r]]) > len(chosen):
                chosen.append(r)
                if len(chosen) == k:
                    break
        if len(chosen) < k:
            raise InvalidStructureError("affinely dependent simplex")
        self.chosen = chosen
        square = [self.rows[i] for i in chosen]
        cols = [_solve_square(square, [Fraction(int(i == j)) for i in range(k)]) for j in range(k)]
        self.inverse = [[cols[j][i] for j in range(k)] for i in range(k)]

    def solve(self, x: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
        rhs = list(x) + [Fraction(1)]
        b = [rhs[i] for i in self.chosen]
        lam = [sum(a * c for a, c in zip(row, b)) for row in self.inverse]
        for r, row in enumerate(self.rows):
            if r not in self.chosen and sum(a * l for a, l in zip(row, lam)) != rhs[r]:
                return None
        return tuple(lam)


def barycentric(vertices: Sequence[Vector], x: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
    """Affine coordinates of ``x`` on the affine hull of ``vertices``, if it lies there."""
    return _AffineSolver([vec(v) for v in vertices]).solve(vec(x))


def _solvers(T: RationalTriangulation) -> list[_AffineSolver]:
    cached = T.__dict__.get("_solvers")
    if cached is None:
        cached = [_AffineSolver(T.simplex_vertices(s)) for s in T.simplices]
        T.__dict__["_solvers"] = cached
    return cached


def locate(T: RationalTriangulation, x: Sequence) -> tuple[tuple[int, ...], tuple[Fraction, ...]] | None:
    """Carrier face of ``x`` (the face with ``x`` in its relative interior) and its coordinates."""
    x = vec(x)
    if len(x) != T.dim:
        raise MalformedInputError(f"point has {len(x)} coordinates, expected {T.dim}")
    for s, solver in zip(T.simplices, _solvers(T)):
        if any(c < a or c > b for c, a, b in zip(x, solver.lo, solver.hi)):
            continue
        lam = solver.solve(x)
        if lam is None or any(l < 0 for l in lam):
            continue
        face = tuple(i for i, l in zip(s, lam) if l > 0)
        return face, tuple(l for l in lam if l > 0)
    return None


def contains(T: RationalTriangulation, x: Sequence) -> bool:
    return locate(T, x) is not None


# -- intersection validity -------------------------------------------------------------


def _pivot(T: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    pv = T[r][c]
    T[r] = [x / pv for x in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c] != 0:
            f = T[i][c]
            T[i] = [x - f * y for x, y in zip(T[i], T[r])]
    basis[r] = c


def _run_simplex(T: list[list[Fraction]], basis: list[int], cost: list[Fraction], ncols: int) -> None:
    """Maximise ``cost`` over the tableau with Bland's rule (columns < ncols eligible)."""
    while True:
        enter = None
        for j in range(ncols):
            if j in basis:
                continue
            red = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(len(T)))
            if red > 0:
                enter = j
                break
        if enter is None:
            return
        best = None
        for i in range(len(T)):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise ArithmeticError("unbounded linear program")
        _pivot(T, basis, best[1], enter)


def lp_maximize(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], c: Sequence[Fraction]) -> Fraction | None:
    """max c.z subject to A z = b, z >= 0, exactly; ``None`` if infeasible."""
    m, n = len(A), len(c)
    T = []
    for i, (row, bi) in enumerate(zip(A, b)):
        row = [Fraction(x) for x in row]
        bi = Fraction(bi)
        if bi < 0:
            row, bi = [-x for x in row], -bi
        T.append(row + [Fraction(int(k == i)) for k in range(m)] + [bi])
    basis = [n + i for i in range(m)]
    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    _run_simplex(T, basis, phase1, n + m)
    if any(basis[i] >= n and T[i][-1] != 0 for i in range(m)):
        return None
    for i in range(m - 1, -1, -1):
        if basis[i] >= n:
            j = next((j for j in range(n) if T[i][j] != 0), None)
            if j is None:
                del T[i]
                del basis[i]
            else:
                _pivot(T, basis, i, j)
    T = [row[:n] + [row[-1]] for row in T]
    cost = [Fraction(x) for x in c]
    _run_simplex(T, basis, cost, n)
    return sum((cost[basis[i]] * T[i][-1] for i in range(len(T))), Fraction(0))


def meet_properly(P: Sequence[Vector], Q: Sequence[Vector]) -> bool:
    """conv P and conv Q intersect exactly in the hull of their common vertices."""
    dim = len(P[0])
    for k in range(dim):
        if max(p[k] for p in P) < min(q[k] for q in Q) or max(q[k] for q in Q) < min(p[k] for p in P):
            return True
    common = set(P) & set(Q)
    nP, nQ = len(P), len(Q)
    A = [[Fraction(1)] * nP + [Fraction(0)] * nQ, [Fraction(0)] * nP + [Fraction(1)] * nQ]
    for k in range(dim):
        A.append([p[k] for p in P] + [-q[k] for q in Q])
    b = [Fraction(1), Fraction(1)] + [Fraction(0)] * dim
    c = [Fraction(int(p not in common)) for p in P] + [Fraction(int(q not in common)) for q in Q]
    best = lp_maximize(A, b, c)
    return best is None or best == 0


def is_valid_triangulation(T: RationalTriangulation) -> bool:
    """Every pair of maximal simplices meets in a common face (exact)."""
    S = [T.simplex_vertices(s) for s in T.simplices]
    return all(meet_properly(S[i], S[j]) for i, j in combinations(range(len(S)), 2))


# -- modifications -------------------------------------------------------------------------


def farey_star(T: RationalTriangulation, edge: Sequence[int]) -> RationalTriangulation:
    """Star ``T`` at the edge through the point whose homogeneous vector is the sum of its ends'.

    The new vertex is appended last.
    """
    i, j = edge
    if i == j or not any(i in s and j in s for s in T.simplices):
        raise InvalidStructureError(f"{tuple(edge)} is not an edge")
    h = tuple(a + b for a, b in zip(homogeneous(T.vertices[i]), homogeneous(T.vertices[j])))
    m = len(T.vertices)
    simplices = []
    for s in T.simplices:
        if i in s and j in s:
            simplices.append([k for k in s if k != i] + [m])
            simplices.append([k for k in s if k != j] + [m])
        else:
            simplices.append(list(s))
    out = RationalTriangulation(T.vertices + (from_homogeneous(h),), simplices, dim=T.dim)
    if is_regular_triangulation(T) and not is_regular_triangulation(out):
        raise ArithmeticError("starring lost regularity")
    return out


def _orient(a: Vector, b: Vector, c: Vector) -> Fraction:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def flip_neighbors(T: RationalTriangulation) -> list[RationalTriangulation]:
    """Triangulations reached by flipping one diagonal of a convex quadrilateral (plane only)."""
    if T.dim != 2:
        raise GuardError("edge flips are implemented for planar triangulations only")
    tris = [s for s in T.simplices if len(s) == 3]
    by_edge: dict[tuple[int, int], list[tuple[int, ...]]] = {}
    for t in tris:
        for e in combinations(t, 2):
            by_edge.setdefault(e, []).append(t)
    out = []
    V = T.vertices
    for (a, b), ts in sorted(by_edge.items()):
        if len(ts) != 2:
            continue
        c = next(k for k in ts[0] if k not in (a, b))
        d = next(k for k in ts[1] if k not in (a, b))
        if _orient(V[c], V[d], V[a]) * _orient(V[c], V[d], V[b]) >= 0:
            continue
        rest = [list(s) for s in T.simplices if s not in ts]
        out.append(RationalTriangulation(V, rest + [[a, c, d], [b, c, d]], dim=2))
    return out
