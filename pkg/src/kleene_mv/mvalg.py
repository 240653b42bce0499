"""MV arithmetic on [0,1], MV terms, piecewise linear functions and Schauder bases."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence, Union

from .base import InvalidStructureError, MalformedInputError
from .complex import WeightedComplex
from .geom import (
    RationalTriangulation,
    den,
    farey_star,
    is_regular_triangulation,
    kleene_triangulation,
    locate,
    sigma_theta,
    vec,
)
from .space import TermPair, cube_points, is_morphism_table

# -- scalar operations ---------------------------------------------------------------


def _scalar(a) -> Fraction:
    a = Fraction(a)
    if not 0 <= a <= 1:
        raise ValueError(f"{a} is outside [0,1]")
    return a


def oplus(a, b) -> Fraction:
    return min(Fraction(a) + Fraction(b), Fraction(1))


def neg(a) -> Fraction:
    return 1 - Fraction(a)


def odot(a, b) -> Fraction:
    return neg(oplus(neg(a), neg(b)))


def join(a, b) -> Fraction:
    return oplus(neg(oplus(neg(a), b)), b)


def meet(a, b) -> Fraction:
    return neg(join(neg(a), neg(b)))


OPS = {"oplus": (2, oplus), "odot": (2, odot), "meet": (2, meet), "join": (2, join), "neg": (1, neg)}


# -- terms -----------------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Op:
    name: str
    args: tuple


MVTerm = Union[Var, Const, Op]


def x(i: int) -> Var:
    return Var(i)


def term_arity(t: MVTerm) -> int:
    if isinstance(t, Var):
        return t.index
    if isinstance(t, Const):
        return 0
    return max((term_arity(a) for a in t.args), default=0)


def eval_term(t: MVTerm, point: Sequence) -> Fraction:
    """Evaluate in the standard MV-algebra [0,1] at ``point`` (x1 is point[0])."""
    if isinstance(t, Var):
        if not 1 <= t.index <= len(point):
            raise MalformedInputError(f"x{t.index} needs a point with at least {t.index} coordinates")
        return Fraction(point[t.index - 1])
    if isinstance(t, Const):
        return t.value
    _, fn = OPS[t.name]
    return fn(*(eval_term(a, point) for a in t.args))


def _tokens(s: str) -> list[str]:
    return s.replace("(", " ( ").replace(")", " ) ").split()


def parse_term(s: str) -> MVTerm:
    """Read a prefix s-expression such as ``(oplus x1 (neg x2))``."""
    toks = _tokens(s)
    pos = 0

    def atom(tok: str) -> MVTerm:
        if tok.startswith("x") and tok[1:].isdigit() and int(tok[1:]) >= 1:
            return Var(int(tok[1:]))
        try:
            return Const(_scalar(Fraction(tok)))
        except (ValueError, ZeroDivisionError):
            raise MalformedInputError(f"bad term token {tok!r}") from None

    def read() -> MVTerm:
        nonlocal pos
        if pos >= len(toks):
            raise MalformedInputError("unexpected end of term")
        tok = toks[pos]
        pos += 1
        if tok == ")":
            raise MalformedInputError("unexpected ')'")
        if tok != "(":
            return atom(tok)
        if pos >= len(toks) or toks[pos] not in OPS:
            raise MalformedInputError(f"unknown operation at token {pos}")
        name = toks[pos]
        pos += 1
        args = []
        while pos < len(toks) and toks[pos] != ")":
            args.append(read())
        if pos >= len(toks):
            raise MalformedInputError("missing ')'")
        pos += 1
        if len(args) != OPS[name][0]:
            raise MalformedInputError(f"{name} takes {OPS[name][0]} arguments, got {len(args)}")
        return Op(name, tuple(args))

    t = read()
    if pos != len(toks):
        raise MalformedInputError("trailing tokens after term")
    return t


def format_term(t: MVTerm) -> str:
    if isinstance(t, Var):
        return f"x{t.index}"
    if isinstance(t, Const):
        return str(t.value)
    return "(" + " ".join([t.name] + [format_term(a) for a in t.args]) + ")"


def random_kleene_term(n: int, depth: int, rng: random.Random) -> MVTerm:
    """Random term over meet, join and neg in x1..xn, with occasional constants 0 and 1."""
    if depth <= 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.08:
            return Const(Fraction(rng.choice((0, 1))))
        return Var(rng.randint(1, n))
    name = rng.choice(("meet", "join", "neg"))
    if name == "neg":
        return Op("neg", (random_kleene_term(n, depth - 1, rng),))
    return Op(name, (random_kleene_term(n, depth - 1, rng), random_kleene_term(n, depth - 1, rng)))


def kleene_table(t: MVTerm, n: int) -> tuple:
    """Values of ``t`` on {0,1/2,1}^n in canonical point order."""
    return tuple(eval_term(t, p) for p in cube_points(n))


# -- piecewise linear functions -------------------------------------------------------


@dataclass(frozen=True)
class PLFunction:
    """The function linear on each simplex with the given vertex values."""

    triangulation: RationalTriangulation
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.triangulation.vertices):
            raise MalformedInputError("one value per vertex is required")
        object.__setattr__(self, "values", tuple(_scalar(v) for v in self.values))

    def __call__(self, x: Sequence) -> Fraction:
        return eval_pl(self, x)


def eval_pl(f: PLFunction, x: Sequence) -> Fraction:
    loc = locate(f.triangulation, x)
    if loc is None:
        raise ValueError(f"{tuple(map(str, x))} lies outside the support")
    face, lam = loc
    return sum((l * f.values[i] for i, l in zip(face, lam)), Fraction(0))


def values_at_located(fs: Sequence[PLFunction], loc: tuple) -> list[Fraction]:
    face, lam = loc
    return [sum((l * f.values[i] for i, l in zip(face, lam)), Fraction(0)) for f in fs]


def kleene_to_pl(table: Sequence, n: int) -> PLFunction:
    """The embedding u_n: interpolate a morphism table over the Kleene triangulation S_n."""
    S = kleene_triangulation(n)
    table = tuple(Fraction(v) for v in table)
    if len(table) != len(S.vertices) or not is_morphism_table(table, n):
        raise InvalidStructureError("not a morphism table on {0,1/2,1}^n")
    return PLFunction(S, table)


# -- Schauder bases --------------------------------------------------------------------


@dataclass(frozen=True)
class SchauderBasis:
    triangulation: RationalTriangulation
    hats: tuple
    mult: tuple

    def partition_defect(self, x: Sequence) -> Fraction:
        """1 minus the weighted hat sum at ``x``; zero for a partition of unity."""
        loc = locate(self.triangulation, x)
        if loc is None:
            raise ValueError("point outside the support")
        vals = values_at_located(self.hats, loc)
        return 1 - sum(m * v for m, v in zip(self.mult, vals))

    def partition_holds_at_vertices(self) -> bool:
        return all(
            sum(m * h.values[k] for m, h in zip(self.mult, self.hats)) == 1
            for k in range(len(self.triangulation.vertices))
        )


def schauder_basis(T: RationalTriangulation) -> SchauderBasis:
    if not is_regular_triangulation(T):
        raise InvalidStructureError("Schauder hats need a regular triangulation")
    n = len(T.vertices)
    hats = []
    for k, v in enumerate(T.vertices):
        vals = [Fraction(0)] * n
        vals[k] = Fraction(1, den(v))
        hats.append(PLFunction(T, tuple(vals)))
    B = SchauderBasis(T, tuple(hats), tuple(den(v) for v in T.vertices))
    if not B.partition_holds_at_vertices():
        raise ArithmeticError("hats do not form a partition of unity")
    return B


def _barycenters(T: RationalTriangulation) -> list[tuple]:
    out = []
    for s in T.simplices:
        pts = T.simplex_vertices(s)
        k = len(pts)
        out.append(tuple(sum(p[c] for p in pts) / k for c in range(T.dim)))
    return out


def meet_positive(basis: SchauderBasis, hats: Iterable[int]) -> bool:
    """Whether the pointwise minimum of the chosen hats is positive somewhere.

    Hats are linear on the triangulation, so checking the barycenters of the
    maximal simplices decides this exactly.
    """
    hats = list(hats)
    T = basis.triangulation
    for b in _barycenters(T):
        vals = values_at_located([basis.hats[i] for i in hats], locate(T, b))
        if all(v > 0 for v in vals):
            return True
    return False


def bowtie(basis: SchauderBasis) -> WeightedComplex:
    """Complex of hat sets with positive meet, weighted by multipliers.

    For each maximal simplex, the hats positive at its barycenter form a facet.
    """
    T = basis.triangulation
    facets = []
    for b in _barycenters(T):
        vals = values_at_located(basis.hats, locate(T, b))
        facets.append([i for i, v in enumerate(vals) if v > 0])
    n = len(basis.hats)
    return WeightedComplex.build(range(n), facets, {i: basis.mult[i] for i in range(n)})


def _is_edge(T: RationalTriangulation, r: int, s: int) -> bool:
    return r != s and any(r in t and s in t for t in T.simplices)


def stellar_subdivide(basis: SchauderBasis, r: int, s: int) -> SchauderBasis:
    """Schauder basis over the triangulation starred at the edge {v_r, v_s}.

    The new hat (the meet of hats r and s) is appended last.
    """
    T = basis.triangulation
    if not _is_edge(T, r, s):
        raise InvalidStructureError(f"hats {r} and {s} have zero meet; not starrable")
    return schauder_basis(farey_star(T, (r, s)))


@dataclass
class CoherenceReport:
    points: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def stellar_coherence(old: SchauderBasis, new: SchauderBasis, r: int, s: int, points: Iterable) -> CoherenceReport:
    """Compare the subdivided hats with the algebraic stellar formulas at ``points``."""
    report = CoherenceReport()
    t = len(old.hats)
    for p in points:
        report.points += 1
        a = values_at_located(old.hats, locate(old.triangulation, p))
        b = values_at_located(new.hats, locate(new.triangulation, p))
        expected = list(a)
        expected[r] = odot(a[r], neg(a[s]))
        expected[s] = odot(a[s], neg(a[r]))
        expected.append(meet(a[r], a[s]))
        if len(b) != t + 1 or b != expected:
            report.mismatches.append(tuple(p))
    return report


def _lifted(basis: SchauderBasis, T2: RationalTriangulation) -> list[PLFunction]:
    """Old hats re-expressed as functions linear on a refinement."""
    locs = [locate(basis.triangulation, v) for v in T2.vertices]
    cols = [values_at_located(basis.hats, loc) for loc in locs]
    return [PLFunction(T2, tuple(c[k] for c in cols)) for k in range(len(basis.hats))]


def one_regular_check(basis: SchauderBasis, r: int, s: int) -> bool:
    """1-regularity at the starrable pair {r, s}, decided on the starred triangulation."""
    T = basis.triangulation
    if not _is_edge(T, r, s):
        raise InvalidStructureError(f"hats {r} and {s} have zero meet; not starrable")
    new = stellar_subdivide(basis, r, s)
    T2 = new.triangulation
    old = _lifted(basis, T2)
    # the barycenter of a simplex has equal weights on its vertices
    centres = [(t, (Fraction(1, len(t)),) * len(t)) for t in T2.simplices]

    def positive(fs: list[PLFunction]) -> bool:
        return any(all(v > 0 for v in values_at_located(fs, loc)) for loc in centres)

    primed = list(new.hats[: len(basis.hats)])
    for simplex in T.simplices:
        if r not in simplex or s not in simplex:
            continue
        # every index set I with positive (b_r ^ b_s) ^ b_I lies inside such a simplex
        I = list(simplex)
        base = [old[r], old[s]]
        if not positive(base + [old[i] for i in I]):
            return False
        for k in range(1, len(I) + 1):
            for J in combinations(I, k):
                if r in J and s in J:
                    continue
                if not positive(base + [primed[j] for j in J]):
                    return False
    return True


def starrable_pairs(basis: SchauderBasis) -> list[tuple[int, int]]:
    return [tuple(e) for e in basis.triangulation.faces(2)]


def is_regular_basis(basis: SchauderBasis, depth: int = 1) -> bool:
    """1-regular at every starrable pair, and again after ``depth`` rounds of subdivision."""
    for r, s in starrable_pairs(basis):
        if not one_regular_check(basis, r, s):
            return False
        if depth > 0 and not is_regular_basis(stellar_subdivide(basis, r, s), depth - 1):
            return False
    return True


# -- sampling and solution sets ----------------------------------------------------------


def random_point(dim: int, rng: random.Random, max_den: int = 16) -> tuple:
    return tuple(Fraction(rng.randint(0, q), q) for q in (rng.randint(1, max_den) for _ in range(dim)))


def random_point_in_face(T: RationalTriangulation, rng: random.Random, max_weight: int = 9) -> tuple:
    """A point in the relative interior of a random face of ``T``."""
    s = rng.choice(T.simplices)
    k = rng.randint(1, len(s))
    face = rng.sample(list(s), k)
    w = [rng.randint(1, max_weight) for _ in face]
    tot = sum(w)
    pts = T.simplex_vertices(face)
    return tuple(sum(Fraction(wi, tot) * p[c] for wi, p in zip(w, pts)) for c in range(T.dim))


def sample_points(T: RationalTriangulation, count: int, rng: random.Random, *, extra: Sequence[RationalTriangulation] = ()) -> list[tuple]:
    """Half uniform rational points of the cube, half points inside faces of the given triangulations."""
    sources = [S for S in (T, *extra) if S.simplices]
    out = []
    for i in range(count):
        if i % 2 == 0:
            out.append(random_point(T.dim, rng))
        else:
            out.append(random_point_in_face(sources[(i // 2) % len(sources)], rng))
    return out


@dataclass
class SolReport:
    samples: int = 0
    inside: int = 0
    discrepancies: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.discrepancies


def sol_M_sampled(theta: Sequence[TermPair], n: int, points: Iterable[Sequence]) -> SolReport:
    """Check, pointwise, that u_n f = u_n g for all pairs exactly on the support of Sigma_Theta."""
    S = kleene_triangulation(n)
    funcs = [(kleene_to_pl(f, n), kleene_to_pl(g, n)) for f, g in theta]
    sub = sigma_theta(theta, n)
    report = SolReport()
    for p in points:
        p = vec(p)
        report.samples += 1
        loc = locate(S, p)
        if loc is None:
            raise ValueError(f"{p} lies outside the cube")
        agree = all(
            a == b for a, b in (values_at_located([f, g], loc) for f, g in funcs)
        )
        inside = locate(sub, p) is not None
        report.inside += inside
        if agree != inside:
            report.discrepancies.append((p, agree, inside))
    return report

