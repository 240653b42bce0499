import random
from fractions import Fraction
from itertools import product as grid

import pytest
from hypothesis import given, strategies as st

from kleene_mv import (
    GuardError,
    InvalidStructureError,
    RationalTriangulation,
    WeightedComplex,
    c6,
    den,
    dual_D,
    farey_star,
    free_kleene,
    homogeneous,
    is_regular_simplex,
    is_regular_triangulation,
    k_prime,
    k_squared,
    kleene_triangulation,
    locate,
    realize,
    sc_of,
    sigma_theta,
    simplex_system,
    standard_K,
    weighted_nerve,
)
from kleene_mv.geom import (
    affinely_independent,
    barycentric,
    flip_neighbors,
    from_homogeneous,
    int_det,
    is_valid_triangulation,
    system_holds,
    volume,
)
from kleene_mv.space import projection_table

import oracles

F = Fraction
H = F(1, 2)
S2 = kleene_triangulation(2)

rationals = st.builds(lambda q, p: F(p % (q + 1), q), st.integers(1, 12), st.integers(0, 12))
points2 = st.tuples(rationals, rationals)


def suite_nerves():
    return [weighted_nerve(dual_D(B)) for B in (standard_K(), c6(), k_squared(), k_prime(), free_kleene(1))]


class TestDenominators:
    def test_examples(self):
        assert den((H, F(3, 4))) == 4
        assert den((0, 1, 1)) == 1
        assert den((H, H, 0)) == 2
        assert homogeneous((H, F(3, 4))) == (2, 3, 4)
        assert homogeneous((F(0), F(0))) == (0, 0, 1)

    @given(st.lists(rationals, min_size=1, max_size=4))
    def test_homogeneous_round_trip(self, v):
        h = homogeneous(v)
        assert h[-1] == den(v)
        assert from_homogeneous(h) == tuple(v)


class TestRegularity:
    def test_examples(self):
        assert is_regular_simplex([(0, 0), (1, 0), (0, 1)])
        assert is_regular_simplex([(0, 0), (1, 0), (H, H)])
        assert not is_regular_simplex([(0, 0), (1, 0), (H, F(1, 3))])

    def test_triangulations(self):
        assert is_regular_triangulation(S2)
        bad = RationalTriangulation([(0, 0), (1, 0), (H, F(1, 3))], [[0, 1, 2]])
        assert not is_regular_triangulation(bad)
        assert is_regular_triangulation(RationalTriangulation([(H,)], []))

    @given(st.lists(st.lists(st.integers(-6, 6), min_size=4, max_size=4), min_size=4, max_size=4))
    def test_bareiss_matches_cofactor_expansion(self, M):
        assert int_det(M) == oracles.int_det(M)

    @pytest.mark.parametrize("seed", range(6))
    def test_agrees_with_basis_completion(self, seed):
        rng = random.Random(seed)
        checked = 0
        while checked < 50:
            d = rng.choice((1, 2, 3))
            # keep the completion search small: at most two missing rows, one in dimension 3
            k = rng.randint(d if d == 3 else 1, d + 1)
            pts = [tuple(F(rng.randint(0, q), q) for _ in range(d)) for q in (rng.randint(1, 5) for _ in range(k))]
            if not affinely_independent(pts):
                continue
            checked += 1
            bound = 3 if k == d else 2
            assert is_regular_simplex(pts) == oracles.brute_regular([homogeneous(p) for p in pts], bound)


class TestKleeneTriangulation:
    def test_square(self):
        assert S2.f_vector() == (9, 16, 8)
        assert is_regular_triangulation(S2)
        assert volume(S2) == 1
        assert is_valid_triangulation(S2)

    def test_cube(self):
        S3 = kleene_triangulation(3)
        assert is_regular_triangulation(S3)
        assert volume(S3) == 1
        # one maximal chain per ordering of the coordinates and choice of ends
        assert len(S3.simplices) == 48

    def test_simplices_are_maximal_chains(self):
        chains = oracles.brute_chains(oracles.cube(2), lambda x, y: all(oracles.kt_le(a, b) for a, b in zip(x, y)))
        assert {frozenset(S2.simplex_vertices(s)) for s in S2.simplices} == chains

    def test_interval(self):
        S1 = kleene_triangulation(1)
        assert S1.vertices == ((0,), (H,), (1,))
        assert S1.simplices == ((0, 1), (1, 2))

    def test_guard(self):
        with pytest.raises(GuardError):
            kleene_triangulation(4)


class TestRealize:
    def test_c6_triangle(self):
        T = realize(weighted_nerve(dual_D(c6())))
        assert T.dim == 3 and len(T.simplices) == 1
        assert sorted(den(v) for v in T.vertices) == [1, 2, 2]
        assert all(0 <= c <= 1 for v in T.vertices for c in v)

    def test_two_isolated_points(self):
        T = realize(WeightedComplex.build("ab", [], {"a": 2, "b": 2}))
        assert T.vertices == ((H, 0), (0, H))

    @pytest.mark.parametrize("i", range(5))
    def test_weights_become_denominators(self, i):
        WC = suite_nerves()[i]
        T = realize(WC)
        assert [den(v) for v in T.vertices] == [WC.weight[v] for v in WC.vertices]
        assert is_regular_triangulation(T)
        assert sc_of(T) == WC.indexed()


class TestSystem:
    def test_example_triangle(self):
        p, e, s = simplex_system([(H, H), (1, H), (1, 1)])
        assert s == ("+", "+")
        assert p == (1, 0)
        assert e == ("<=", "<=", "<=")

    def test_centre(self):
        p, e, s = simplex_system([(H, H, H)])
        assert e[:3] == ("=", "=", "=")
        assert e[3] == "<="

    def test_not_a_chain(self):
        with pytest.raises(InvalidStructureError):
            simplex_system([(0, 0), (1, 1)])

    @pytest.mark.parametrize("n", [1, 2])
    def test_solution_set_on_grid(self, n):
        S = kleene_triangulation(n)
        q = [F(k, 4) for k in range(5)]
        faces = [f for k in range(1, n + 2) for f in S.faces(k)]
        for f in faces:
            sys_ = simplex_system(S.simplex_vertices(f))
            pts = S.simplex_vertices(f)
            for x in grid(q, repeat=n):
                lam = barycentric(pts, x)
                inside = lam is not None and all(l >= 0 for l in lam)
                assert system_holds(sys_, x) == inside, (f, x)


class TestSigmaTheta:
    def test_empty(self):
        assert sigma_theta([], 2) == S2

    def test_diagonal(self):
        T = sigma_theta([(projection_table(2, 0), projection_table(2, 1))], 2)
        assert set(T.vertices) == {(0, 0), (H, H), (1, 1)}
        assert len(T.simplices) == 2 and all(len(s) == 2 for s in T.simplices)
        assert locate(T, (F(1, 3), F(1, 3))) is not None
        assert locate(T, (F(1, 3), F(2, 3))) is None


class TestLocate:
    def test_quarter_point(self):
        # (1/4,1/4) sits on the diagonal edge shared by two triangles
        face, lam = locate(S2, (F(1, 4), F(1, 4)))
        assert S2.simplex_vertices(face) == [(0, 0), (H, H)]
        assert lam == (H, H)
        face, lam = locate(S2, (F(1, 4), F(1, 8)))
        assert len(face) == 3 and sum(lam) == 1 and all(l > 0 for l in lam)

    def test_outside(self):
        assert locate(S2, (2, 2)) is None

    def test_vertices(self):
        for i, v in enumerate(S2.vertices):
            assert locate(S2, v) == ((i,), (1,))

    @given(points2)
    def test_coordinates_recombine(self, x):
        face, lam = locate(S2, x)
        assert sum(lam) == 1 and all(l > 0 for l in lam)
        pts = S2.simplex_vertices(face)
        assert tuple(sum(l * p[k] for l, p in zip(lam, pts)) for k in range(2)) == x


class TestSubdivision:
    def test_interval_examples(self):
        S1 = kleene_triangulation(1)
        T = farey_star(S1, (0, 1))
        assert T.vertices[-1] == (F(1, 3),)
        assert is_regular_triangulation(T)
        seg = RationalTriangulation([(0,), (1,)], [[0, 1]])
        assert farey_star(seg, (0, 1)).vertices[-1] == (H,)

    def test_not_an_edge(self):
        with pytest.raises(InvalidStructureError):
            farey_star(kleene_triangulation(1), (0, 2))

    @pytest.mark.parametrize("edge", S2.faces(2))
    def test_square_edges(self, edge):
        T = farey_star(S2, edge)
        assert is_regular_triangulation(T)
        assert volume(T) == 1
        assert is_valid_triangulation(T)
        assert homogeneous(T.vertices[-1]) == tuple(
            a + b for a, b in zip(homogeneous(S2.vertices[edge[0]]), homogeneous(S2.vertices[edge[1]]))
        )

    def test_support_by_sampling(self):
        T = farey_star(S2, S2.faces(2)[0])
        rng = random.Random(3)
        for _ in range(40):
            x = (F(rng.randint(-2, 14), 12), F(rng.randint(-2, 14), 12))
            assert (locate(T, x) is None) == (locate(S2, x) is None)


class TestValidity:
    def test_overlap_detected(self):
        T = RationalTriangulation([(0, 0), (1, 0), (0, 1), (1, 1)], [[0, 1, 2], [0, 1, 3]])
        assert not is_valid_triangulation(T)

    def test_cube_is_valid(self):
        assert is_valid_triangulation(kleene_triangulation(3))

    def test_flips_stay_valid(self):
        for T in flip_neighbors(S2):
            assert volume(T) == 1
            assert is_valid_triangulation(T)
