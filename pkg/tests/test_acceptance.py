"""The thirteen acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line with its runtime.
"""
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from kleene_mv import (
    AbstractComplex,
    WeightedComplex,
    boolean_2,
    c6,
    complex_isomorphic,
    den,
    dual_D,
    dual_E,
    eval_term,
    free_kleene,
    free_over,
    is_isomorphic_alg,
    is_isomorphic_space,
    is_kleene_complex,
    is_regular_triangulation,
    k_prime,
    k_squared,
    kleene_to_pl,
    kleene_triangulation,
    ktilde,
    locate,
    recognize,
    schauder_basis,
    separating_family,
    sigma_theta,
    sol_K,
    sol_M_sampled,
    standard_K,
    stellar_subdivide,
    subspace_from_subset,
)
from kleene_mv.complex import check_kleene_complex
from kleene_mv.geom import volume
from kleene_mv.mvalg import (
    kleene_table,
    random_kleene_term,
    random_point,
    random_point_in_face,
    sample_points,
    stellar_coherence,
)
from kleene_mv.pipeline import demo_section6, section6_subset
from kleene_mv.space import cube_points

import oracles

SEED = 20240601
FREE_KLEENE_2_SIZE = 84  # frozen from oracles.brute_free_kleene_size(2)


@pytest.fixture
def criterion(request):
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    @contextmanager
    def run(number, title, limit=None):
        start = time.perf_counter()
        ok = False
        try:
            yield
            elapsed = time.perf_counter() - start
            if limit is not None:
                assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title} ({elapsed:.2f}s)"
            if reporter is not None:
                reporter.write_line("")
                reporter.write_line(line)
            else:
                print(line)

    return run


def suite():
    return [standard_K(), boolean_2(), c6(), k_squared(), k_prime(), free_kleene(1)]


def b_w():
    return dual_E(subspace_from_subset(section6_subset(), 3))


def test_criterion_01_duality_round_trip(criterion):
    with criterion(1, "E(D(B)) isomorphic to B for the suite", limit=5):
        for B in suite():
            assert is_isomorphic_alg(dual_E(dual_D(B)), B) is not None


def test_criterion_02_dual_space_facts(criterion):
    with criterion(2, "dual spaces of C6, K^2 and K'"):
        X = dual_D(c6())
        chain = sorted(X.points, key=lambda p: sum(X.leq(q, p) for q in X.points))
        assert len(X) == 3 and all(X.leq(a, b) for a, b in zip(chain, chain[1:]))
        assert X.M == {chain[-1]}
        assert set(X.R) == {(a, b) for a in X.points for b in X.points}

        Y, Z = dual_D(k_squared()), dual_D(k_prime())
        for S in (Y, Z):
            a, b = S.points
            assert len(S) == 2 and not S.M and not S.leq(a, b) and not S.leq(b, a)
        ry = {(Y.index(a), Y.index(b)) for a, b in Y.R}
        rz = {(Z.index(a), Z.index(b)) for a, b in Z.R}
        assert rz - ry == {(0, 1), (1, 0)} and ry < rz
        assert is_isomorphic_space(Y, Z) is None


def test_criterion_03_free_kleene_sizes(criterion):
    with criterion(3, "free Kleene algebras on one and two generators"):
        assert len(dual_E(ktilde())) == 6
        X = ktilde()
        assert len(oracles.brute_morphisms(list(X.points), X.leq_pairs(), list(X.R), list(X.M))) == 6
        assert len(free_kleene(2)) == FREE_KLEENE_2_SIZE


def test_criterion_04_theorem_one_outputs(criterion):
    with criterion(4, "free_over of C6, K^2 and K'"):
        P = free_over(c6())
        assert P.complex.complex.f_vector() == (3, 3, 1)
        assert P.complex.weight_multiset() == [1, 2, 2]
        assert sorted(den(v) for v in P.realization.vertices) == [1, 2, 2]
        A, B = free_over(k_squared()).complex, free_over(k_prime()).complex
        assert A.indexed() == B.indexed()
        assert A.weight_multiset() == [2, 2] and A.complex.f_vector() == (2,)


def test_criterion_05_kleene_triangulation(criterion):
    with criterion(5, "S_2 and S_3 regular with unit volume", limit=10):
        S2 = kleene_triangulation(2)
        assert S2.f_vector() == (9, 16, 8)
        assert is_regular_triangulation(S2) and volume(S2) == 1
        S3 = kleene_triangulation(3)
        assert is_regular_triangulation(S3) and volume(S3) == 1


def test_criterion_06_terms_are_interpolated(criterion):
    with criterion(6, "20 Kleene terms agree with their PL interpolation at 50 points"):
        rng = random.Random(SEED)
        mismatches = 0
        for _ in range(20):
            t = random_kleene_term(2, 5, rng)
            f = kleene_to_pl(kleene_table(t, 2), 2)
            for _ in range(50):
                x = random_point(2, rng)
                mismatches += eval_term(t, x) != f(x)
        assert mismatches == 0


def test_criterion_07_solution_sets(criterion):
    with criterion(7, "Sol_M of u_n Theta matches |Sigma_Theta| at 200 points, 10 Thetas"):
        rng = random.Random(SEED + 7)
        F2 = free_kleene(2).elements
        pts2 = cube_points(2)
        mismatches = 0
        for _ in range(10):
            theta = [(rng.choice(F2), rng.choice(F2)) for _ in range(rng.randint(1, 3))]
            sub = sigma_theta(theta, 2)
            S2 = kleene_triangulation(2)
            points = sample_points(S2, 200, rng, extra=[sub])
            report = sol_M_sampled(theta, 2, points)
            assert report.samples == 200
            mismatches += len(report.discrepancies)
            # the same check through the independent interpolation oracle
            tables = [(dict(zip(pts2, f)), dict(zip(pts2, g))) for f, g in theta]
            for p in points:
                agree = all(oracles.kleene_interpolate(f, p) == oracles.kleene_interpolate(g, p) for f, g in tables)
                mismatches += agree != (locate(sub, p) is not None)
        assert mismatches == 0


def test_criterion_08_separating_pairs(criterion):
    with criterion(8, "sol_K of the separating family is W for 50 subsets"):
        rng = random.Random(SEED + 8)
        pts = list(cube_points(2))
        for _ in range(50):
            W = [p for p in pts if rng.random() < 0.5] or [rng.choice(pts)]
            assert set(sol_K(separating_family(W, 2), 2)) == set(W)


def _bases():
    S1, S2 = kleene_triangulation(1), kleene_triangulation(2)
    out = [schauder_basis(S1), schauder_basis(S2), schauder_basis(kleene_triangulation(3))]
    out += [free_over(B).basis for B in suite()]
    out += [stellar_subdivide(out[1], *e) for e in S2.faces(2)[:4]]
    return out


def test_criterion_09_basis_laws(criterion):
    with criterion(9, "partition of unity and mult = den for every Schauder basis"):
        rng = random.Random(SEED + 9)
        for B in _bases():
            T = B.triangulation
            assert B.partition_holds_at_vertices()
            assert list(B.mult) == [den(v) for v in T.vertices]
            for _ in range(20):
                assert B.partition_defect(random_point_in_face(T, rng)) == 0


def test_criterion_10_stellar_coherence(criterion):
    with criterion(10, "(*) formulas match the subdivided hats on S_1 and S_2"):
        rng = random.Random(SEED + 10)
        for n in (1, 2):
            S = kleene_triangulation(n)
            B = schauder_basis(S)
            for r, s in S.faces(2):
                new = stellar_subdivide(B, r, s)
                points = [random_point(n, rng) for _ in range(50)]
                assert stellar_coherence(B, new, r, s, points).ok
                assert is_regular_triangulation(new.triangulation)
                assert volume(new.triangulation) == volume(S) == 1


def test_criterion_11_theorem_two_loop(criterion):
    with criterion(11, "recognize reconstructs every free complex, including B_W", limit=30):
        for B in suite() + [b_w()]:
            WC = free_over(B).complex
            assert is_kleene_complex(WC) is not None
            rec = recognize(WC)
            assert rec.ok
            assert complex_isomorphic(rec.presentation.complex, WC) is not None
            assert complex_isomorphic(free_over(rec.algebra).complex, WC) is not None


def test_criterion_12_negative_recognition(criterion):
    with criterion(12, "failing conditions are named"):
        heavy = WeightedComplex.build("a", ["a"], {"a": 3})
        hollow = WeightedComplex(AbstractComplex("abc", ["ab", "bc", "ac"]), {v: 2 for v in "abc"})
        pair = WeightedComplex.build("ab", ["ab"], {"a": 1, "b": 1})
        cycle = WeightedComplex(AbstractComplex(range(5), [(i, (i + 1) % 5) for i in range(5)]), {i: 2 for i in range(5)})
        for WC, cond in ((heavy, "a"), (hollow, "b"), (pair, "c"), (cycle, "c")):
            assert check_kleene_complex(WC).condition == cond
            assert recognize(WC).check.condition == cond


def test_criterion_13_section6_triangulation(criterion):
    with criterion(13, "flip search finds a triangulation for N(W)", limit=60):
        r = demo_section6()
        assert not r.budget_exhausted
        assert r.ok
        T = r.search.found
        assert set(T.vertices) == set(cube_points(2))
        assert is_regular_triangulation(T)
        W = subspace_from_subset(section6_subset(), 3)
        from kleene_mv import sc_of, weighted_nerve

        assert complex_isomorphic(sc_of(T), weighted_nerve(W)) is not None
        assert Fraction(volume(T)) == 1
