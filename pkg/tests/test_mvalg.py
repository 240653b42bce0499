import random
from fractions import Fraction
from itertools import product as grid

import pytest
from hypothesis import given, settings, strategies as st

from kleene_mv import (
    InvalidStructureError,
    MalformedInputError,
    RationalTriangulation,
    bowtie,
    eval_pl,
    eval_term,
    free_kleene,
    kleene_to_pl,
    kleene_triangulation,
    one_regular_check,
    parse_term,
    sc_of,
    schauder_basis,
    sol_M_sampled,
    stellar_subdivide,
)
from kleene_mv.geom import den, locate
from kleene_mv.mvalg import (
    PLFunction,
    format_term,
    is_regular_basis,
    join,
    kleene_table,
    meet,
    meet_positive,
    neg,
    odot,
    oplus,
    random_kleene_term,
    sample_points,
    stellar_coherence,
)
from kleene_mv.space import cube_points, projection_table

import oracles

F = Fraction
H = F(1, 2)
S1 = kleene_triangulation(1)
S2 = kleene_triangulation(2)
QUARTERS = [F(k, 4) for k in range(5)]

unit = st.builds(lambda q, p: F(p % (q + 1), q), st.integers(1, 20), st.integers(0, 20))


class TestScalars:
    def test_definitions(self):
        assert oplus(F(3, 4), H) == 1
        assert neg(F(1, 3)) == F(2, 3)
        assert odot(F(3, 4), H) == F(1, 4)

    def test_mv_law_on_quarter_grid(self):
        for a, b in grid(QUARTERS, repeat=2):
            assert oplus(neg(oplus(neg(a), b)), b) == oplus(neg(oplus(neg(b), a)), a)

    @given(unit)
    def test_idempotent_iff_boolean(self, a):
        assert (oplus(a, a) == a) == (a in (0, 1))

    @given(unit, unit)
    def test_lattice_operations_are_max_and_min(self, a, b):
        assert join(a, b) == max(a, b)
        assert meet(a, b) == min(a, b)
        assert odot(a, b) == max(a + b - 1, 0)


class TestTerms:
    def test_parse_and_evaluate(self):
        t = parse_term("(oplus x1 (neg x2))")
        assert eval_term(t, (F(1, 4), F(1, 2))) == F(3, 4)
        assert eval_term(parse_term("(meet 1/3 x1)"), (1,)) == F(1, 3)

    @pytest.mark.parametrize("bad", ["(oplus x1)", "(foo x1 x2)", "x0", "(neg x1", "x1 x2", "2"])
    def test_malformed(self, bad):
        with pytest.raises(MalformedInputError):
            parse_term(bad)

    def test_arity(self):
        with pytest.raises(MalformedInputError):
            eval_term(parse_term("x3"), (0, 0))

    @given(st.integers(0, 10**6))
    def test_format_round_trip(self, seed):
        t = random_kleene_term(3, 4, random.Random(seed))
        assert parse_term(format_term(t)) == t


class TestEmbedding:
    def test_projections(self):
        f = kleene_to_pl(projection_table(2, 0), 2)
        assert f((F(1, 3), F(5, 7))) == F(1, 3)

    def test_rejects_non_morphisms(self):
        bad = (H, H, H)  # a marked point may not go to 1/2
        with pytest.raises(InvalidStructureError):
            kleene_to_pl(bad, 1)

    def test_injective(self):
        tables = free_kleene(2).elements
        assert len({kleene_to_pl(t, 2).values for t in tables}) == len(tables)

    @given(st.integers(0, 10**6), st.tuples(unit, unit))
    def test_matches_independent_interpolation(self, seed, x):
        t = random_kleene_term(2, 4, random.Random(seed))
        table = kleene_table(t, 2)
        values = dict(zip(cube_points(2), table))
        assert kleene_to_pl(table, 2)(x) == oracles.kleene_interpolate(values, x)
        assert eval_term(t, x) == oracles.kleene_interpolate(values, x)

    @settings(max_examples=20)
    @given(st.integers(0, 10**6), st.tuples(unit, unit, unit))
    def test_three_variables(self, seed, x):
        t = random_kleene_term(3, 3, random.Random(seed))
        assert kleene_to_pl(kleene_table(t, 3), 3)(x) == eval_term(t, x)


class TestSchauder:
    @pytest.mark.parametrize("T", [S1, S2], ids=["S1", "S2"])
    def test_hats_and_multipliers(self, T):
        B = schauder_basis(T)
        for k, h in enumerate(B.hats):
            assert h.values[k] == F(1, den(T.vertices[k]))
            assert all(v == 0 for i, v in enumerate(h.values) if i != k)
        assert B.mult == tuple(den(v) for v in T.vertices)
        assert B.partition_holds_at_vertices()

    @given(st.tuples(unit, unit))
    def test_partition_everywhere(self, x):
        assert schauder_basis(S2).partition_defect(x) == 0

    def test_needs_regular(self):
        with pytest.raises(InvalidStructureError):
            schauder_basis(RationalTriangulation([(0, 0), (1, 0), (H, F(1, 3))], [[0, 1, 2]]))

    def test_values_must_be_in_range(self):
        with pytest.raises(ValueError):
            PLFunction(S1, (0, 2, 0))

    def test_bowtie_is_sc(self):
        assert bowtie(schauder_basis(S2)) == sc_of(S2)

    def test_bowtie_single_point(self):
        B = schauder_basis(RationalTriangulation([(H,)], []))
        assert bowtie(B).weight_multiset() == [2]

    def test_meets_vanish_off_simplices(self):
        B = schauder_basis(S2)
        for f in S2.simplices:
            assert meet_positive(B, f)
        centre = S2.index((H, H))
        for i in range(9):
            for j in range(i + 1, 9):
                if not any(i in s and j in s for s in S2.simplices):
                    assert not meet_positive(B, (i, j))
                    pts = sample_points(S2, 20, random.Random(i * 9 + j))
                    assert all(min(B.hats[i](p), B.hats[j](p)) == 0 for p in pts)
        assert meet_positive(B, (centre,))


class TestStellar:
    def test_interval_example(self):
        B = schauder_basis(S1)
        new = stellar_subdivide(B, 0, 1)
        v = new.triangulation.vertices[-1]
        assert v == (F(1, 3),)
        assert meet(B.hats[0](v), B.hats[1](v)) == F(1, 3) == new.hats[-1](v)
        assert new.mult[-1] == 3
        assert new.partition_holds_at_vertices()

    def test_disjoint_segments(self):
        T = RationalTriangulation([(0,), (F(1, 3),), (F(2, 3),), (1,)], [[0, 1], [2, 3]])
        with pytest.raises(InvalidStructureError):
            stellar_subdivide(schauder_basis(T), 1, 2)

    @pytest.mark.parametrize("edge", S2.faces(2))
    def test_coherence_on_square(self, edge):
        B = schauder_basis(S2)
        new = stellar_subdivide(B, *edge)
        pts = sample_points(S2, 30, random.Random(sum(edge)), extra=[new.triangulation])
        assert stellar_coherence(B, new, *edge, pts).ok

    def test_one_regular(self):
        B = schauder_basis(S1)
        assert all(one_regular_check(B, r, s) for r, s in S1.faces(2))
        assert is_regular_basis(B, depth=1)

    def test_one_regular_square(self):
        B = schauder_basis(S2)
        assert is_regular_basis(B, depth=0)
        sub = stellar_subdivide(B, *S2.faces(2)[0])
        assert is_regular_basis(sub, depth=0)

    def test_singleton_is_vacuously_regular(self):
        assert is_regular_basis(schauder_basis(RationalTriangulation([(H,)], [])))


class TestSolutionSets:
    def test_empty_theta(self):
        pts = sample_points(S2, 20, random.Random(0))
        rep = sol_M_sampled([], 2, pts)
        assert rep.ok and rep.inside == 20

    def test_diagonal(self):
        theta = [(projection_table(2, 0), projection_table(2, 1))]
        rep = sol_M_sampled(theta, 2, [(F(1, 3), F(1, 3)), (F(1, 3), F(2, 3))])
        assert rep.ok and rep.inside == 1

    def test_pl_evaluation_outside(self):
        with pytest.raises(ValueError):
            eval_pl(kleene_to_pl(projection_table(1, 0), 1), (2,))

    def test_locate_is_consistent_with_hats(self):
        B = schauder_basis(S2)
        x = (F(1, 5), F(3, 7))
        face, lam = locate(S2, x)
        for k, l in zip(face, lam):
            assert B.hats[k](x) == l / B.mult[k]
