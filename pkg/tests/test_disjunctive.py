import random
from fractions import Fraction as F

import pytest

from rltlab import lp
from rltlab.disjunctive import (Disjunction, SubsetDisjunction, build_balas_ef, cardinality_disjunction,
                                fix_rows, hull_blocks, hull_member, landp_member, variable_disjunction)
from rltlab.figures import FIG4_PATTERNS, FIG4_X, load_fixture
from rltlab.lifted import verify_certificate
from rltlab.lp import Row
from rltlab.polytope import BoxPolytope, birkhoff, cube, random_rational_point, vertices

XSTAR = (F(1, 3), F(1, 3), F(1, 3), F(2, 3))


def test_single_disjunct_is_identity():
    P = load_fixture("fig2")
    D = Disjunction(2, (tuple(),))
    rng = random.Random(3)
    for _ in range(30):
        x = random_rational_point(rng, 2, 4)
        assert hull_member(P, D, x).member == P.contains(x)


def test_variable_disjunction_over_the_square():
    Q = cube(2)
    D = variable_disjunction(Q, 0)
    assert len(D) == 2
    assert hull_member(Q, D, (F(1, 2), F(1, 3))).member


def test_fig4_hull():
    P = load_fixture("fig4")
    D = SubsetDisjunction((0, 1, 2), FIG4_PATTERNS)
    h = hull_member(P, D, FIG4_X)
    assert not h.member
    L = build_balas_ef(P, D.expand(4))
    assert verify_certificate(L, h)
    assert sum(a * v for a, v in zip(h.cut.coef, FIG4_X)) > h.cut.rhs
    assert hull_member(P, D, (F(1, 4),) * 4).member


def test_vertex_satisfying_a_disjunct_concentrates_lambda():
    P = load_fixture("fig4")
    D = SubsetDisjunction((0, 1, 2), FIG4_PATTERNS)
    m = hull_member(P, D, (0, 1, 0, 0))
    assert m.member
    blocks = hull_blocks(P, D, m)
    assert [lam for lam, _ in blocks] == [0, 1, 0, 0]


def test_fig3_hulls():
    P = load_fixture("fig3")
    assert not hull_member(P, cardinality_disjunction(P, (0, 1, 2)), XSTAR).member
    for j in range(4):
        assert hull_member(P, variable_disjunction(P, j), XSTAR).member
    assert landp_member(P, None, XSTAR).member


def test_fig2_landp():
    P = load_fixture("fig2")
    res = landp_member(P, None, (F(1, 2), 1))
    assert not res.member and res.failing == 0
    rng = random.Random(8)
    for _ in range(30):
        x = random_rational_point(rng, 2, 4)
        assert hull_member(P, variable_disjunction(P, 0), x).member == (P.contains(x) and x[1] == 0)


def test_landp_without_binaries_is_P():
    P = load_fixture("fig2").with_binary(())
    assert landp_member(P, None, (F(1, 2), 1)).member
    assert not landp_member(P, None, (1, 1)).member


def test_cardinality_over_birkhoff_row_is_all_of_P():
    P = birkhoff(3)
    D = cardinality_disjunction(P, (0, 1, 2))
    for v in vertices(P):
        assert hull_member(P, D, v).member
    assert hull_member(P, D, (F(1, 3),) * 9).member


def test_singleton_cardinality_is_a_face():
    P = cube(2)
    D = cardinality_disjunction(P, (0,))
    assert hull_member(P, D, (1, F(1, 2))).member
    assert not hull_member(P, D, (F(1, 2), F(1, 2))).member


def test_disjunction_errors():
    P = cube(2, binary=[0])
    with pytest.raises(ValueError):
        variable_disjunction(P, 1)
    with pytest.raises(ValueError):
        cardinality_disjunction(P, ())
    with pytest.raises(ValueError):
        Disjunction(2, ())
    with pytest.raises(ValueError):
        SubsetDisjunction((0,), ((2,),))


def test_adding_a_disjunct_keeps_members():
    P = cube(3)
    base = Disjunction(3, (fix_rows(3, {0: 1}),))
    more = Disjunction(3, base.disjuncts + (fix_rows(3, {1: 1}),))
    rng = random.Random(1)
    for _ in range(30):
        x = random_rational_point(rng, 3, 4)
        if hull_member(P, base, x).member:
            assert hull_member(P, more, x).member


def test_empty_disjunct_is_harmless():
    P = load_fixture("fig4")
    ghost = Disjunction(4, (fix_rows(4, {0: 1}), fix_rows(4, {0: 1, 1: 1})))
    assert hull_member(P, ghost, (1, 0, 0, 0)).member


def test_balas_projection_matches_fourier_motzkin():
    rng = random.Random(21)
    for n in (2, 3):
        rows = (Row(tuple(F(rng.randint(-2, 2)) for _ in range(n - 1)) + (F(1),), "<=", F(rng.randint(1, 2))),)
        P = BoxPolytope(n, frozenset(range(n)), rows)
        D = Disjunction(n, (fix_rows(n, {0: 0}), fix_rows(n, {0: 1, 1: 0})))
        L = build_balas_ef(P, D)
        Q = lp.fourier_motzkin_project(L.system, list(range(n)), max_eliminations=8)
        assert Q.n == n
        for _ in range(100):
            x = random_rational_point(rng, n, 4)
            assert lp.is_feasible_point(Q, x) == hull_member(P, D, x).member
