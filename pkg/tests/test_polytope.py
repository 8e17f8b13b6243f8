import random
from fractions import Fraction as F

import pytest

import oracles
from rltlab import lp
from rltlab.figures import load_fixture
from rltlab.lp import Row
from rltlab.polytope import (BoxPolytope, InvalidFaceError, birkhoff, complement, complement_point,
                             conv_member, cube, face, hull_from_vertices, random_rational_point,
                             sample_points, vertices)

FIG3_V = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0),
          (F(1, 2), 0, F(1, 2), 1), (0, F(1, 2), F(1, 2), 1), (F(1, 2), F(1, 2), 0, 1)]


def test_complement_of_half_bound():
    P = BoxPolytope(1, frozenset({0}), (Row((F(1),), "<=", F(1, 2)),))
    Q = complement(P, 0)
    assert Q.contains((F(3, 4),)) and not Q.contains((F(1, 4),))
    with pytest.raises((ValueError, IndexError)):
        complement(P, 1)


def test_complement_is_an_involution():
    P = load_fixture("fig2")
    Q = complement(complement(P, 0), 0)
    rng = random.Random(2)
    for _ in range(20):
        x = random_rational_point(rng, 2)
        assert P.contains(x) == Q.contains(x)


def test_complementing_the_support_maps_to_ones():
    assert complement_point((0, 0, 0, F(1, 3)), [0, 1, 2]) == (1, 1, 1, F(1, 3))


def test_faces():
    E = face(cube(2), (1, 0), 1)
    assert vertices(E) == [(1, 0), (1, 1)]
    B2 = birkhoff(2)
    assert vertices(face(B2, (1, 0, 0, 0), 1)) == [(1, 0, 0, 1)]
    P3 = load_fixture("fig3")
    Fc = face(P3, (1, 1, 1, 0), 1)
    assert sorted(vertices(Fc)) == sorted(vertices(P3))
    with pytest.raises(InvalidFaceError):
        face(cube(2), (1, 1), 1)


def test_vertices_small_cases():
    assert vertices(cube(1)) == [(0,), (1,)]
    assert vertices(load_fixture("fig2")) == [(0, 0), (F(1, 2), 1), (1, 0)]
    V = vertices(birkhoff(3))
    assert len(V) == 6
    assert all(sorted(v) == [0] * 6 + [1] * 3 for v in V)


def test_vertices_match_brute_force():
    rng = random.Random(9)
    for _ in range(10):
        n = rng.randint(2, 3)
        rows = [([rng.randint(-3, 3) for _ in range(n)], "<=", rng.randint(0, 3)) for _ in range(3)]
        P = BoxPolytope(n, frozenset(), tuple(Row(tuple(map(F, c)), r, F(b)) for c, r, b in rows))
        assert vertices(P) == oracles.vertices(n, rows + oracles.box_rows(n))


def test_vertex_guard():
    with pytest.raises(ValueError):
        vertices(cube(12))


def test_hulls():
    H = hull_from_vertices([(0,), (1,)])
    assert vertices(H) == [(0,), (1,)]
    S = hull_from_vertices([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    eqs = [r for r in S.rows if r.rel == "="]
    assert len(eqs) == 1 and eqs[0].coef == (1, 1, 1) and eqs[0].rhs == 1
    with pytest.raises(ValueError):
        hull_from_vertices([])


def test_fig3_hull_round_trip():
    P = load_fixture("fig3")
    assert sorted(vertices(P)) == sorted(tuple(map(F, v)) for v in FIG3_V)
    assert P.contains((F(1, 3), F(1, 3), F(1, 3), F(2, 3)))
    rng = random.Random(4)
    for _ in range(60):
        x = random_rational_point(rng, 4, 3)
        if rng.random() < 0.5:
            x = sample_points(P, rng, 1)[1]
        assert P.contains(x) == oracles.in_hull(FIG3_V, x)


def test_vertices_then_hull_is_identity_on_samples():
    P = load_fixture("fig2")
    Q = hull_from_vertices(vertices(P))
    rng = random.Random(1)
    for x in sample_points(P, rng, 30, 6):
        assert P.contains(x) == Q.contains(x)


def test_vertex_hull_has_the_same_optima():
    P = birkhoff(3)
    V = vertices(P)
    rng = random.Random(0)
    for _ in range(50):
        c = [F(rng.randint(-5, 5)) for _ in range(9)]
        best = max(sum(a * v for a, v in zip(c, x)) for x in V)
        assert lp.solve(P.system(), c).value == best


def test_conv_member():
    m = conv_member([(0,), (1,)], (F(1, 2),))
    assert m.member and m.multipliers == (F(1, 2), F(1, 2))
    assert conv_member(FIG3_V, (F(1, 3), F(1, 3), F(1, 3), F(2, 3))).member
    sq = [(0, 0), (0, 1), (1, 0), (1, 1)]
    out = conv_member(sq, (2, 0))
    assert not out.member
    assert out.cut.coef == (1, 0) and out.cut.rhs == 1


def test_box_polytope_rejects_bad_widths():
    with pytest.raises(ValueError):
        BoxPolytope(2, frozenset(), (Row((F(1),), "<=", F(1)),))
    with pytest.raises(ValueError):
        BoxPolytope(2, frozenset({3}))
