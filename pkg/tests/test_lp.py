import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from rltlab import linalg, lp
from rltlab.lp import LinearSystem, Row


def system(n, rows, bounds=None):
    return LinearSystem(tuple(f"x{i}" for i in range(n)),
                        tuple(Row(tuple(map(F, c)), rel, F(b), f"r{k}") for k, (c, rel, b) in enumerate(rows)),
                        bounds)


FIG2 = [((-2, 1), "<=", 0), ((2, 1), "<=", 2)] + oracles.box_rows(2)


def test_max_over_unit_interval():
    out = lp.solve(system(1, [((1,), "<=", 1), ((1,), ">=", 0)]), [1])
    assert isinstance(out, lp.Optimal)
    assert out.value == 1 and out.x == (F(1),)


def test_contradiction_pair_gives_unit_farkas_multipliers():
    S = system(1, [((1,), "<=", 0), ((1,), ">=", 1)])
    out = lp.solve(S)
    assert isinstance(out, lp.Infeasible)
    assert out.multipliers == (F(1), F(1))
    coef, rhs = lp.aggregate(S, out.multipliers, out.bound_multipliers)
    assert coef == [0] and rhs == -1


def test_triangle_top_vertex():
    out = lp.solve(system(2, FIG2), [0, 1])
    assert out.value == 1 and out.x == (F(1, 2), F(1))


def test_min_sense_and_duals_certify():
    S = system(2, FIG2)
    out = lp.solve(S, [1, 1], "min")
    assert out.value == 0
    lp.check_optimal(S, [F(-1), F(-1)], out)


def test_unbounded_ray():
    S = system(2, [((1, -1), "<=", 0)])
    out = lp.solve(S, [1, 0])
    assert isinstance(out, lp.Unbounded)
    lp.check_unbounded(S, [F(1), F(0)], out)


def test_objective_dimension_mismatch():
    with pytest.raises(ValueError):
        lp.solve(system(2, FIG2), [1])


def test_variable_bounds_are_respected():
    S = system(2, [((1, 1), "<=", 10)], bounds=[(F(0), F(3)), (F(1), F(2))])
    out = lp.solve(S, [1, 1])
    assert out.value == 5
    with pytest.raises(ValueError):
        system(1, [], bounds=[(F(2), F(1))])


def test_inconsistent_equations():
    S = system(2, [((1, 1), "=", 1), ((2, 2), "=", 3)])
    out = lp.solve(S)
    assert isinstance(out, lp.Infeasible)
    lp.check_farkas(S, out)


def test_tampered_farkas_certificate_is_rejected():
    S = system(1, [((1,), "<=", 0), ((1,), ">=", 1)])
    with pytest.raises(lp.CertificateError):
        lp.check_farkas(S, lp.Infeasible((F(1), F(2)), (F(0),)))


def test_evaluate_slacks():
    S = system(4, [((1, 1, 1, 1), "<=", 1)])
    (r,) = lp.evaluate(S, [F(1, 4), F(1, 4), F(1, 4), 0])
    assert r.slack == F(1, 4) and r.satisfied and not r.tight
    (r,) = lp.evaluate(system(1, [((1,), ">=", 0)]), [0])
    assert r.slack == 0 and r.tight
    with pytest.raises(ValueError):
        lp.evaluate(S, [0, 0])


def test_evaluate_matches_direct_dot_products():
    rng = random.Random(5)
    for _ in range(20):
        rows = [([rng.randint(-4, 4) for _ in range(3)], rng.choice(["<=", ">=", "="]), rng.randint(-3, 3))
                for _ in range(4)]
        S = system(3, rows)
        x = [F(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(3)]
        for rep, (c, rel, b) in zip(lp.evaluate(S, x), rows):
            v = sum(F(a) * xi for a, xi in zip(c, x))
            assert rep.lhs == v
            assert rep.slack == (v - b if rel == ">=" else b - v)


def test_redundancy_sum_of_rows():
    S = system(2, [((1, 0), "<=", 1), ((0, 1), "<=", 1)])
    red = lp.is_redundant(S, Row((F(1), F(1)), "<=", F(2)))
    assert red.redundant
    duals, _ = red.certificates[0]
    assert duals == (F(1), F(1))
    assert not lp.is_redundant(S, Row((F(1), F(0)), "<=", F(1, 2))).redundant


def test_redundancy_of_infeasible_base():
    S = system(1, [((1,), "<=", 0), ((1,), ">=", 1)])
    with pytest.raises(lp.InfeasibleSystemError):
        lp.is_redundant(S, Row((F(1),), "<=", F(5)))


def test_fm_substitution():
    S = LinearSystem(("x", "y"), (Row((F(1), F(-1)), "=", F(0)), Row((F(0), F(1)), ">=", F(0)),
                                  Row((F(0), F(1)), "<=", F(1))))
    Q = lp.fourier_motzkin_project(S, ["x"])
    assert Q.variables == ("x",)
    for v, inside in ((F(0), True), (F(1), True), (F(1, 2), True), (F(-1, 3), False), (F(4, 3), False)):
        assert lp.is_feasible_point(Q, (v,)) == inside


def test_fm_budget():
    S = system(10, [((1,) * 10, "<=", 1)])
    with pytest.raises(lp.EliminationBudgetError):
        lp.fourier_motzkin_project(S, [0], max_eliminations=8)


def test_fm_agrees_with_lp_membership():
    rng = random.Random(11)
    for _ in range(3):
        rows = [([rng.randint(-3, 3) for _ in range(3)], "<=", rng.randint(0, 4)) for _ in range(5)]
        S = system(3, rows + oracles.box_rows(3))
        Q = lp.fourier_motzkin_project(S, [0, 1])
        for _ in range(100):
            p = (F(rng.randint(-1, 5), 4), F(rng.randint(-1, 5), 4))
            direct = lp.find_point(S.with_bounds({0: (p[0], p[0]), 1: (p[1], p[1])})) is not None
            assert lp.is_feasible_point(Q, p) == direct


def test_linalg_helpers():
    assert linalg.rank([[F(1), F(2)], [F(2), F(4)]], 2) == 1
    ns = linalg.nullspace([[F(1), F(1), F(0)]], 3)
    assert len(ns) == 2 and all(v[0] + v[1] == 0 for v in ns)
    assert linalg.primitive([F(1, 2), F(-3, 4)]) == [2, -3]
    assert linalg.solve_dense([[F(1), F(1)], [F(1), F(-1)]], [F(2), F(0)]) == [1, 1]


rat = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.tuples(st.lists(rat, min_size=n, max_size=n), st.sampled_from(["<=", ">=", "="]), rat),
             max_size=3),
    st.lists(rat, min_size=n, max_size=n))))
def test_lp_matches_vertex_enumeration(case):
    n, rows, c = case
    rows = rows + oracles.box_rows(n)
    out = lp.solve(system(n, rows), c)
    ref = oracles.lp_max(n, rows, c)
    if ref is None:
        assert isinstance(out, lp.Infeasible)
    else:
        assert isinstance(out, lp.Optimal) and out.value == ref
