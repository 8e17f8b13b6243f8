import itertools
import random
from fractions import Fraction as F

import pytest

from rltlab import lp
from rltlab.polytope import vertices
from rltlab.qap import (MAX_N, QapInstance, aj_solution, aj_xy_rows, assignment_polytope,
                        build_adams_johnson, build_column_kb, build_kaufman_broeckx,
                        check_decomposition, decompose_aj_column, lp_bound, permutation_cost,
                        permutation_point, qap_optimum, rlt_rows_in_aj_space, solve_model, xw_point,
                        DecompositionError)


def zero(n):
    return QapInstance(n, (0,) * n ** 4)


def test_assignment_polytope():
    assert vertices(assignment_polytope(1)) == [(1,)]
    assert vertices(assignment_polytope(2)) == [(0, 1, 1, 0), (1, 0, 0, 1)]
    assert len(vertices(assignment_polytope(3))) == 6


def test_instance_validation():
    with pytest.raises(ValueError):
        QapInstance(2, (0,) * 15)
    with pytest.raises(ValueError):
        QapInstance(1, (-1,))
    with pytest.raises(ValueError):
        build_adams_johnson(zero(MAX_N + 1))


def test_zero_costs_give_zero_bounds():
    for build in (build_adams_johnson, build_kaufman_broeckx, build_column_kb):
        assert lp_bound(build(zero(2))) == 0


def test_two_by_two_pair_instance():
    inst = QapInstance.from_function(2, lambda i, j, k, l: int((i, j, k, l) in ((0, 0, 1, 1), (1, 1, 0, 0))))
    aj, kb = lp_bound(build_adams_johnson(inst)), lp_bound(build_kaufman_broeckx(inst))
    assert aj >= kb
    opt, _ = qap_optimum(inst)
    # n = 2 has only two permutations, and AJ is exact on them
    assert aj == opt == min(permutation_cost(inst, p) for p in itertools.permutations(range(2)))


def test_permutation_points_are_feasible_with_true_cost():
    inst = QapInstance.random(3, random.Random(4))
    for build in (build_adams_johnson, build_kaufman_broeckx):
        model = build(inst)
        for perm in itertools.permutations(range(3)):
            pt = permutation_point(inst, perm, model)
            assert lp.is_feasible_point(model.system, pt)
            assert sum(c * v for c, v in zip(model.objective, pt)) == permutation_cost(inst, perm)


def test_kb_minimal_w_is_the_product_at_binary_points():
    inst = QapInstance.random(3, random.Random(6))
    model = build_kaufman_broeckx(inst)
    for perm in itertools.permutations(range(3)):
        X = {(i, j): int(perm[i] == j) for i in range(3) for j in range(3)}
        for i, j in X:
            lower = max(0, inst.a(i, j) * X[i, j] + sum(inst.cost(i, j, k, l) * X[k, l] for k, l in X) - inst.a(i, j))
            assert lower == X[i, j] * sum(inst.cost(i, j, k, l) * X[k, l] for k, l in X)


def test_aj_bound_is_stable_under_row_permutation():
    inst = QapInstance.random(3, random.Random(12))
    model = build_adams_johnson(inst)
    order = list(range(len(model.system.rows)))
    random.Random(1).shuffle(order)
    assert solve_model(model, order).value == solve_model(model).value


def test_decomposition_at_a_permutation():
    inst = QapInstance.random(3, random.Random(2))
    model = build_adams_johnson(inst)
    sol = aj_solution(model, permutation_point(inst, (2, 0, 1), model))
    for j in range(3):
        w = decompose_aj_column(inst, sol, j)
        assert len(w.support) == 1
        (i,) = w.support
        assert w.xbar[i] == sol.x


def test_decomposition_at_the_barycenter():
    inst = zero(3)
    model = build_adams_johnson(inst)
    fixed = model.system.fix({k: F(1, 3) for k, name in enumerate(model.system.variables) if name.startswith("x")})
    pt = lp.find_point(fixed)
    sol = aj_solution(model, pt)
    for j in range(3):
        check_decomposition(inst, sol, decompose_aj_column(inst, sol, j))


def test_decomposition_rejects_infeasible_input():
    inst = zero(2)
    model = build_adams_johnson(inst)
    sol = aj_solution(model, [F(1, 2)] * model.system.n)
    with pytest.raises(DecompositionError):
        decompose_aj_column(inst, sol, 0)


def test_aj_optimum_satisfies_aggregated_coupling_rows():
    rng = random.Random(3)
    for _ in range(3):
        inst = QapInstance.random(3, rng)
        aj = build_adams_johnson(inst)
        out = solve_model(aj)
        sol = aj_solution(aj, out.x)
        for build in (build_kaufman_broeckx, build_column_kb):
            m = build(inst)
            assert lp.is_feasible_point(m.system, xw_point(m, sol))
            assert lp_bound(m) <= out.value


def test_aj_and_weak_rlt_rows_are_mutually_implied():
    A, R = aj_xy_rows(2), rlt_rows_in_aj_space(2)
    assert A.variables == R.variables
    assert lp.implies(A, R.rows) and lp.implies(R, A.rows)


def test_aj_and_weak_rlt_rows_sampled_at_three():
    A, R = aj_xy_rows(3), rlt_rows_in_aj_space(3)
    rng = random.Random(0)
    assert lp.implies(A, rng.sample(list(R.rows), 12))
    assert lp.implies(R, rng.sample(list(A.rows), 12))
