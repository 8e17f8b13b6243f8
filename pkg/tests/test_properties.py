import random
from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from rltlab import lp
from rltlab.characterization import check_condition_iii, check_condition_iv, derive_z, find_z
from rltlab.disjunctive import landp_member
from rltlab.figures import load_fixture
from rltlab.polytope import complement, complement_point, random_rational_point, vertices
from rltlab.rlt import ClosureVariant, build_rlt_ef, closure_member, optimize_over_closure, y_matrix
from rltlab.suites import random_polytope

WEAK, STRONG = ClosureVariant.WEAK, ClosureVariant.STRONG
seeds = st.integers(0, 10 ** 9)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_complement_is_an_involution_on_random_polytopes(seed):
    rng = random.Random(seed)
    P = random_polytope(rng)
    k = rng.randrange(P.n)
    Q = complement(complement(P, k), k)
    for _ in range(10):
        x = random_rational_point(rng, P.n, 6)
        assert P.contains(x) == Q.contains(x)
        assert complement_point(complement_point(x, [k]), [k]) == x


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_chain_on_closure_optima(seed):
    rng = random.Random(seed)
    P = random_polytope(rng)
    c = [F(rng.randint(-3, 3)) for _ in range(P.n)]
    best = optimize_over_closure(P, STRONG, c)
    if best is None:
        return
    x = best[1]
    assert closure_member(P, STRONG, x).member
    assert closure_member(P, WEAK, x).member
    assert landp_member(P, None, x).member
    assert P.contains(x)
    weak_best = optimize_over_closure(P, WEAK, c)
    assert weak_best[0] >= best[0]


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_z_points_from_weak_witnesses(seed):
    rng = random.Random(seed)
    P = random_polytope(rng)
    res = optimize_over_closure(P, WEAK, [F(rng.randint(-3, 3)) for _ in range(P.n)])
    if res is None:
        return
    x = res[1]
    cert = closure_member(P, WEAK, x)
    z = derive_z(x, y_matrix(P, WEAK, cert.witness), P.binary)
    assert check_condition_iii(P, x, z) and check_condition_iv(P, x, z)
    assert find_z(P, x, "iii") is not None


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_cuts_separate_and_are_valid_on_integral_vertices(seed):
    rng = random.Random(seed)
    P = random_polytope(rng)
    x = random_rational_point(rng, P.n, 5)
    cert = closure_member(P, STRONG, x)
    if cert.member:
        return
    cut = cert.cut
    assert cut.lhs(x) > cut.rhs
    for v in vertices(P):
        if all(v[i] in (0, 1) for i in P.binary):
            assert cut.holds(v)


def test_fig2_projection_by_elimination():
    P = load_fixture("fig2")
    L = build_rlt_ef(P, WEAK)
    Q = lp.fourier_motzkin_project(L.system, ["x0", "x1"])
    rng = random.Random(0)
    for _ in range(40):
        x = random_rational_point(rng, 2, 4)
        assert lp.is_feasible_point(Q, x) == (P.contains(x) and x[1] == 0)
