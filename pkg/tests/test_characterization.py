from fractions import Fraction as F

import pytest

from rltlab.characterization import (check_condition_iii, check_condition_iv, derive_z, find_z,
                                     fractional_support)
from rltlab.figures import FIG4_X, fig4_lifting, load_fixture
from rltlab.rlt import ClosureVariant, closure_member, y_matrix

Z_FIG2 = {(0, 0): (F(0), F(0)), (0, 1): (F(1), F(0))}


def test_fractional_support():
    assert fractional_support((F(1, 2), 1), {0, 1}) == {0}
    assert fractional_support((0, 1, 1), {0, 1, 2}) == frozenset()
    assert fractional_support(FIG4_X, range(4)) == {0, 1, 2}


def test_derive_z_on_fig2():
    P = load_fixture("fig2")
    x = (F(1, 2), F(0))
    m = closure_member(P, "weak", x)
    assert derive_z(x, y_matrix(P, "weak", m.witness), P.binary) == Z_FIG2


def test_derive_z_on_fig4():
    z = derive_z(FIG4_X, fig4_lifting(), range(4))
    assert z[0, 1] == (1, 0, 0, 0)
    assert z[0, 0] == (0, F(1, 3), F(1, 3), 0)


def test_derive_z_rejects_integral_index():
    with pytest.raises(ValueError):
        derive_z((F(1, 2), 1), {(0, 1): 0, (1, 1): 1}, {0, 1}, indices=[1])


def test_integral_point_has_empty_family():
    x = (1, 0, 1)
    y = {(i, j): F(x[i] * x[j]) for i in range(3) for j in range(3)}
    assert derive_z(x, y, range(3)) == {}


def test_condition_checks_on_fig2():
    P = load_fixture("fig2")
    assert check_condition_iii(P, (F(1, 2), F(0)), Z_FIG2)
    assert not check_condition_iii(P, (F(1, 2), F(1)), Z_FIG2)
    assert check_condition_iv(P, (F(1, 2), F(1)), Z_FIG2)
    assert check_condition_iii(P, (1, 0), {}) and check_condition_iv(P, (1, 0), {})


def test_invalid_family_raises():
    P = load_fixture("fig2")
    with pytest.raises(ValueError):
        check_condition_iii(P, (F(1, 2), F(0)), {(0, 0): (F(1), F(0)), (0, 1): (F(1), F(0))})
    with pytest.raises(ValueError):
        check_condition_iv(P, (F(1, 2), F(0)), {(0, 1): (F(1), F(0))})


def test_find_z_on_fig2():
    P = load_fixture("fig2")
    assert find_z(P, (F(1, 2), 1), "iv") == Z_FIG2
    assert find_z(P, (F(1, 2), 1), "iii") is None
    assert find_z(P, (F(1, 2), 1), "iv") is not None and not closure_member(P, "weak", (F(1, 2), 1)).member
    assert find_z(P, (1, 0), "iii") == {}
    with pytest.raises(ValueError):
        find_z(P, (1, 1), "iii")
    with pytest.raises(ValueError):
        find_z(P, (0, 0), "v")
