import json
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from rltlab import io
from rltlab.disjunctive import Disjunction, SubsetDisjunction
from rltlab.figures import load_fixture
from rltlab.polytope import cube
from rltlab.qap import QapInstance


def test_parse_rational():
    assert io.parse_rational("-3/6") == F(-1, 2)
    assert io.parse_rational(4) == 4
    for bad in ("0.5", 0.5, "1/0", "", "x", True, None):
        with pytest.raises(io.InputError):
            io.parse_rational(bad)


def test_parse_point():
    assert io.parse_point("1/2,1") == (F(1, 2), F(1))
    assert io.parse_point(" 1/3, 1/3 ,0 ") == (F(1, 3), F(1, 3), F(0))
    with pytest.raises(io.InputError):
        io.parse_point("")


def test_polytope_round_trip():
    P = load_fixture("fig2")
    doc = io.polytope_to_dict(P)
    assert doc["rows"][0] == {"coef": ["-2", "1"], "rel": "<=", "rhs": "0"}
    Q = io.polytope_from_dict(json.loads(json.dumps(doc)))
    assert [(r.coef, r.rel, r.rhs) for r in Q.rows] == [(r.coef, r.rel, r.rhs) for r in P.rows]
    assert Q.binary == P.binary


@pytest.mark.parametrize("doc", [
    {},
    {"n": 0},
    {"n": 2, "binary": [5]},
    {"n": 2, "rows": [{"coef": ["1"], "rel": "<=", "rhs": "1"}]},
    {"n": 1, "rows": [{"coef": ["1"], "rel": "<", "rhs": "1"}]},
    {"n": 1, "rows": [{"coef": ["1"], "rhs": "1"}]},
    {"n": 1, "rows": [{"coef": [0.25], "rel": "<=", "rhs": "1"}]},
    {"n": 2, "vertices": [["1"]]},
])
def test_bad_polytope_documents(doc):
    with pytest.raises(io.InputError):
        io.polytope_from_dict(doc)


def test_load_polytope_errors(tmp_path):
    with pytest.raises(io.InputError):
        io.load_polytope(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(io.InputError):
        io.load_polytope(bad)


def test_qap_text_round_trip():
    inst = QapInstance.from_function(2, lambda i, j, k, l: F(i + j, 1 + k + l))
    assert io.parse_qap(io.qap_to_text(inst)) == inst
    for bad in ("", "two", "2 1 2 3", "1 -1", "0"):
        with pytest.raises(io.InputError):
            io.parse_qap(bad)


def test_parse_disjunction():
    P = cube(3)
    assert isinstance(io.parse_disjunction("var:1", P), Disjunction)
    assert len(io.parse_disjunction("card:0,2", P)) == 2
    d = io.parse_disjunction("patterns:0,1:10,01", P)
    assert isinstance(d, SubsetDisjunction) and d.patterns == ((1, 0), (0, 1))
    for bad in ("nope:1", "var:x", "patterns:0,7:10", "patterns:0:2"):
        with pytest.raises(io.InputError):
            io.parse_disjunction(bad, P)


@given(st.lists(st.fractions(max_denominator=50), min_size=1, max_size=6))
def test_point_render_round_trip(xs):
    assert io.parse_point(",".join(io.render(v) for v in xs)) == tuple(xs)
