"""Instance files and JSON rendering.

Polytope files are JSON::

    {"n": 2, "binary": [0],
     "rows": [{"coef": ["-2", "1"], "rel": "<=", "rhs": "0"}]}

Rationals are integer literals or ``"p/q"`` strings; floats are rejected.
Box rows are implicit.  A file may give ``"vertices"`` instead of
``"rows"``, in which case the hull is computed.  An optional
``"description"`` string is carried along and ignored.

QAP files hold whitespace-separated tokens: ``n`` and then the ``n**4``
costs in row-major ``(i, j, k, l)`` order.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

from .disjunctive import (Disjunction, SubsetDisjunction, cardinality_disjunction,
                          variable_disjunction)
from .lp import RELATIONS, Row
from .polytope import BoxPolytope, hull_from_vertices
from .qap import QapInstance

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class InputError(ValueError):
    pass


def parse_rational(v: Any) -> Fraction:
    if isinstance(v, bool):
        raise InputError(f"not a rational: {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str) and _RATIONAL.match(v.strip()):
        try:
            return Fraction(v.strip())
        except ZeroDivisionError:
            raise InputError(f"zero denominator in {v!r}") from None
    raise InputError(f"not an exact rational: {v!r}")


def render(v: Fraction) -> str:
    return str(v)


def parse_point(text: str) -> Tuple[Fraction, ...]:
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    if not parts:
        raise InputError("empty point")
    return tuple(parse_rational(p) for p in parts)


def polytope_from_dict(doc: Dict[str, Any]) -> BoxPolytope:
    if not isinstance(doc, dict) or "n" not in doc:
        raise InputError("polytope document needs an 'n' field")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError("'n' must be a positive integer")
    binary = doc.get("binary", list(range(n)))
    if not isinstance(binary, list) or any(not isinstance(i, int) or not 0 <= i < n for i in binary):
        raise InputError(f"'binary' must list indices in 0..{n - 1}")
    if "vertices" in doc and "rows" not in doc:
        pts = []
        for v in doc["vertices"]:
            if not isinstance(v, list) or len(v) != n:
                raise InputError(f"vertex {v!r} does not have {n} entries")
            pts.append(tuple(parse_rational(c) for c in v))
        try:
            return hull_from_vertices(pts, binary=binary)
        except ValueError as e:
            raise InputError(str(e)) from None
    rows = []
    for k, r in enumerate(doc.get("rows", [])):
        if not isinstance(r, dict) or not {"coef", "rel", "rhs"} <= set(r):
            raise InputError(f"row {k} needs 'coef', 'rel' and 'rhs'")
        if r["rel"] not in RELATIONS:
            raise InputError(f"row {k}: unknown relation {r['rel']!r}")
        if not isinstance(r["coef"], list) or len(r["coef"]) != n:
            raise InputError(f"row {k}: expected {n} coefficients")
        rows.append(Row(tuple(parse_rational(c) for c in r["coef"]), r["rel"],
                        parse_rational(r["rhs"]), r.get("label", f"r{k}")))
    return BoxPolytope(n, frozenset(binary), tuple(rows))


def polytope_to_dict(P: BoxPolytope) -> Dict[str, Any]:
    return {
        "n": P.n,
        "binary": sorted(P.binary),
        "rows": [{"coef": [render(a) for a in r.coef], "rel": r.rel, "rhs": render(r.rhs)}
                 for r in P.rows],
    }


def load_polytope(path: Union[str, Path]) -> BoxPolytope:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None
    return polytope_from_dict(doc)


def parse_qap(text: str) -> QapInstance:
    tokens = text.split()
    if not tokens:
        raise InputError("empty QAP instance")
    try:
        n = int(tokens[0])
    except ValueError:
        raise InputError("first token must be the instance size") from None
    if n < 1:
        raise InputError("instance size must be positive")
    vals = tokens[1:]
    if len(vals) != n ** 4:
        raise InputError(f"expected {n ** 4} costs, found {len(vals)}")
    q = tuple(parse_rational(v) for v in vals)
    if any(v < 0 for v in q):
        raise InputError("costs must be nonnegative")
    return QapInstance(n, q)


def load_qap(path: Union[str, Path]) -> QapInstance:
    try:
        return parse_qap(Path(path).read_text())
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def qap_to_text(inst: QapInstance) -> str:
    n = inst.n
    lines = [str(n)]
    for r in range(n * n):
        lines.append(" ".join(render(v) for v in inst.q[r * n * n:(r + 1) * n * n]))
    return "\n".join(lines) + "\n"


def parse_disjunction(text: str, P: BoxPolytope) -> Union[Disjunction, SubsetDisjunction]:
    """``var:j``, ``card:j1,j2,...`` or ``patterns:d1,d2,...:p1,p2,...`` (patterns as 0/1 strings)."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "var":
            return variable_disjunction(P, int(rest))
        if kind == "card":
            return cardinality_disjunction(P, [int(t) for t in rest.split(",") if t])
        if kind == "patterns":
            d_part, _, p_part = rest.partition(":")
            D = tuple(int(t) for t in d_part.split(",") if t)
            pats = tuple(tuple(int(ch) for ch in p) for p in p_part.split(",") if p)
            if any(not 0 <= k < P.n for k in D):
                raise InputError("pattern index outside the dimension")
            return SubsetDisjunction(D, pats)
    except InputError:
        raise
    except ValueError as e:
        raise InputError(f"bad disjunction {text!r}: {e}") from None
    raise InputError(f"unknown disjunction kind {kind!r}; use var:, card: or patterns:")


def row_to_json(r: Row) -> Dict[str, Any]:
    return {"coef": [render(a) for a in r.coef], "rel": r.rel, "rhs": render(r.rhs)}


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return render(obj)
    if isinstance(obj, Row):
        return row_to_json(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj
