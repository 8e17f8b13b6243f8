"""Level-1 RLT extended formulations of box polytopes.

Every row ``a.x REL b`` of P (box rows included) is multiplied by ``x_j``
and by ``1 - x_j`` for each multiplier index ``j``, with ``x_i x_j``
replaced by ``y{i}_{j}``.  The weak variant multiplies by binary indices
only, the strong one by all indices.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from . import lp
from .lifted import LiftedSystem, MembershipCertificate, lifted_member
from .lp import LinearSystem, Row, frac
from .polytope import BoxPolytope


class ClosureVariant(enum.Enum):
    WEAK = "weak"
    STRONG = "strong"

    @classmethod
    def parse(cls, v) -> "ClosureVariant":
        if isinstance(v, cls):
            return v
        return cls(str(v).lower())


def multiplier_set(P: BoxPolytope, variant: ClosureVariant) -> List[int]:
    if ClosureVariant.parse(variant) is ClosureVariant.WEAK:
        return sorted(P.binary)
    return list(range(P.n))


def y_name(i: int, j: int) -> str:
    return f"y{i}_{j}"


@lru_cache(maxsize=512)
def build_rlt_ef(P: BoxPolytope, variant: ClosureVariant) -> LiftedSystem:
    variant = ClosureVariant.parse(variant)
    n = P.n
    J = multiplier_set(P, variant)
    names = list(P.variables)
    ypos: Dict[Tuple[int, int], int] = {}
    for i in range(n):
        for j in J:
            ypos[i, j] = len(names)
            names.append(y_name(i, j))
    total = len(names)
    rows: List[Row] = []
    base = P.all_rows()
    for j in J:
        for r_idx, r in enumerate(base):
            tag = r.label or f"r{r_idx}"
            mul: Dict[int, Fraction] = {}
            comp: Dict[int, Fraction] = {}
            for i, a in enumerate(r.coef):
                if a:
                    mul[ypos[i, j]] = a
                    comp[i] = a
                    comp[ypos[i, j]] = -a
            if r.rhs:
                mul[j] = mul.get(j, 0) - r.rhs
                comp[j] = comp.get(j, 0) + r.rhs
            rows.append(Row.sparse(total, mul, r.rel, 0, f"rlt:{tag}*x{j}"))
            rows.append(Row.sparse(total, comp, r.rel, r.rhs, f"rlt:{tag}*(1-x{j})"))
    for a_idx, i in enumerate(J):
        for j in J[a_idx + 1:]:
            rows.append(Row.sparse(total, {ypos[i, j]: 1, ypos[j, i]: -1}, "=", 0, f"sym:{i},{j}"))
    for j in sorted(P.binary):
        rows.append(Row.sparse(total, {ypos[j, j]: 1, j: -1}, "=", 0, f"diag:{j}"))
    system = LinearSystem(tuple(names), tuple(rows))
    return LiftedSystem(system, tuple(range(n)), f"rlt-{variant.value}")


def _check_box(P: BoxPolytope, x: Sequence) -> Tuple[Fraction, ...]:
    x = tuple(frac(v) for v in x)
    if len(x) != P.n:
        raise ValueError(f"point has dimension {len(x)}, polytope has {P.n}")
    if any(not 0 <= v <= 1 for v in x):
        raise ValueError("point lies outside the unit box")
    return x


def closure_member(P: BoxPolytope, variant, x: Sequence) -> MembershipCertificate:
    x = _check_box(P, x)
    return lifted_member(build_rlt_ef(P, ClosureVariant.parse(variant)), x)


def optimize_over_closure(P: BoxPolytope, variant, c: Sequence, sense: str = "max"):
    """Exact optimum over the closure; returns ``(value, x)`` or ``None`` if empty."""
    L = build_rlt_ef(P, ClosureVariant.parse(variant))
    c = [frac(v) for v in c]
    if len(c) != P.n:
        raise ValueError("objective has the wrong dimension")
    obj = [Fraction(0)] * L.system.n
    for j, v in zip(L.public, c):
        obj[j] = v
    out = lp.solve(L.system, obj, sense)
    if isinstance(out, lp.Infeasible):
        return None
    if isinstance(out, lp.Unbounded):
        raise AssertionError("closure of a box polytope cannot be unbounded")
    return out.value, tuple(out.x[j] for j in L.public)


def y_matrix(P: BoxPolytope, variant, witness: Dict[str, Fraction]) -> Dict[Tuple[int, int], Fraction]:
    J = multiplier_set(P, variant)
    return {(i, j): witness[y_name(i, j)] for i in range(P.n) for j in J}


def ef_point_holds(P: BoxPolytope, variant, x: Sequence, y: Dict[Tuple[int, int], Fraction]) -> bool:
    """Does ``(x, y)`` satisfy the EF?  ``y`` maps ``(i, j)`` to a value."""
    L = build_rlt_ef(P, ClosureVariant.parse(variant))
    aux = {y_name(i, j): frac(v) for (i, j), v in y.items()}
    try:
        full = L.full_point(x, aux)
    except KeyError:
        return False
    return all(r.holds(full) for r in L.system.rows)


def mccormick_system(P: BoxPolytope, variant) -> LinearSystem:
    """McCormick rows for every EF product ``y{i}_{j}``, in the EF's variables.

    For each ``(i, j)``: ``y >= 0``, ``y <= x_i``, ``y <= x_j``,
    ``y >= x_i + x_j - 1``.
    """
    L = build_rlt_ef(P, ClosureVariant.parse(variant))
    S = L.system
    total = S.n
    rows = []
    for i in range(P.n):
        for j in multiplier_set(P, variant):
            y = S.index(y_name(i, j))
            tag = f"mc:{i},{j}"
            rows.append(Row.sparse(total, {y: 1}, ">=", 0, tag + ":y>=0"))
            rows.append(Row.sparse(total, {y: 1, i: -1}, "<=", 0, tag + ":y<=xi"))
            rows.append(Row.sparse(total, {y: 1, j: -1}, "<=", 0, tag + ":y<=xj"))
            rows.append(Row.sparse(total, {y: 1, i: -1, j: -1}, ">=", -1, tag + ":y>=xi+xj-1"))
    return LinearSystem(S.variables, rows)
