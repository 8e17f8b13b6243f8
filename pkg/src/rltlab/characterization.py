"""Pointwise characterization of the weak RLT closure through z-points.

For a point ``x`` and each fractional binary index ``i`` we look at two
points ``z(i,0)`` and ``z(i,1)`` of P with ``z_i`` fixed to 0 and 1.  The
"convex" conditions ask for ``x`` on the segment between them plus the
cross identities ``z(i,1)_j x_i = z(j,1)_i x_j``.  The "equation"
conditions keep those identities, add
``z(i,0)_j (1 - x_i) = (1 - z(j,1)_i) x_j`` and pin every integral binary
coordinate to its value in ``x``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import lp
from .lp import LinearSystem, Row, frac
from .polytope import BoxPolytope

ZFamily = Dict[Tuple[int, int], Tuple[Fraction, ...]]

CONDITIONS = ("iii", "iv")


def fractional_support(x: Sequence, B: Iterable[int]) -> FrozenSet[int]:
    x = [frac(v) for v in x]
    return frozenset(i for i in B if 0 < x[i] < 1)


def derive_z(x: Sequence, y: Dict[Tuple[int, int], Fraction], B: Iterable[int],
             indices: Optional[Iterable[int]] = None) -> ZFamily:
    """``z(i,1) = y[:, i] / x_i`` and ``z(i,0) = (x - y[:, i]) / (1 - x_i)``."""
    x = tuple(frac(v) for v in x)
    n = len(x)
    frac_idx = fractional_support(x, B)
    want = sorted(frac_idx if indices is None else indices)
    out: ZFamily = {}
    for i in want:
        if i not in frac_idx:
            raise ValueError(f"x_{i} = {x[i]} is not fractional")
        col = [frac(y[k, i]) for k in range(n)]
        out[i, 1] = tuple(c / x[i] for c in col)
        out[i, 0] = tuple((x[k] - col[k]) / (1 - x[i]) for k in range(n))
    return out


def _check_family(P: BoxPolytope, x, z: ZFamily, support) -> None:
    for i in support:
        for beta in (0, 1):
            if (i, beta) not in z:
                raise ValueError(f"z-family lacks the point ({i},{beta})")
            p = z[i, beta]
            if len(p) != P.n:
                raise ValueError("z-point has the wrong dimension")
            if p[i] != beta:
                raise ValueError(f"z({i},{beta}) has coordinate {i} equal to {p[i]}")
            if not P.contains(p):
                raise ValueError(f"z({i},{beta}) lies outside the polytope")


def _cross_ok(x, z, support) -> bool:
    return all(z[i, 1][j] * x[i] == z[j, 1][i] * x[j] for i in support for j in support)


def check_condition_iii(P: BoxPolytope, x: Sequence, z: ZFamily) -> bool:
    x = tuple(frac(v) for v in x)
    S = sorted(fractional_support(x, P.binary))
    _check_family(P, x, z, S)
    for i in S:
        for k in range(P.n):
            if x[k] != x[i] * z[i, 1][k] + (1 - x[i]) * z[i, 0][k]:
                return False
    return _cross_ok(x, z, S)


def check_condition_iv(P: BoxPolytope, x: Sequence, z: ZFamily) -> bool:
    x = tuple(frac(v) for v in x)
    S = sorted(fractional_support(x, P.binary))
    _check_family(P, x, z, S)
    if not _cross_ok(x, z, S):
        return False
    for i in S:
        for j in S:
            if z[i, 0][j] * (1 - x[i]) != (1 - z[j, 1][i]) * x[j]:
                return False
    fixed = [k for k in sorted(P.binary) if k not in S]
    return all(z[i, b][k] == x[k] for i in S for b in (0, 1) for k in fixed)


def z_name(i: int, beta: int, k: int) -> str:
    return f"z{i}_{beta}_{k}"


def z_system(P: BoxPolytope, x: Sequence, which: str) -> Tuple[LinearSystem, List[int]]:
    """Joint linear system over all z-points for the chosen condition set."""
    if which not in CONDITIONS:
        raise ValueError(f"condition must be one of {CONDITIONS}")
    x = tuple(frac(v) for v in x)
    S = sorted(fractional_support(x, P.binary))
    n = P.n
    pos = {}
    names = []
    for i in S:
        for b in (0, 1):
            for k in range(n):
                pos[i, b, k] = len(names)
                names.append(z_name(i, b, k))
    total = len(names)
    rows: List[Row] = []
    for i in S:
        for b in (0, 1):
            for r in P.all_rows():
                rows.append(Row.sparse(total, {pos[i, b, k]: a for k, a in enumerate(r.coef) if a},
                                       r.rel, r.rhs, f"P:{i},{b}:{r.label}"))
            rows.append(Row.sparse(total, {pos[i, b, i]: 1}, "=", b, f"fix:{i},{b}"))
    for i in S:
        for j in S:
            if i < j:
                rows.append(Row.sparse(total, {pos[i, 1, j]: x[i], pos[j, 1, i]: -x[j]}, "=", 0,
                                       f"cross:{i},{j}"))
    if which == "iii":
        for i in S:
            for k in range(n):
                rows.append(Row.sparse(total, {pos[i, 1, k]: x[i], pos[i, 0, k]: 1 - x[i]},
                                       "=", x[k], f"seg:{i},{k}"))
    else:
        for i in S:
            for j in S:
                # z(i,0)_j (1 - x_i) + z(j,1)_i x_j = x_j
                t = {pos[i, 0, j]: 1 - x[i]}
                t[pos[j, 1, i]] = t.get(pos[j, 1, i], 0) + x[j]
                rows.append(Row.sparse(total, t, "=", x[j], f"comp:{i},{j}"))
        for i in S:
            for b in (0, 1):
                for k in sorted(P.binary):
                    if k not in S:
                        rows.append(Row.sparse(total, {pos[i, b, k]: 1}, "=", x[k], f"pin:{i},{b},{k}"))
    return LinearSystem(tuple(names), tuple(rows)), S


def find_z(P: BoxPolytope, x: Sequence, which: str) -> Optional[ZFamily]:
    """A z-family meeting the chosen conditions, or ``None``; ``{}`` if none is needed."""
    x = tuple(frac(v) for v in x)
    if not P.contains(x):
        raise ValueError("point is not in the polytope")
    system, S = z_system(P, x, which)
    if not S:
        return {}
    out = lp.solve(system)
    if not isinstance(out, lp.Optimal):
        return None
    n = P.n
    z: ZFamily = {}
    for a, i in enumerate(S):
        for b in (0, 1):
            off = (2 * a + b) * n
            z[i, b] = tuple(out.x[off:off + n])
    check = check_condition_iii if which == "iii" else check_condition_iv
    if not check(P, x, z):
        raise lp.CertificateError("LP z-family fails the exact condition check")
    return z
