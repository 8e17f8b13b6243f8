"""Disjunctive hulls through the Balas extended formulation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .lifted import LiftedSystem, MembershipCertificate, lifted_member
from .lp import LinearSystem, Row, frac
from .polytope import BoxPolytope


@dataclass(frozen=True)
class Disjunction:
    """``OR_h (rows_h)``, each disjunct a tuple of rows over ``n`` variables."""
    n: int
    disjuncts: Tuple[Tuple[Row, ...], ...]

    def __post_init__(self):
        d = tuple(tuple(rows) for rows in self.disjuncts)
        if not d:
            raise ValueError("a disjunction needs at least one disjunct")
        for rows in d:
            for r in rows:
                if len(r.coef) != self.n:
                    raise ValueError("disjunct row width does not match the dimension")
        object.__setattr__(self, "disjuncts", d)

    def __len__(self):
        return len(self.disjuncts)

    def holds(self, x: Sequence) -> bool:
        x = [frac(v) for v in x]
        return any(all(r.holds(x) for r in rows) for rows in self.disjuncts)


def fix_rows(n: int, values: Dict[int, int], tag: str = "") -> Tuple[Row, ...]:
    return tuple(Row.sparse(n, {k: 1}, "=", v, f"{tag}x{k}={v}") for k, v in sorted(values.items()))


@dataclass(frozen=True)
class SubsetDisjunction:
    """Disjuncts ``x_D = p`` for each pattern ``p`` in ``patterns``."""
    D: Tuple[int, ...]
    patterns: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "D", tuple(self.D))
        pats = tuple(tuple(int(v) for v in p) for p in self.patterns)
        if not pats:
            raise ValueError("empty pattern set")
        if any(len(p) != len(self.D) or any(v not in (0, 1) for v in p) for p in pats):
            raise ValueError("patterns must be 0/1 vectors over D")
        object.__setattr__(self, "patterns", pats)

    def expand(self, n: int) -> Disjunction:
        if any(not 0 <= k < n for k in self.D):
            raise ValueError("subset index outside the dimension")
        return Disjunction(n, tuple(fix_rows(n, dict(zip(self.D, p)), f"d{h}:")
                                    for h, p in enumerate(self.patterns)))


def xh_name(h: int, i: int) -> str:
    return f"xh{h}_{i}"


def lam_name(h: int) -> str:
    return f"lam{h}"


@lru_cache(maxsize=512)
def build_balas_ef(P: BoxPolytope, disj: Disjunction) -> LiftedSystem:
    if disj.n != P.n:
        raise ValueError("disjunction dimension does not match the polytope")
    n, H = P.n, len(disj)
    names = list(P.variables)
    for h in range(H):
        names += [xh_name(h, i) for i in range(n)]
    lam0 = len(names)
    names += [lam_name(h) for h in range(H)]
    total = len(names)

    def xh(h, i):
        return n + h * n + i

    rows: List[Row] = []
    base = P.all_rows()
    for h in range(H):
        for rows_src, tag in ((base, "P"), (disj.disjuncts[h], "C")):
            for k, r in enumerate(rows_src):
                t = {xh(h, i): a for i, a in enumerate(r.coef) if a}
                if r.rhs:
                    t[lam0 + h] = -r.rhs
                rows.append(Row.sparse(total, t, r.rel, 0, f"{tag}{h}:{r.label or k}"))
    rows.append(Row.sparse(total, {lam0 + h: 1 for h in range(H)}, "=", 1, "sum-lambda"))
    for i in range(n):
        t = {xh(h, i): 1 for h in range(H)}
        t[i] = -1
        rows.append(Row.sparse(total, t, "=", 0, f"link:{i}"))
    for h in range(H):
        rows.append(Row.sparse(total, {lam0 + h: 1}, ">=", 0, f"lam{h}>=0"))
    return LiftedSystem(LinearSystem(tuple(names), tuple(rows)), tuple(range(n)), "balas")


def _as_disjunction(disj, n: int) -> Disjunction:
    return disj.expand(n) if isinstance(disj, SubsetDisjunction) else disj


def hull_member(P: BoxPolytope, disj, x: Sequence) -> MembershipCertificate:
    x = tuple(frac(v) for v in x)
    if len(x) != P.n:
        raise ValueError(f"point has dimension {len(x)}, polytope has {P.n}")
    if any(not 0 <= v <= 1 for v in x):
        raise ValueError("point lies outside the unit box")
    return lifted_member(build_balas_ef(P, _as_disjunction(disj, P.n)), x)


def hull_blocks(P: BoxPolytope, disj, cert: MembershipCertificate):
    """Split a TRUE witness into ``[(lambda_h, x^h)]``."""
    disj = _as_disjunction(disj, P.n)
    w = cert.witness
    return [(w[lam_name(h)], tuple(w[xh_name(h, i)] for i in range(P.n))) for h in range(len(disj))]


def variable_disjunction(P: BoxPolytope, j: int) -> Disjunction:
    if j not in P.binary:
        raise ValueError(f"index {j} is not binary")
    return Disjunction(P.n, (fix_rows(P.n, {j: 0}), fix_rows(P.n, {j: 1})))


def cardinality_disjunction(P: BoxPolytope, J: Iterable[int]) -> Disjunction:
    J = sorted(set(J))
    if not J:
        raise ValueError("empty index set")
    bad = [j for j in J if j not in P.binary]
    if bad:
        raise ValueError(f"indices {bad} are not binary")
    return Disjunction(P.n, tuple(fix_rows(P.n, {j: 1}) for j in J))


@dataclass(frozen=True)
class LandPResult:
    member: bool
    certificates: Tuple[Tuple[int, MembershipCertificate], ...]
    failing: Optional[int] = None

    def __bool__(self):
        return self.member


def landp_member(P: BoxPolytope, B: Optional[Iterable[int]], x: Sequence,
                 stop_at_first: bool = True) -> LandPResult:
    """Intersection of the variable-disjunction hulls over ``B`` (default: P.binary)."""
    B = sorted(P.binary if B is None else set(B))
    if any(not 0 <= v <= 1 for v in map(frac, x)):
        raise ValueError("point lies outside the unit box")
    Q = P.with_binary(set(B) | P.binary)
    certs = []
    failing = None
    for j in B:
        c = hull_member(Q, variable_disjunction(Q, j), x)
        certs.append((j, c))
        if not c.member and failing is None:
            failing = j
            if stop_at_first:
                break
    if not B and not P.contains(x):
        # with no disjunctions the closure is P itself
        return LandPResult(False, (), None)
    return LandPResult(failing is None, tuple(certs), failing)
