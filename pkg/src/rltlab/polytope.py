"""0/1-box polytopes with a binary index set, and small-scale V/H conversion."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import lp
from .linalg import nullspace, primitive, rref
from .lp import LinearSystem, Row, frac

Point = Tuple[Fraction, ...]

MAX_VERTEX_DIM = 9
MAX_HULL_DIM = 6


@dataclass(frozen=True)
class BoxPolytope:
    """Rows over ``n`` variables intersected with ``[0,1]^n``.

    The box rows are implicit: ``rows`` holds only the explicit constraints,
    while ``system()`` and everything built on it include ``x_i >= 0`` and
    ``x_i <= 1`` for every coordinate.
    """
    n: int
    binary: FrozenSet[int]
    rows: Tuple[Row, ...] = ()
    names: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "binary", frozenset(self.binary))
        object.__setattr__(self, "rows", tuple(self.rows))
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))
            if len(self.names) != self.n:
                raise ValueError("names length does not match dimension")
        bad = [i for i in self.binary if not 0 <= i < self.n]
        if bad:
            raise ValueError(f"binary indices {sorted(bad)} outside 0..{self.n - 1}")
        for r in self.rows:
            if len(r.coef) != self.n:
                raise ValueError(f"row width {len(r.coef)} does not match dimension {self.n}")

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.names if self.names is not None else tuple(f"x{i}" for i in range(self.n))

    def box_rows(self) -> List[Row]:
        out = []
        for i in range(self.n):
            out.append(Row.sparse(self.n, {i: 1}, ">=", 0, f"box:{i}>=0"))
            out.append(Row.sparse(self.n, {i: 1}, "<=", 1, f"box:{i}<=1"))
        return out

    def all_rows(self) -> List[Row]:
        """Explicit rows followed by the box rows."""
        return list(self.rows) + self.box_rows()

    def system(self) -> LinearSystem:
        return LinearSystem(self.variables, self.all_rows())

    def contains(self, x: Sequence) -> bool:
        x = [frac(v) for v in x]
        if len(x) != self.n:
            raise ValueError(f"point has dimension {len(x)}, polytope has {self.n}")
        return all(0 <= v <= 1 for v in x) and all(r.holds(x) for r in self.rows)

    def with_rows(self, rows: Iterable[Row]) -> "BoxPolytope":
        return BoxPolytope(self.n, self.binary, self.rows + tuple(rows), self.names)

    def with_binary(self, binary: Iterable[int]) -> "BoxPolytope":
        return BoxPolytope(self.n, frozenset(binary), self.rows, self.names)

    def is_empty(self) -> bool:
        return lp.find_point(self.system()) is None


def cube(n: int, binary: Optional[Iterable[int]] = None) -> BoxPolytope:
    return BoxPolytope(n, frozenset(range(n) if binary is None else binary))


def birkhoff(n: int) -> BoxPolytope:
    """Doubly stochastic ``n x n`` matrices, variable ``i*n+j`` for entry (i, j)."""
    N = n * n
    rows = []
    for i in range(n):
        rows.append(Row.sparse(N, {i * n + j: 1 for j in range(n)}, "=", 1, f"row{i}"))
    for j in range(n):
        rows.append(Row.sparse(N, {i * n + j: 1 for i in range(n)}, "=", 1, f"col{j}"))
    names = tuple(f"x{i}_{j}" for i in range(n) for j in range(n))
    return BoxPolytope(N, frozenset(range(N)), tuple(rows), names)


def complement(P: BoxPolytope, k: int) -> BoxPolytope:
    """Substitute ``x_k -> 1 - x_k`` in every row."""
    if not 0 <= k < P.n:
        raise IndexError(f"index {k} outside 0..{P.n - 1}")
    rows = []
    for r in P.rows:
        a = list(r.coef)
        ak = a[k]
        a[k] = -ak
        rows.append(Row(tuple(a), r.rel, r.rhs - ak, r.label))
    return BoxPolytope(P.n, P.binary, tuple(rows), P.names)


def complement_point(x: Sequence, ks: Iterable[int]) -> Point:
    x = [frac(v) for v in x]
    for k in ks:
        x[k] = 1 - x[k]
    return tuple(x)


class InvalidFaceError(ValueError):
    pass


def face(P: BoxPolytope, a: Sequence, beta) -> BoxPolytope:
    """``{x in P : a.x = beta}`` for an inequality ``a.x <= beta`` valid on P."""
    row = Row(tuple(frac(v) for v in a), "<=", frac(beta), "face")
    if len(row.coef) != P.n:
        raise ValueError("face normal has the wrong dimension")
    try:
        valid = lp.is_redundant(P.system(), row).redundant
    except lp.InfeasibleSystemError:
        valid = True
    if not valid:
        raise InvalidFaceError(f"{row} is not valid for the polytope")
    return P.with_rows([Row(row.coef, "=", row.rhs, "face")])


def vertices(P: BoxPolytope, max_dim: int = MAX_VERTEX_DIM) -> List[Point]:
    """All vertices, sorted lexicographically, by enumerating tight row sets."""
    if P.n > max_dim:
        raise ValueError(f"vertex enumeration is limited to {max_dim} variables, got {P.n}")
    n = P.n
    eqs = [(list(r.coef), r.rhs) for r in P.rows if r.rel == "="]
    ineqs = [(list(r.coef), r.rhs) for r in (x.as_le() for x in P.all_rows()) if r.rel == "<="]
    eq_rows, eq_piv = rref([c + [b] for c, b in eqs], n + 1)
    if n in eq_piv:
        return []
    k = n - len(eq_piv)
    found = set()
    for combo in itertools.combinations(range(len(ineqs)), k):
        mat = eq_rows + [ineqs[i][0] + [ineqs[i][1]] for i in combo]
        red, piv = rref(mat, n + 1)
        if len(piv) != n or n in piv:
            continue
        x = tuple(red[i][n] for i in range(n))
        if P.contains(x) and all(Row(tuple(c), "=", b).holds(x) for c, b in eqs):
            found.add(x)
    return sorted(found)


def _affine_equalities(V: Sequence[Point]) -> List[Tuple[List[Fraction], Fraction]]:
    n = len(V[0])
    diffs = [[a - b for a, b in zip(v, V[0])] for v in V[1:]]
    out = []
    for w in nullspace(diffs, n) if diffs else [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]:
        w = primitive(w)
        out.append((w, sum((a * b for a, b in zip(w, V[0])), Fraction(0))))
    return out


def _sparsest(f: List[Fraction], eqs) -> Tuple[Fraction, ...]:
    """Sparsest primitive form of ``f`` modulo the affine-hull equations."""
    n = len(f) - 1
    k = len(eqs)
    cands = [primitive(f)]
    for cols in itertools.combinations(range(n), k):
        mat = [[eqs[e][0][j] for e in range(k)] + [-f[j]] for j in cols]
        red, piv = rref(mat, k + 1)
        if len(piv) != k or k in piv:
            continue
        t = [red[i][k] for i in range(k)]
        g = list(f)
        for e, (w, b) in enumerate(eqs):
            for j in range(n):
                g[j] += t[e] * w[j]
            g[n] += t[e] * b
        if any(g[:n]):
            cands.append(primitive(g))
    return min((tuple(c) for c in cands),
               key=lambda c: (sum(1 for v in c[:-1] if v), sum(abs(v) for v in c), c))


def hull_from_vertices(V: Sequence[Sequence], binary: Optional[Iterable[int]] = None,
                       max_dim: int = MAX_HULL_DIM) -> BoxPolytope:
    """H-representation of ``conv(V)`` by facet search over vertex subsets.

    Equations describe the affine hull.  Each facet is reported in its
    sparsest primitive integer form modulo those equations, so ``x_i >= 0``
    stays ``-x_i <= 0`` rather than some combination with the equations.
    """
    if not V:
        raise ValueError("empty vertex list")
    pts = sorted({tuple(frac(v) for v in p) for p in V})
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise ValueError("vertices have mixed dimensions")
    if n > max_dim:
        raise ValueError(f"hull construction is limited to {max_dim} variables, got {n}")
    if any(not 0 <= v <= 1 for p in pts for v in p):
        raise ValueError("vertices must lie in the unit box")
    eqs = _affine_equalities(pts)
    dim = n - len(eqs)
    rows = [Row(tuple(w), "=", b, f"hull:eq{i}") for i, (w, b) in enumerate(eqs)]
    facets = set()
    if dim >= 1:
        normals = [w for w, _ in eqs]
        for sub in itertools.combinations(pts, dim):
            base = sub[0]
            cons = [[a - b for a, b in zip(v, base)] for v in sub[1:]] + normals
            ns = nullspace(cons, n)
            if len(ns) != 1:
                continue
            a = ns[0]
            beta = sum((x * y for x, y in zip(a, base)), Fraction(0))
            vals = [sum((x * y for x, y in zip(a, p)), Fraction(0)) for p in pts]
            if all(v <= beta for v in vals):
                pass
            elif all(v >= beta for v in vals):
                a, beta = [-x for x in a], -beta
            else:
                continue
            facets.add(_sparsest(list(a) + [beta], eqs))
    for i, f in enumerate(sorted(facets)):
        rows.append(Row(f[:-1], "<=", f[-1], f"hull:facet{i}"))
    return BoxPolytope(n, frozenset(range(n) if binary is None else binary), tuple(rows))


@dataclass(frozen=True)
class ConvMembership:
    member: bool
    multipliers: Optional[Tuple[Fraction, ...]] = None
    cut: Optional[Row] = None


def conv_member(V: Sequence[Sequence], p: Sequence) -> ConvMembership:
    """Decide ``p in conv(V)``; a separating ``a.x <= b`` comes from the Farkas row."""
    V = [tuple(frac(v) for v in q) for q in V]
    p = tuple(frac(v) for v in p)
    if not V:
        return ConvMembership(False)
    n = len(p)
    if any(len(v) != n for v in V):
        raise ValueError("dimension mismatch between vertices and point")
    m = len(V)
    rows = [Row(tuple(V[k][j] for k in range(m)), "=", p[j], f"coord{j}") for j in range(n)]
    rows.append(Row((Fraction(1),) * m, "=", Fraction(1), "sum"))
    system = LinearSystem(tuple(f"lam{k}" for k in range(m)), rows, ((Fraction(0), None),) * m)
    out = lp.solve(system)
    if isinstance(out, lp.Optimal):
        return ConvMembership(True, multipliers=out.x)
    u = out.multipliers
    # sum_j u_j v_j + u0 >= 0 on every vertex, sum_j u_j p_j + u0 < 0
    scaled = primitive([-v for v in u[:n]] + [u[n]])
    cut = Row(tuple(scaled[:n]), "<=", scaled[n], "separator")
    return ConvMembership(False, cut=cut)


def random_rational_point(rng: random.Random, n: int, max_den: int = 6) -> Point:
    out = []
    for _ in range(n):
        q = rng.randint(1, max_den)
        out.append(Fraction(rng.randint(0, q), q))
    return tuple(out)


def sample_points(P: BoxPolytope, rng: random.Random, count: int,
                  max_den: int = 6) -> List[Point]:
    """Box points plus random convex combinations of P's vertices."""
    pts = [random_rational_point(rng, P.n, max_den) for _ in range(count)]
    V = vertices(P) if P.n <= MAX_VERTEX_DIM else []
    if V:
        for _ in range(count):
            w = [Fraction(rng.randint(0, 4)) for _ in V]
            if not any(w):
                w[0] = Fraction(1)
            s = sum(w)
            pts.append(tuple(sum((wk * v[j] for wk, v in zip(w, V)), Fraction(0)) / s
                             for j in range(P.n)))
    return pts
