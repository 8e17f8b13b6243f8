"""Small exact linear-algebra helpers over ``Fraction``.

Everything here is written for desk-scale systems (tens to a few hundred
unknowns) and never rounds.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence

Vector = Sequence[Fraction]


class SingularSystemError(ValueError):
    pass


def dot(a: Vector, b: Vector) -> Fraction:
    return sum((x * y for x, y in zip(a, b) if x and y), Fraction(0))


def solve_sparse(rows: List[Dict[int, Fraction]], rhs: List[Fraction],
                 unknowns: Sequence[int]) -> Dict[int, Fraction]:
    """Solve a square sparse system ``rows[i] . u = rhs[i]``.

    ``rows`` map unknown ids to coefficients; only ids listed in
    ``unknowns`` may appear.  Raises ``SingularSystemError`` when the
    system has no unique solution.
    """
    if len(rows) != len(unknowns):
        raise SingularSystemError("system is not square")
    work = [(dict(r), Fraction(b)) for r, b in zip(rows, rhs)]
    order = []  # (pivot unknown, row) in elimination order
    active = list(range(len(work)))
    while active:
        # sparsest row first keeps fill-in low
        best = min(active, key=lambda i: (len(work[i][0]), i))
        row, b = work[best]
        if not row:
            raise SingularSystemError("singular system")
        piv = min(row, key=lambda j: (len(_column_hits(work, active, j)), j))
        active.remove(best)
        p = row[piv]
        for i in active:
            other, ob = work[i]
            f = other.get(piv)
            if not f:
                continue
            f = f / p
            for j, v in row.items():
                nv = other.get(j, 0) - f * v
                if nv:
                    other[j] = nv
                else:
                    other.pop(j, None)
            work[i] = (other, ob - f * b)
        order.append((piv, best))
    sol: Dict[int, Fraction] = {}
    for piv, i in reversed(order):
        row, b = work[i]
        acc = b
        for j, v in row.items():
            if j != piv:
                acc -= v * sol[j]
        sol[piv] = acc / row[piv]
    return sol


def _column_hits(work, active, j):
    return [i for i in active if j in work[i][0]]


def rref(matrix: Iterable[Sequence[Fraction]], ncols: int):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    rows = [list(map(Fraction, r)) for r in matrix]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        p = rows[r][c]
        rows[r] = [v / p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(matrix: Iterable[Sequence[Fraction]], ncols: int) -> int:
    return len(rref(matrix, ncols)[1])


def nullspace(matrix: Iterable[Sequence[Fraction]], ncols: int) -> List[List[Fraction]]:
    """Basis of ``{v : M v = 0}``."""
    rows, pivots = rref(matrix, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(rows, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve_dense(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Unique solution of a square dense system, or ``None`` if singular."""
    n = len(matrix)
    aug = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(matrix, rhs)]
    rows, pivots = rref(aug, n)
    if len(pivots) < n:
        return None
    return [rows[i][n] for i in range(n)]


def primitive(vec: Sequence[Fraction]) -> List[Fraction]:
    """Scale a rational vector to coprime integers, keeping its direction."""
    from math import gcd, lcm

    nz = [v for v in vec if v != 0]
    if not nz:
        return [Fraction(0)] * len(vec)
    den = lcm(*(v.denominator for v in nz))
    ints = [int(v * den) for v in vec]
    g = gcd(*ints)
    return [Fraction(v // g) for v in ints]
