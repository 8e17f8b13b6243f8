"""Exact bounded-variable simplex in dictionary form.

The engine works on ``lo <= a_r . x <= hi`` rows and ``lo <= x_j <= hi``
bounds (either side may be missing).  Every row gets a slack variable
``s_r = a_r . x``; basic variables are kept as integer rows with a
per-row positive denominator, so pivots only touch Python ints.

Phase 1 is the general-simplex feasibility check (violated basic variable
with the smallest id, eligible nonbasic with the smallest id).  Phase 2 is a
primal bounded simplex with Bland's rule.  Both terminate.

Columns of fixed nonbasic variables and rows of free basic variables carry
no information the pivoting needs, so they are dropped as soon as they
appear.  Primal values, Farkas rows and duals are rebuilt at the end from
the final basis by one exact sparse solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import solve_sparse

Bound = Optional[Fraction]


@dataclass
class EngineResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: Optional[List[Fraction]] = None
    # optimal: c = sum_r row_mult[r] a_r + bound_mult (duals)
    # infeasible: 0 = sum_r row_mult[r] a_r + bound_mult, aggregated rhs < 0
    row_mult: Optional[List[Fraction]] = None
    bound_mult: Optional[List[Fraction]] = None
    ray: Optional[List[Fraction]] = None
    pivots: int = 0


class _Engine:
    def __init__(self, n: int, rows: Sequence[Dict[int, Fraction]],
                 row_lo: Sequence[Bound], row_hi: Sequence[Bound],
                 col_lo: Sequence[Bound], col_hi: Sequence[Bound],
                 objective: Optional[Sequence[Fraction]]):
        m = len(rows)
        self.n, self.m = n, m
        self.a = [dict(r) for r in rows]
        self.scale: List[int] = []
        lo: List[Bound] = list(col_lo)
        hi: List[Bound] = list(col_hi)
        for r, coef in enumerate(self.a):
            k = lcm(*(v.denominator for v in coef.values())) if coef else 1
            self.scale.append(k)
            lo.append(None if row_lo[r] is None else row_lo[r] * k)
            hi.append(None if row_hi[r] is None else row_hi[r] * k)
        self.lo, self.hi = lo, hi

        val: List[Fraction] = []
        for j in range(n):
            if lo[j] is not None:
                val.append(Fraction(lo[j]))
            elif hi[j] is not None:
                val.append(Fraction(hi[j]))
            else:
                val.append(Fraction(0))
        for r, coef in enumerate(self.a):
            s = sum((v * val[j] for j, v in coef.items()), Fraction(0))
            val.append(s * self.scale[r])
        self.val = val

        self.cols: List[int] = [j for j in range(n) if not self._fixed(j)]
        self.fixed_nb: List[int] = [j for j in range(n) if self._fixed(j)]
        pos = {j: p for p, j in enumerate(self.cols)}
        self.basic: List[int] = []
        self.rows: List[List[int]] = []
        self.den: List[int] = []
        for r, coef in enumerate(self.a):
            k = self.scale[r]
            row = [0] * len(self.cols)
            for j, v in coef.items():
                p = pos.get(j)
                if p is not None:
                    row[p] = int(v * k)
            self.basic.append(n + r)
            self.rows.append(row)
            self.den.append(1)
        self.free_basic: List[int] = []

        self.c = None if objective is None else [Fraction(v) for v in objective]
        if self.c is not None:
            kz = lcm(*(v.denominator for v in self.c)) if self.c else 1
            self.zrow = [int(self.c[j] * kz) for j in self.cols]
            self.zden = kz
        self.pivots = 0

    # -- helpers -----------------------------------------------------------
    def _fixed(self, v: int) -> bool:
        return self.lo[v] is not None and self.lo[v] == self.hi[v]

    def _free(self, v: int) -> bool:
        return self.lo[v] is None and self.hi[v] is None

    def _can_increase(self, v: int) -> bool:
        return self.hi[v] is None or self.val[v] < self.hi[v]

    def _can_decrease(self, v: int) -> bool:
        return self.lo[v] is None or self.val[v] > self.lo[v]

    def _move(self, c: int, theta: Fraction) -> None:
        """Shift nonbasic column ``c`` by ``theta`` and update basic values."""
        if not theta:
            return
        val = self.val
        val[self.cols[c]] += theta
        for r, row in enumerate(self.rows):
            a = row[c]
            if a:
                val[self.basic[r]] += a * theta / self.den[r]

    def _pivot(self, l: int, e: int) -> None:
        self.pivots += 1
        prow, pd = self.rows[l], self.den[l]
        ple = prow[e]
        for r, row in enumerate(self.rows):
            if r == l:
                continue
            re = row[e]
            if not re:
                continue
            self.rows[r], self.den[r] = _combine(row, self.den[r], re, prow, pd, ple, e)
        if self.c is not None:
            re = self.zrow[e]
            if re:
                self.zrow, self.zden = _combine(self.zrow, self.zden, re, prow, pd, ple, e)
        new = [-v for v in prow]
        new[e] = pd
        self.rows[l], self.den[l] = _normalize(new, ple)

        leaving, entering = self.basic[l], self.cols[e]
        self.basic[l], self.cols[e] = entering, leaving
        if self._fixed(leaving):
            for row in self.rows:
                del row[e]
            if self.c is not None:
                del self.zrow[e]
            del self.cols[e]
            self.fixed_nb.append(leaving)
        if self._free(entering):
            del self.rows[l], self.den[l], self.basic[l]
            self.free_basic.append(entering)

    # -- phase 1 -----------------------------------------------------------
    def feasibility(self) -> Optional[Tuple[int, int]]:
        """Return ``None`` when feasible, else ``(basic var, direction)``."""
        val, lo, hi = self.val, self.lo, self.hi
        while True:
            best = None
            for r, b in enumerate(self.basic):
                v = val[b]
                if lo[b] is not None and v < lo[b]:
                    d = 1
                elif hi[b] is not None and v > hi[b]:
                    d = -1
                else:
                    continue
                if best is None or b < best[0]:
                    best = (b, r, d)
            if best is None:
                return None
            b, r, d = best
            row = self.rows[r]
            enter = None
            for c, xc in enumerate(self.cols):
                a = row[c]
                if not a:
                    continue
                if (a > 0) == (d > 0):
                    ok = self._can_increase(xc)
                else:
                    ok = self._can_decrease(xc)
                if ok and (enter is None or xc < self.cols[enter]):
                    enter = c
            if enter is None:
                return b, d
            target = lo[b] if d > 0 else hi[b]
            theta = (target - val[b]) * self.den[r] / row[enter]
            self._move(enter, theta)
            val[b] = Fraction(target)
            self._pivot(r, enter)

    # -- phase 2 -----------------------------------------------------------
    def optimize(self) -> Tuple[str, Optional[Tuple[int, int]]]:
        val, lo, hi = self.val, self.lo, self.hi
        while True:
            enter = None
            for c, xc in enumerate(self.cols):
                d = self.zrow[c]
                if (d > 0 and self._can_increase(xc)) or (d < 0 and self._can_decrease(xc)):
                    if enter is None or xc < self.cols[enter]:
                        enter = c
            if enter is None:
                return "optimal", None
            xc = self.cols[enter]
            delta = 1 if self.zrow[enter] > 0 else -1
            best = None  # (t, var id, row or None)
            if delta > 0 and hi[xc] is not None:
                best = (hi[xc] - val[xc], xc, None)
            elif delta < 0 and lo[xc] is not None:
                best = (val[xc] - lo[xc], xc, None)
            for r, row in enumerate(self.rows):
                a = row[enter]
                if not a:
                    continue
                rate = delta * a
                b = self.basic[r]
                if rate > 0 and hi[b] is not None:
                    t = (hi[b] - val[b]) * self.den[r] / rate
                elif rate < 0 and lo[b] is not None:
                    t = (lo[b] - val[b]) * self.den[r] / rate
                else:
                    continue
                if best is None or (t, b) < (best[0], best[1]):
                    best = (t, b, r)
            if best is None:
                return "unbounded", (xc, delta)
            t, b, r = best
            self._move(enter, delta * t)
            if r is None:
                continue
            val[b] = Fraction(hi[b] if delta * self.rows[r][enter] > 0 else lo[b])
            self._pivot(r, enter)

    # -- reconstruction ----------------------------------------------------
    def _partition(self):
        nonbasic = list(self.cols) + list(self.fixed_nb)
        nb_struct = [v for v in nonbasic if v < self.n]
        nb_slack = [v for v in nonbasic if v >= self.n]
        nb_set = set(nonbasic)
        basic_struct = [j for j in range(self.n) if j not in nb_set]
        return nb_struct, nb_slack, basic_struct

    def primal(self) -> List[Fraction]:
        nb_struct, nb_slack, basic_struct = self._partition()
        x = [Fraction(0)] * self.n
        for j in nb_struct:
            x[j] = self.val[j]
        nb_struct_set = set(nb_struct)
        rows, rhs = [], []
        for s in nb_slack:
            r = s - self.n
            coef = self.a[r]
            b = self.val[s] / self.scale[r]
            rows.append({j: v for j, v in coef.items() if j not in nb_struct_set})
            rhs.append(b - sum((v * x[j] for j, v in coef.items() if j in nb_struct_set), Fraction(0)))
        sol = solve_sparse(rows, rhs, basic_struct)
        for j in basic_struct:
            x[j] = sol[j]
        return x

    def express(self, g: Dict[int, Fraction]) -> Dict[int, Fraction]:
        """Coefficients t with ``sum_k t_k u_k = g`` over the nonbasic set.

        ``u_k`` is ``e_k`` for a structural and the unscaled row vector for a
        slack.
        """
        nb_struct, nb_slack, basic_struct = self._partition()
        cols: Dict[int, Dict[int, Fraction]] = {j: {} for j in basic_struct}
        for s in nb_slack:
            for j, v in self.a[s - self.n].items():
                if j in cols:
                    cols[j][s] = v
        t = solve_sparse([cols[j] for j in basic_struct],
                         [g.get(j, Fraction(0)) for j in basic_struct], nb_slack)
        for k in nb_struct:
            acc = g.get(k, Fraction(0))
            for s in nb_slack:
                v = self.a[s - self.n].get(k)
                if v:
                    acc -= t[s] * v
            t[k] = acc
        return t

    def split(self, t: Dict[int, Fraction]) -> Tuple[List[Fraction], List[Fraction]]:
        row_mult = [Fraction(0)] * self.m
        bound_mult = [Fraction(0)] * self.n
        for k, v in t.items():
            if k < self.n:
                bound_mult[k] = v
            else:
                row_mult[k - self.n] = v
        return row_mult, bound_mult

    def ray(self, c: int, delta: int) -> List[Fraction]:
        nb_struct, nb_slack, basic_struct = self._partition()
        r = [Fraction(0)] * self.n
        if c < self.n:
            r[c] = Fraction(delta)
        fixed = set(nb_struct)
        rows, rhs = [], []
        for s in nb_slack:
            coef = self.a[s - self.n]
            rows.append({j: v for j, v in coef.items() if j not in fixed})
            own = Fraction(delta) if s == c else Fraction(0)
            rhs.append(own - sum((v * r[j] for j, v in coef.items() if j in fixed), Fraction(0)))
        sol = solve_sparse(rows, rhs, basic_struct)
        for j in basic_struct:
            r[j] = sol[j]
        return r


def _normalize(row: List[int], den: int) -> Tuple[List[int], int]:
    if den < 0:
        row = [-v for v in row]
        den = -den
    g = gcd(den, *row)
    if g > 1:
        row = [v // g for v in row]
        den //= g
    return row, den


def _combine(row, rden, re, prow, pden, ple, e):
    new = [a * ple - re * b for a, b in zip(row, prow)]
    new[e] = re * pden
    return _normalize(new, rden * ple)


def run(n: int, rows: Sequence[Dict[int, Fraction]],
        row_lo: Sequence[Bound], row_hi: Sequence[Bound],
        col_lo: Sequence[Bound], col_hi: Sequence[Bound],
        objective: Optional[Sequence[Fraction]] = None) -> EngineResult:
    """Maximize ``objective . x`` (or just find a point when it is ``None``)."""
    if any(lo is not None and hi is not None and lo > hi for lo, hi in zip(col_lo, col_hi)):
        raise ValueError("variable with lower bound above upper bound")
    eng = _Engine(n, rows, row_lo, row_hi, col_lo, col_hi, objective)
    conflict = eng.feasibility()
    if conflict is not None:
        b, d = conflict
        g = dict(eng.a[b - n]) if b >= n else {b: Fraction(1)}
        t = eng.express(g)
        # d > 0: b stuck below lo.  multiplier -1 on b, +t_k on the others.
        sign = Fraction(d)
        t = {k: sign * v for k, v in t.items()}
        t[b] = -sign
        row_mult, bound_mult = eng.split(t)
        return EngineResult("infeasible", row_mult=row_mult, bound_mult=bound_mult,
                            pivots=eng.pivots)
    if objective is None:
        return EngineResult("optimal", x=eng.primal(), row_mult=[Fraction(0)] * eng.m,
                            bound_mult=[Fraction(0)] * n, pivots=eng.pivots)
    status, info = eng.optimize()
    x = eng.primal()
    if status == "unbounded":
        c, delta = info
        return EngineResult("unbounded", x=x, ray=eng.ray(c, delta), pivots=eng.pivots)
    t = eng.express({j: v for j, v in enumerate(eng.c) if v})
    row_mult, bound_mult = eng.split(t)
    return EngineResult("optimal", x=x, row_mult=row_mult, bound_mult=bound_mult,
                        pivots=eng.pivots)
