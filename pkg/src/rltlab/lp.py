"""Exact rational linear systems and a self-certifying LP solver.

Rows are ``coef . x  REL  rhs`` with ``REL`` one of ``<=``, ``=``, ``>=``.
Variables are free unless a bound is declared.  Certificates refer to the
rows exactly as the caller wrote them.  Row multipliers act on each row read
as ``<=`` (a ``>=`` row is negated first), so they are nonnegative on
inequalities and free on equations.  A variable has a single bound
multiplier: positive uses its upper bound, negative its lower bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from . import simplex

RELATIONS = ("<=", "=", ">=")

Number = Union[int, Fraction, str]


def frac(v: Number) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(v)


@dataclass(frozen=True)
class Row:
    coef: Tuple[Fraction, ...]
    rel: str
    rhs: Fraction
    label: str = ""

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")
        object.__setattr__(self, "coef", tuple(frac(v) for v in self.coef))
        object.__setattr__(self, "rhs", frac(self.rhs))

    @classmethod
    def sparse(cls, n: int, terms: Mapping[int, Number], rel: str, rhs: Number, label: str = ""):
        coef = [Fraction(0)] * n
        for j, v in terms.items():
            coef[j] += frac(v)
        return cls(tuple(coef), rel, frac(rhs), label)

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.coef, x) if a), Fraction(0))

    def holds(self, x: Sequence[Fraction]) -> bool:
        v = self.lhs(x)
        if self.rel == "<=":
            return v <= self.rhs
        if self.rel == ">=":
            return v >= self.rhs
        return v == self.rhs

    def negated(self) -> "Row":
        """The same constraint written with the opposite orientation."""
        flip = {"<=": ">=", ">=": "<=", "=": "="}[self.rel]
        return Row(tuple(-a for a in self.coef), flip, -self.rhs, self.label)

    def as_le(self) -> "Row":
        return self.negated() if self.rel == ">=" else self

    def bounds(self) -> Tuple[Optional[Fraction], Optional[Fraction]]:
        if self.rel == "<=":
            return None, self.rhs
        if self.rel == ">=":
            return self.rhs, None
        return self.rhs, self.rhs

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        names = names or [f"x{j}" for j in range(len(self.coef))]
        terms = " ".join(f"{'+' if a > 0 else '-'}{'' if abs(a) == 1 else abs(a)}{names[j]}"
                         for j, a in enumerate(self.coef) if a)
        return f"{terms or '0'} {self.rel} {self.rhs}"

    def __str__(self):
        return self.format()


BoundPair = Tuple[Optional[Fraction], Optional[Fraction]]


@dataclass(frozen=True)
class LinearSystem:
    variables: Tuple[str, ...]
    rows: Tuple[Row, ...]
    bounds: Optional[Tuple[BoundPair, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "rows", tuple(self.rows))
        n = len(self.variables)
        if len(set(self.variables)) != n:
            raise ValueError("duplicate variable names")
        for r in self.rows:
            if len(r.coef) != n:
                raise ValueError(f"row {r.label or r} has width {len(r.coef)}, expected {n}")
        if self.bounds is not None:
            b = tuple((None if lo is None else frac(lo), None if hi is None else frac(hi))
                      for lo, hi in self.bounds)
            if len(b) != n:
                raise ValueError("bounds length does not match variables")
            for j, (lo, hi) in enumerate(b):
                if lo is not None and hi is not None and lo > hi:
                    raise ValueError(f"bounds of {self.variables[j]} are inconsistent")
            object.__setattr__(self, "bounds", b)

    @property
    def n(self) -> int:
        return len(self.variables)

    def bound(self, j: int) -> BoundPair:
        return (None, None) if self.bounds is None else self.bounds[j]

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except AttributeError:
            object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.variables)})
            return self._index[name]

    def with_rows(self, rows: Iterable[Row]) -> "LinearSystem":
        return LinearSystem(self.variables, self.rows + tuple(rows), self.bounds)

    def with_bounds(self, updates: Mapping[int, BoundPair]) -> "LinearSystem":
        b = list(self.bounds or [(None, None)] * self.n)
        for j, pair in updates.items():
            b[j] = pair
        return LinearSystem(self.variables, self.rows, tuple(b))

    def fix(self, values: Mapping[int, Number]) -> "LinearSystem":
        return self.with_bounds({j: (frac(v), frac(v)) for j, v in values.items()})

    def bound_rows(self) -> List[Row]:
        """Declared variable bounds written out as ordinary rows."""
        out = []
        for j, (lo, hi) in enumerate(self.bounds or ()):
            e = {j: 1}
            if lo is not None and lo == hi:
                out.append(Row.sparse(self.n, e, "=", lo, f"bound:{self.variables[j]}"))
                continue
            if lo is not None:
                out.append(Row.sparse(self.n, e, ">=", lo, f"bound:{self.variables[j]}>="))
            if hi is not None:
                out.append(Row.sparse(self.n, e, "<=", hi, f"bound:{self.variables[j]}<="))
        return out


# ---------------------------------------------------------------------------
# outcomes


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    x: Tuple[Fraction, ...]
    duals: Tuple[Fraction, ...]
    bound_duals: Tuple[Fraction, ...]


@dataclass(frozen=True)
class Infeasible:
    multipliers: Tuple[Fraction, ...]
    bound_multipliers: Tuple[Fraction, ...]


@dataclass(frozen=True)
class Unbounded:
    x: Tuple[Fraction, ...]
    ray: Tuple[Fraction, ...]


LpOutcome = Union[Optimal, Infeasible, Unbounded]


class CertificateError(AssertionError):
    """Raised when a solver outcome fails its own exact verification."""


def _side(u: Fraction, lo: Optional[Fraction], hi: Optional[Fraction]) -> Optional[Fraction]:
    """Right-hand side used by multiplier ``u``; ``None`` if the sign is illegal."""
    if u > 0:
        return hi
    if u < 0:
        return lo
    return Fraction(0)


def aggregate(system: LinearSystem, multipliers: Sequence[Fraction],
              bound_multipliers: Optional[Sequence[Fraction]] = None):
    """Combine rows and bounds: returns ``(coef, rhs)`` of the implied ``<=``.

    Raises ``CertificateError`` if a multiplier sign is not allowed.
    """
    n = system.n
    coef = [Fraction(0)] * n
    rhs = Fraction(0)
    for u, row in zip(multipliers, system.rows):
        if not u:
            continue
        if u < 0 and row.rel != "=":
            raise CertificateError(f"negative multiplier {u} on inequality {row.label or row}")
        s = -u if row.rel == ">=" else u
        for j, a in enumerate(row.coef):
            if a:
                coef[j] += s * a
        rhs += s * row.rhs
    for j, u in enumerate(bound_multipliers or ()):
        if not u:
            continue
        lo, hi = system.bound(j)
        side = hi if u > 0 else lo
        if side is None:
            raise CertificateError(f"illegal bound multiplier on {system.variables[j]}")
        coef[j] += u
        rhs += u * side
    return coef, rhs


def check_farkas(system: LinearSystem, cert: Infeasible) -> None:
    coef, rhs = aggregate(system, cert.multipliers, cert.bound_multipliers)
    if any(coef) or not rhs < 0:
        raise CertificateError("Farkas aggregate is not 0 <= negative")


def is_feasible_point(system: LinearSystem, x: Sequence[Fraction]) -> bool:
    if not all(r.holds(x) for r in system.rows):
        return False
    for j, (lo, hi) in enumerate(system.bounds or ()):
        if (lo is not None and x[j] < lo) or (hi is not None and x[j] > hi):
            return False
    return True


def check_optimal(system: LinearSystem, objective: Sequence[Fraction], out: Optimal) -> None:
    if not is_feasible_point(system, out.x):
        raise CertificateError("optimal point is infeasible")
    coef, rhs = aggregate(system, out.duals, out.bound_duals)
    if list(coef) != [frac(c) for c in objective]:
        raise CertificateError("duals do not reproduce the objective")
    value = sum((frac(c) * v for c, v in zip(objective, out.x)), Fraction(0))
    if value != out.value or rhs != value:
        raise CertificateError("primal and dual values differ")


def check_unbounded(system: LinearSystem, objective: Sequence[Fraction], out: Unbounded) -> None:
    if not is_feasible_point(system, out.x):
        raise CertificateError("unbounded outcome carries an infeasible point")
    for row in system.rows:
        v = row.lhs(out.ray)
        lo, hi = row.bounds()
        if (lo is not None and v < 0) or (hi is not None and v > 0):
            raise CertificateError("ray leaves the recession cone")
    for j, (lo, hi) in enumerate(system.bounds or ()):
        if (lo is not None and out.ray[j] < 0) or (hi is not None and out.ray[j] > 0):
            raise CertificateError("ray violates a bound")
    if not sum((frac(c) * r for c, r in zip(objective, out.ray)), Fraction(0)) > 0:
        raise CertificateError("ray does not improve the objective")


# ---------------------------------------------------------------------------
# solving


def solve(system: LinearSystem, objective: Optional[Sequence[Number]] = None,
          sense: str = "max") -> LpOutcome:
    """Solve ``sense objective . x`` over ``system``; ``None`` means feasibility.

    Duals satisfy ``objective = aggregate(duals)`` with the aggregated
    right-hand side equal to the optimum.  For ``sense="min"`` they certify
    the maximum of ``-objective`` instead.
    """
    n = system.n
    if objective is not None:
        objective = [frac(c) for c in objective]
        if len(objective) != n:
            raise ValueError(f"objective has length {len(objective)}, system has {n} variables")
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    rows = [{j: a for j, a in enumerate(r.coef) if a} for r in system.rows]
    los, his = zip(*(r.bounds() for r in system.rows)) if system.rows else ((), ())
    clo = [system.bound(j)[0] for j in range(n)]
    chi = [system.bound(j)[1] for j in range(n)]
    if sense == "min" and objective is not None:
        inner = [-c for c in objective]
    else:
        inner = objective
    res = simplex.run(n, rows, los, his, clo, chi, inner)
    flip = [r.rel == ">=" for r in system.rows]
    if res.row_mult is not None:
        res.row_mult = [-u if f else u for u, f in zip(res.row_mult, flip)]
    if res.status == "infeasible":
        out: LpOutcome = Infeasible(tuple(res.row_mult), tuple(res.bound_mult))
        check_farkas(system, out)
        return out
    x = tuple(res.x)
    if res.status == "unbounded":
        out = Unbounded(x, tuple(res.ray))
        check_unbounded(system, inner, out)
        return out
    if objective is None:
        return Optimal(Fraction(0), x, tuple(res.row_mult), tuple(res.bound_mult))
    as_max = Optimal(_value(inner, x), x, tuple(res.row_mult), tuple(res.bound_mult))
    check_optimal(system, inner, as_max)
    if sense == "max":
        return as_max
    return Optimal(-as_max.value, x, as_max.duals, as_max.bound_duals)


def _value(c: Sequence[Fraction], x: Sequence[Fraction]) -> Fraction:
    return sum((a * v for a, v in zip(c, x) if a), Fraction(0))


def find_point(system: LinearSystem) -> Optional[Tuple[Fraction, ...]]:
    out = solve(system)
    return out.x if isinstance(out, Optimal) else None


# ---------------------------------------------------------------------------
# evaluation and redundancy


@dataclass(frozen=True)
class RowReport:
    label: str
    lhs: Fraction
    slack: Fraction
    satisfied: bool
    tight: bool


def evaluate(system: LinearSystem, point: Sequence[Number]) -> List[RowReport]:
    """Exact per-row slacks; ``<=``: rhs - lhs, ``>=``: lhs - rhs, ``=``: rhs - lhs."""
    if len(point) != system.n:
        raise ValueError(f"point has dimension {len(point)}, system has {system.n} variables")
    x = [frac(v) for v in point]
    out = []
    for row in system.rows:
        v = row.lhs(x)
        slack = v - row.rhs if row.rel == ">=" else row.rhs - v
        ok = slack == 0 if row.rel == "=" else slack >= 0
        out.append(RowReport(row.label, v, slack, ok, slack == 0))
    return out


@dataclass(frozen=True)
class Redundancy:
    """Outcome of a redundancy test.

    ``certificates`` holds one dual certificate per ``<=`` direction of the
    candidate (two for an equation): multipliers over the system's rows and
    bounds whose aggregate is the candidate's left-hand side with a right-hand
    side no larger than the candidate's.
    """
    redundant: bool
    certificates: Tuple[Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]], ...] = ()
    best: Tuple[Optional[Fraction], ...] = ()


class InfeasibleSystemError(ValueError):
    pass


def is_redundant(system: LinearSystem, candidate: Row) -> Redundancy:
    if len(candidate.coef) != system.n:
        raise ValueError("candidate row width does not match the system")
    directions = [candidate.as_le()] if candidate.rel != "=" else [
        Row(candidate.coef, "<=", candidate.rhs), Row(candidate.coef, ">=", candidate.rhs).negated()]
    certs, best = [], []
    for d in directions:
        out = solve(system, d.coef, "max")
        if isinstance(out, Infeasible):
            raise InfeasibleSystemError("base system is infeasible")
        if isinstance(out, Unbounded):
            return Redundancy(False, best=tuple(best) + (None,))
        best.append(out.value)
        if out.value > d.rhs:
            return Redundancy(False, best=tuple(best))
        certs.append((out.duals, out.bound_duals))
    return Redundancy(True, tuple(certs), tuple(best))


def implies(system: LinearSystem, rows: Iterable[Row]) -> bool:
    return all(is_redundant(system, r).redundant for r in rows)


# ---------------------------------------------------------------------------
# Fourier-Motzkin


class EliminationBudgetError(ValueError):
    pass


def fourier_motzkin_project(system: LinearSystem, keep: Iterable[Union[int, str]],
                            max_eliminations: int = 8, prune: bool = True) -> LinearSystem:
    """Project ``system`` onto the kept variables by Fourier-Motzkin elimination.

    Equations containing an eliminated variable are used for substitution
    first.  Generated rows that are implied by the others are pruned with an
    LP test when ``prune`` is set.  An infeasible input yields the single row
    ``0 <= -1``.
    """
    keep_idx = sorted({system.index(k) if isinstance(k, str) else int(k) for k in keep})
    elim = [j for j in range(system.n) if j not in keep_idx]
    if len(elim) > max_eliminations:
        raise EliminationBudgetError(f"{len(elim)} eliminations requested, budget {max_eliminations}")
    n = system.n
    eqs: List[Tuple[List[Fraction], Fraction]] = []
    ineqs: List[Tuple[List[Fraction], Fraction]] = []  # coef . x <= rhs
    for row in list(system.rows) + system.bound_rows():
        if row.rel == "=":
            eqs.append((list(row.coef), row.rhs))
        else:
            r = row.as_le()
            ineqs.append((list(r.coef), r.rhs))

    for j in elim:
        piv = next((e for e in eqs if e[0][j] != 0), None)
        if piv is not None:
            eqs.remove(piv)
            pc, pb = piv
            p = pc[j]

            def subst(c, b):
                f = c[j] / p
                if not f:
                    return c, b
                return [a - f * q for a, q in zip(c, pc)], b - f * pb

            eqs = [subst(c, b) for c, b in eqs]
            ineqs = [subst(c, b) for c, b in ineqs]
        else:
            pos = [(c, b) for c, b in ineqs if c[j] > 0]
            neg = [(c, b) for c, b in ineqs if c[j] < 0]
            new = [(c, b) for c, b in ineqs if c[j] == 0]
            for (pc, pb), (nc, nb) in itertools.product(pos, neg):
                fp, fn = -nc[j], pc[j]
                new.append(([fp * a + fn * q for a, q in zip(pc, nc)], fp * pb + fn * nb))
            ineqs = new
        ineqs, infeasible = _tidy(ineqs)
        eqs, eq_bad = _tidy_eqs(eqs)
        if infeasible or eq_bad:
            return _empty_projection(system, keep_idx)
        if prune:
            ineqs = _prune(n, eqs, ineqs)

    variables = tuple(system.variables[j] for j in keep_idx)
    rows = [Row(tuple(c[j] for j in keep_idx), "=", b, "fm:eq") for c, b in eqs]
    rows += [Row(tuple(c[j] for j in keep_idx), "<=", b, "fm") for c, b in ineqs]
    out = LinearSystem(variables, rows)
    if prune and find_point(out) is None:
        return _empty_projection(system, keep_idx)
    return out


def _empty_projection(system, keep_idx):
    k = len(keep_idx)
    return LinearSystem(tuple(system.variables[j] for j in keep_idx),
                        [Row((Fraction(0),) * k, "<=", Fraction(-1), "fm:infeasible")])


def _scaled_key(c, b):
    lead = next((abs(a) for a in c if a), None)
    if lead is None:
        return None
    return tuple(a / lead for a in c), b / lead


def _tidy(ineqs):
    seen: Dict[tuple, Fraction] = {}
    for c, b in ineqs:
        key = _scaled_key(c, b)
        if key is None:
            if b < 0:
                return [], True
            continue
        coef, rhs = key
        if coef not in seen or rhs < seen[coef]:
            seen[coef] = rhs
    return [(list(c), b) for c, b in seen.items()], False


def _tidy_eqs(eqs):
    out, keys = [], set()
    for c, b in eqs:
        if not any(c):
            if b != 0:
                return [], True
            continue
        lead = next(a for a in c if a)
        key = (tuple(a / lead for a in c), b / lead)
        if key not in keys:
            keys.add(key)
            out.append((c, b))
    return out, False


def _prune(n, eqs, ineqs):
    rows = [Row(tuple(c), "=", b) for c, b in eqs]
    kept = list(ineqs)
    i = 0
    while i < len(kept):
        others = [Row(tuple(c), "<=", b) for k, (c, b) in enumerate(kept) if k != i]
        base = LinearSystem(tuple(f"v{j}" for j in range(n)), rows + others)
        c, b = kept[i]
        try:
            red = is_redundant(base, Row(tuple(c), "<=", b)).redundant
        except InfeasibleSystemError:
            red = False
        if red:
            kept.pop(i)
        else:
            i += 1
    return kept
