"""Linear relaxations of the quadratic assignment problem.

Variables are ``x{i}_{j}`` (assignment), ``y{i}_{j}_{k}_{l}`` (standing for
``x_ij x_kl``) and ``w{i}_{j}`` (standing for ``x_ij * sum_kl q_ijkl x_kl``).
All indices are 0-based.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import lp
from .lp import LinearSystem, Row, frac
from .polytope import BoxPolytope, birkhoff

MAX_N = 4

Index4 = Tuple[int, int, int, int]


@dataclass(frozen=True)
class QapInstance:
    n: int
    q: Tuple[Fraction, ...]  # row-major over (i, j, k, l)

    def __post_init__(self):
        q = tuple(frac(v) for v in self.q)
        if self.n < 1:
            raise ValueError("instance size must be positive")
        if len(q) != self.n ** 4:
            raise ValueError(f"expected {self.n ** 4} cost entries, got {len(q)}")
        if any(v < 0 for v in q):
            raise ValueError("costs must be nonnegative")
        object.__setattr__(self, "q", q)

    def cost(self, i: int, j: int, k: int, l: int) -> Fraction:
        n = self.n
        return self.q[((i * n + j) * n + k) * n + l]

    def a(self, i: int, j: int) -> Fraction:
        n = self.n
        return sum((self.cost(i, j, k, l) for k in range(n) for l in range(n)), Fraction(0))

    @classmethod
    def from_function(cls, n: int, f) -> "QapInstance":
        return cls(n, tuple(frac(f(i, j, k, l)) for i, j, k, l in itertools.product(range(n), repeat=4)))

    @classmethod
    def random(cls, n: int, rng: random.Random, high: int = 5) -> "QapInstance":
        return cls(n, tuple(Fraction(rng.randint(0, high)) for _ in range(n ** 4)))


def _guard(n: int) -> None:
    if n > MAX_N:
        raise ValueError(f"QAP models are limited to n <= {MAX_N}, got {n}")


def x_name(i: int, j: int) -> str:
    return f"x{i}_{j}"


def y_name(i: int, j: int, k: int, l: int) -> str:
    return f"y{i}_{j}_{k}_{l}"


def w_name(i: int, j: int) -> str:
    return f"w{i}_{j}"


def assignment_polytope(n: int) -> BoxPolytope:
    return birkhoff(n)


@dataclass(frozen=True)
class QapLpModel:
    name: str
    system: LinearSystem
    objective: Tuple[Fraction, ...]
    n: int

    def index(self, name: str) -> int:
        return self.system.index(name)


class _Builder:
    def __init__(self, names: List[str]):
        self.names = names
        self.pos = {v: k for k, v in enumerate(names)}
        self.rows: List[Row] = []

    def add(self, terms: Dict[str, Fraction], rel: str, rhs, label: str):
        t: Dict[int, Fraction] = {}
        for name, v in terms.items():
            p = self.pos[name]
            t[p] = t.get(p, 0) + frac(v)
        self.rows.append(Row.sparse(len(self.names), t, rel, rhs, label))


def _assignment_rows(b: _Builder, n: int) -> None:
    for i in range(n):
        b.add({x_name(i, j): 1 for j in range(n)}, "=", 1, f"assign-row{i}")
    for j in range(n):
        b.add({x_name(i, j): 1 for i in range(n)}, "=", 1, f"assign-col{j}")


def _pairs(n: int):
    return list(itertools.product(range(n), repeat=2))


def build_adams_johnson(inst: QapInstance) -> QapLpModel:
    n = inst.n
    _guard(n)
    P = _pairs(n)
    names = [x_name(*a) for a in P] + [y_name(*a, *b) for a in P for b in P] + [w_name(*a) for a in P]
    b = _Builder(names)
    _assignment_rows(b, n)
    for j, (k, l) in itertools.product(range(n), P):
        b.add({y_name(i, j, k, l): 1 for i in range(n)} | {x_name(k, l): -1}, "=", 0, f"colsum:{j},{k},{l}")
    for i, (k, l) in itertools.product(range(n), P):
        b.add({y_name(i, j, k, l): 1 for j in range(n)} | {x_name(k, l): -1}, "=", 0, f"rowsum:{i},{k},{l}")
    for i, j in P:
        b.add({y_name(i, j, i, j): 1, x_name(i, j): -1}, "=", 0, f"diag:{i},{j}")
    for a, c in itertools.combinations(P, 2):
        b.add({y_name(*a, *c): 1, y_name(*c, *a): -1}, "=", 0, f"sym:{a},{c}")
    for i, j in P:
        t = {y_name(i, j, k, l): inst.cost(i, j, k, l) for k, l in P if inst.cost(i, j, k, l)}
        t[w_name(i, j)] = Fraction(-1)
        b.add(t, "=", 0, f"wdef:{i},{j}")
    nx = n * n
    bounds = [(Fraction(0), None)] * (nx + nx * nx) + [(None, None)] * nx
    obj = [Fraction(0)] * (nx + nx * nx) + [Fraction(1)] * nx
    return QapLpModel("AJ", LinearSystem(tuple(names), tuple(b.rows), tuple(bounds)), tuple(obj), n)


def build_kaufman_broeckx(inst: QapInstance) -> QapLpModel:
    """Assignment rows, ``w >= 0`` and ``w_ij >= a_ij (x_ij - 1) + sum q_ijkl x_kl``."""
    n = inst.n
    _guard(n)
    P = _pairs(n)
    names = [x_name(*a) for a in P] + [w_name(*a) for a in P]
    b = _Builder(names)
    _assignment_rows(b, n)
    for i, j in P:
        t: Dict[str, Fraction] = {x_name(i, j): inst.a(i, j)}
        for k, l in P:
            c = inst.cost(i, j, k, l)
            if c:
                t[x_name(k, l)] = t.get(x_name(k, l), 0) + c
        t[w_name(i, j)] = Fraction(-1)
        b.add(t, "<=", inst.a(i, j), f"kb:{i},{j}")
    nx = n * n
    bounds = [(Fraction(0), None)] * (2 * nx)
    obj = [Fraction(0)] * nx + [Fraction(1)] * nx
    return QapLpModel("KB", LinearSystem(tuple(names), tuple(b.rows), tuple(bounds)), tuple(obj), n)


def build_column_kb(inst: QapInstance) -> QapLpModel:
    """Kaufman-Broeckx rows summed over each column: one coupling row per ``j``."""
    n = inst.n
    _guard(n)
    P = _pairs(n)
    names = [x_name(*a) for a in P] + [w_name(*a) for a in P]
    b = _Builder(names)
    _assignment_rows(b, n)
    for j in range(n):
        t: Dict[str, Fraction] = {}
        rhs = Fraction(0)
        for i in range(n):
            t[x_name(i, j)] = t.get(x_name(i, j), 0) + inst.a(i, j)
            rhs += inst.a(i, j)
            for k, l in P:
                c = inst.cost(i, j, k, l)
                if c:
                    t[x_name(k, l)] = t.get(x_name(k, l), 0) + c
            t[w_name(i, j)] = Fraction(-1)
        b.add(t, "<=", rhs, f"colkb:{j}")
    nx = n * n
    bounds = [(Fraction(0), None)] * (2 * nx)
    obj = [Fraction(0)] * nx + [Fraction(1)] * nx
    return QapLpModel("KBcol", LinearSystem(tuple(names), tuple(b.rows), tuple(bounds)), tuple(obj), n)


BUILDERS = {"AJ": build_adams_johnson, "KB": build_kaufman_broeckx, "KBcol": build_column_kb}


def solve_model(model: QapLpModel, row_order: Optional[Sequence[int]] = None) -> lp.Optimal:
    system = model.system
    if row_order is not None:
        system = LinearSystem(system.variables, [system.rows[r] for r in row_order], system.bounds)
    out = lp.solve(system, model.objective, "min")
    if not isinstance(out, lp.Optimal):
        raise AssertionError(f"{model.name} relaxation did not reach an optimum: {type(out).__name__}")
    return out


def lp_bound(model: QapLpModel) -> Fraction:
    return solve_model(model).value


def permutation_cost(inst: QapInstance, perm: Sequence[int]) -> Fraction:
    n = inst.n
    return sum((inst.cost(i, perm[i], k, perm[k]) for i in range(n) for k in range(n)), Fraction(0))


def qap_optimum(inst: QapInstance) -> Tuple[Fraction, Tuple[int, ...]]:
    """Brute force over all permutations; ties go to the lexicographically first."""
    best = None
    for perm in itertools.permutations(range(inst.n)):
        c = permutation_cost(inst, perm)
        if best is None or c < best[0]:
            best = (c, perm)
    return best


def permutation_point(inst: QapInstance, perm: Sequence[int], model: QapLpModel) -> Tuple[Fraction, ...]:
    """The model variables at the 0/1 solution of ``perm``, with products and exact ``w``."""
    n = inst.n
    X = {(i, j): Fraction(int(perm[i] == j)) for i, j in _pairs(n)}
    v = [Fraction(0)] * model.system.n
    for name_idx, name in enumerate(model.system.variables):
        parts = name[1:].split("_")
        idx = tuple(int(p) for p in parts)
        if name[0] == "x":
            v[name_idx] = X[idx]
        elif name[0] == "y":
            v[name_idx] = X[idx[:2]] * X[idx[2:]]
        else:
            i, j = idx
            v[name_idx] = X[i, j] * sum((inst.cost(i, j, k, l) * X[k, l] for k, l in _pairs(n)), Fraction(0))
    return tuple(v)


@dataclass(frozen=True)
class AjSolution:
    x: Dict[Tuple[int, int], Fraction]
    y: Dict[Index4, Fraction]
    w: Dict[Tuple[int, int], Fraction]


def aj_solution(model: QapLpModel, point: Sequence[Fraction]) -> AjSolution:
    n = model.n
    P = _pairs(n)
    get = lambda name: frac(point[model.index(name)])
    return AjSolution({a: get(x_name(*a)) for a in P},
                      {a + b: get(y_name(*a, *b)) for a in P for b in P},
                      {a: get(w_name(*a)) for a in P})


@dataclass(frozen=True)
class DecompositionWitness:
    column: int
    support: Tuple[int, ...]
    weights: Dict[int, Fraction]
    xbar: Dict[int, Dict[Tuple[int, int], Fraction]]
    vbar: Dict[int, Tuple[Fraction, ...]]


class DecompositionError(AssertionError):
    pass


def decompose_aj_column(inst: QapInstance, sol: AjSolution, j: int) -> DecompositionWitness:
    """Split column ``j`` of an AJ solution into assignment points with their ``w``."""
    n = inst.n
    P = _pairs(n)
    model = build_adams_johnson(inst)
    full = [Fraction(0)] * model.system.n
    for a in P:
        full[model.index(x_name(*a))] = sol.x[a]
        full[model.index(w_name(*a))] = sol.w[a]
        for b in P:
            full[model.index(y_name(*a, *b))] = sol.y[a + b]
    if not lp.is_feasible_point(model.system, full):
        raise DecompositionError("input is not feasible for the AJ model")
    support = tuple(i for i in range(n) if sol.x[i, j] > 0)
    weights = {i: sol.x[i, j] for i in support}
    xbar, vbar = {}, {}
    for i in support:
        xb = {(k, l): sol.y[i, j, k, l] / sol.x[i, j] for k, l in P}
        v = [Fraction(0)] * n
        v[i] = sol.w[i, j] / sol.x[i, j]
        xbar[i], vbar[i] = xb, tuple(v)
    wit = DecompositionWitness(j, support, weights, xbar, vbar)
    check_decomposition(inst, sol, wit)
    return wit


def check_decomposition(inst: QapInstance, sol: AjSolution, wit: DecompositionWitness) -> None:
    n = inst.n
    P = _pairs(n)
    j = wit.column
    if any(w <= 0 for w in wit.weights.values()) or sum(wit.weights.values()) != 1:
        raise DecompositionError("weights are not a convex combination")
    for i in wit.support:
        xb = wit.xbar[i]
        if any(xb[a] < 0 for a in P):
            raise DecompositionError(f"xbar[{i}] has a negative entry")
        if any(sum(xb[r, c] for c in range(n)) != 1 for r in range(n)) or \
                any(sum(xb[r, c] for r in range(n)) != 1 for c in range(n)):
            raise DecompositionError(f"xbar[{i}] is not doubly stochastic")
        if xb[i, j] != 1:
            raise DecompositionError(f"xbar[{i}] does not assign {i} to {j}")
        v = wit.vbar[i]
        if v[i] != sum((inst.cost(i, j, k, l) * xb[k, l] for k, l in P), Fraction(0)):
            raise DecompositionError(f"vbar[{i}] does not match the cost of xbar[{i}]")
        if any(v[r] for r in range(n) if r != i):
            raise DecompositionError(f"vbar[{i}] has stray entries")
    for a in P:
        if sum((wit.weights[i] * wit.xbar[i][a] for i in wit.support), Fraction(0)) != sol.x[a]:
            raise DecompositionError(f"combination misses x{a}")
    for r in range(n):
        if sum((wit.weights[i] * wit.vbar[i][r] for i in wit.support), Fraction(0)) != sol.w[r, j]:
            raise DecompositionError(f"combination misses w({r},{j})")


def xw_point(model: QapLpModel, sol: AjSolution) -> Tuple[Fraction, ...]:
    """Restrict an AJ solution to the ``(x, w)`` variables of another model."""
    v = []
    for name in model.system.variables:
        idx = tuple(int(p) for p in name[1:].split("_"))
        v.append(sol.x[idx] if name[0] == "x" else sol.w[idx])
    return tuple(v)


def aj_xy_rows(inst_n: int) -> LinearSystem:
    """AJ rows that only involve ``x`` and ``y``, with nonnegativity as rows."""
    model = build_adams_johnson(QapInstance(inst_n, (0,) * inst_n ** 4))
    nx = inst_n * inst_n
    keep = nx + nx * nx
    names = model.system.variables[:keep]
    rows = [Row(r.coef[:keep], r.rel, r.rhs, r.label) for r in model.system.rows
            if not r.label.startswith("wdef")]
    rows += [Row.sparse(keep, {k: 1}, ">=", 0, f"nonneg:{names[k]}") for k in range(keep)]
    return LinearSystem(names, rows)


def rlt_rows_in_aj_space(n: int) -> LinearSystem:
    """Weak RLT of the assignment polytope, renamed onto the AJ variables.

    RLT product ``y{a}_{b}`` (row index ``a``, multiplier ``b``) becomes AJ's
    ``y{i}_{j}_{k}_{l}`` with ``a = i*n+j`` and ``b = k*n+l``.
    """
    from .rlt import ClosureVariant, build_rlt_ef

    L = build_rlt_ef(assignment_polytope(n), ClosureVariant.WEAK)
    target = aj_xy_rows(n).variables
    tpos = {v: k for k, v in enumerate(target)}
    src = L.system.variables
    mapping = []
    for name in src:
        if name.startswith("y"):
            a, b = (int(t) for t in name[1:].split("_"))
            mapping.append(tpos[y_name(a // n, a % n, b // n, b % n)])
        else:
            mapping.append(tpos[name])
    rows = []
    for r in L.system.rows:
        coef = [Fraction(0)] * len(target)
        for k, a in enumerate(r.coef):
            if a:
                coef[mapping[k]] += a
        rows.append(Row(tuple(coef), r.rel, r.rhs, r.label))
    return LinearSystem(target, rows)
