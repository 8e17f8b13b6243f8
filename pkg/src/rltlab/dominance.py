"""Which subset disjunctions are implied by the strong RLT closure.

Two directions are covered.  For a planted cardinality equation
``sum_{j in J} x_j = 1`` we replay, on sampled closure points, that their
liftings decompose into points of P with ``x_j = 1``.  For a pattern set
``X`` over ``D`` we test the unique-face condition (every pattern is the only
one on some cube facet) and, when it fails, build and verify an explicit
polytope with a strong-closure point outside the disjunctive hull.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import lp
from .disjunctive import (SubsetDisjunction, build_balas_ef, cardinality_disjunction, hull_member)
from .lp import Row, frac
from .polytope import BoxPolytope, complement, complement_point, hull_from_vertices
from .rlt import ClosureVariant, build_rlt_ef, closure_member, ef_point_holds, y_matrix, y_name

Pattern = Tuple[int, ...]

MAX_PATTERN_DIM = 5


# ---------------------------------------------------------------------------
# cardinality equations


@dataclass
class CardinalityReport:
    ok: bool
    points: int = 0
    failures: List[str] = field(default_factory=list)


def equation_valid(P: BoxPolytope, J: Sequence[int]) -> bool:
    row = Row.sparse(P.n, {j: 1 for j in J}, "=", 1)
    return lp.is_redundant(P.system(), row).redundant


def strong_ef_samples(P: BoxPolytope, rng: random.Random, trials: int):
    """EF points of the strong closure: LP optima and midpoints of consecutive optima."""
    L = build_rlt_ef(P, ClosureVariant.STRONG)
    pts = []
    for _ in range(trials):
        c = [Fraction(0)] * L.system.n
        for j in L.public:
            c[j] = Fraction(rng.randint(-5, 5))
        out = lp.solve(L.system, c, "max")
        if isinstance(out, lp.Optimal):
            pts.append(out.x)
    mids = [tuple((a + b) / 2 for a, b in zip(p, q)) for p, q in zip(pts, pts[1:])]
    return L, pts + mids


def verify_cardinality_dominance(P: BoxPolytope, J: Sequence[int], trials: int,
                                 rng: Optional[random.Random] = None) -> CardinalityReport:
    J = sorted(set(J))
    if not equation_valid(P, J):
        raise ValueError("the cardinality equation is not valid for the polytope")
    rng = rng or random.Random(0)
    disj = cardinality_disjunction(P, J)
    L, samples = strong_ef_samples(P, rng, trials)
    rep = CardinalityReport(True)
    names = L.system.variables
    for full in samples:
        if not all(r.holds(full) for r in L.system.rows):
            rep.failures.append("sample is not an EF point")
            continue
        x = tuple(full[j] for j in L.public)
        y = {(i, j): full[names.index(y_name(i, j))] for i in range(P.n) for j in range(P.n)}
        rep.points += 1
        msg = replay_cardinality_identity(P, J, x, y)
        if msg:
            rep.failures.append(msg)
        if not hull_member(P, disj, x).member:
            rep.failures.append(f"closure point {x} lies outside the cardinality hull")
    rep.ok = not rep.failures
    return rep


def replay_cardinality_identity(P: BoxPolytope, J: Sequence[int], x, y) -> Optional[str]:
    """Check ``sum_{j in J} y_{j,i} = x_i`` and the decomposition into ``z^j = y[:, j] / x_j``."""
    n = P.n
    for i in range(n):
        if sum((y[j, i] for j in J), Fraction(0)) != x[i]:
            return f"sum over J of y[j,{i}] differs from x_{i}"
    Jp = [j for j in J if x[j] > 0]
    for j in J:
        if x[j] == 0 and any(y[i, j] for i in range(n)):
            return f"column {j} of y is nonzero while x_{j} = 0"
    comb = [Fraction(0)] * n
    for j in Jp:
        z = tuple(y[i, j] / x[j] for i in range(n))
        if z[j] != 1 or not P.contains(z):
            return f"z^{j} is not a point of P with coordinate {j} equal to 1"
        for i in range(n):
            comb[i] += x[j] * z[i]
    if tuple(comb) != tuple(x):
        return "the z-points do not combine to x"
    return None


# ---------------------------------------------------------------------------
# unique-face condition


@dataclass(frozen=True)
class UniqueFaceReport:
    holds: bool
    witnesses: Optional[Dict[Pattern, int]] = None
    failing: Optional[Pattern] = None
    partners: Optional[Dict[int, Pattern]] = None


def _norm_patterns(X) -> List[Pattern]:
    pats = sorted({tuple(int(v) for v in p) for p in X})
    if not pats:
        raise ValueError("empty pattern set")
    d = len(pats[0])
    if any(len(p) != d or any(v not in (0, 1) for v in p) for p in pats):
        raise ValueError("patterns must be 0/1 vectors of one length")
    return pats


def check_unique_face_condition(X, D: Optional[Sequence[int]] = None) -> UniqueFaceReport:
    """Patterns are indexed by position ``0..|D|-1``; ``D`` only fixes the length."""
    pats = _norm_patterns(X)
    d = len(pats[0])
    if D is not None and len(D) != d:
        raise ValueError("pattern length does not match D")
    wit = {}
    for p in pats:
        for j in range(d):
            if [q for q in pats if q[j] == p[j]] == [p]:
                wit[p] = j
                break
        else:
            partners = {i: next(q for q in pats if q != p and q[i] == p[i]) for i in range(d)}
            return UniqueFaceReport(False, failing=p, partners=partners)
    return UniqueFaceReport(True, witnesses=wit)


# ---------------------------------------------------------------------------
# counterexample


@dataclass(frozen=True)
class Counterexample:
    patterns: Tuple[Pattern, ...]          # original coordinates
    flipped: Tuple[int, ...]               # complemented coordinates
    flipped_patterns: Tuple[Pattern, ...]  # where the failing pattern is all ones
    polytope: BoxPolytope                  # P(alpha) in flipped coordinates
    base: BoxPolytope                      # P(0) = conv of the flipped patterns
    eps: Fraction
    alpha: Fraction
    xhat: Tuple[Fraction, ...]
    yhat: Dict[Tuple[int, int], Fraction]
    choices: Dict[int, Tuple[Pattern, int]]  # i -> (xbar^(i), j(i))

    @property
    def d(self) -> int:
        return len(self.xhat)

    def original_polytope(self) -> BoxPolytope:
        P = self.polytope
        for k in self.flipped:
            P = complement(P, k)
        return P

    def original_point(self) -> Tuple[Fraction, ...]:
        return complement_point(self.xhat, self.flipped)


class ConditionHoldsError(ValueError):
    pass


def default_eps(d: int) -> Fraction:
    return Fraction(1, d * d + 1)


def build_counterexample(X, D: Optional[Sequence[int]] = None, xstar: Optional[Pattern] = None,
                         eps: Optional[Fraction] = None) -> Counterexample:
    pats = _norm_patterns(X)
    d = len(pats[0])
    if d > MAX_PATTERN_DIM:
        raise ValueError(f"pattern dimension is limited to {MAX_PATTERN_DIM}")
    rep = check_unique_face_condition(pats, D)
    if rep.holds:
        raise ConditionHoldsError("the unique-face condition holds; no counterexample exists")
    xstar = rep.failing if xstar is None else tuple(int(v) for v in xstar)
    if xstar not in pats:
        raise ValueError("failing point is not one of the patterns")
    for i in range(d):
        if not any(q != xstar and q[i] == xstar[i] for q in pats):
            raise ConditionHoldsError(f"pattern {xstar} is the only one with coordinate {i} = {xstar[i]}")
    eps = default_eps(d) if eps is None else frac(eps)
    if not (0 < eps < Fraction(1, d * d)):
        raise ValueError("eps must lie strictly between 0 and 1/|D|^2")
    flipped = tuple(k for k in range(d) if xstar[k] == 0)
    fl = sorted(tuple(1 - v if k in flipped else v for k, v in enumerate(p)) for p in pats)
    ones = (1,) * d
    base = hull_from_vertices(fl)
    alpha = eps / (1 + eps)
    P = base.with_rows([Row((Fraction(1),) * d, "<=", d - alpha, "sum-cut")])
    choices = {}
    for i in range(d):
        xbar = min(q for q in fl if q != ones and q[i] == 1)
        j = min(k for k in range(d) if xbar[k] == 0)
        choices[i] = (xbar, j)
    w0 = 1 - d * eps
    xhat = [w0 * 1 for _ in range(d)]
    yhat = {(a, b): w0 for a in range(d) for b in range(d)}
    for i in range(d):
        xbar = choices[i][0]
        for a in range(d):
            xhat[a] += eps * xbar[a]
            for b in range(d):
                yhat[a, b] += eps * xbar[a] * xbar[b]
    return Counterexample(tuple(pats), flipped, tuple(fl), P, base, eps, alpha,
                          tuple(Fraction(v) for v in xhat), yhat, choices)


@dataclass
class CounterexampleReport:
    ok: bool
    checks: Dict[str, bool]

    def failed(self) -> List[str]:
        return [k for k, v in self.checks.items() if not v]


def verify_counterexample(ce: Counterexample) -> CounterexampleReport:
    d = ce.d
    P = ce.polytope
    checks: Dict[str, bool] = {}
    checks["lifting satisfies the strong EF"] = ef_point_holds(P, ClosureVariant.STRONG, ce.xhat, ce.yhat)
    strong = closure_member(P, ClosureVariant.STRONG, ce.xhat)
    checks["strong closure member by LP"] = strong.member
    disj = SubsetDisjunction(tuple(range(d)), ce.flipped_patterns)
    hull = hull_member(P, disj, ce.xhat)
    checks["outside the disjunctive hull"] = not hull.member
    L = build_balas_ef(P, disj.expand(d))
    obj = [Fraction(0)] * L.system.n
    for j in L.public:
        obj[j] = Fraction(1)
    best = lp.solve(L.system, obj, "max")
    checks["hull satisfies sum <= |D| - 1"] = isinstance(best, lp.Optimal) and best.value <= d - 1
    checks["point has sum > |D| - 1"] = sum(ce.xhat) > d - 1
    frac_idx = [i for i in range(d) if 0 < ce.xhat[i] < 1]
    gap_ok, z_ok = True, True
    for i in frac_idx:
        j = ce.choices[i][1]
        gap_ok &= ce.xhat[i] - ce.yhat[j, i] >= ce.eps
        z_ok &= ce.yhat[j, i] / ce.xhat[i] <= 1 / (1 + ce.eps)
    checks["x_i - y_(j(i),i) >= eps"] = gap_ok
    checks["z(i,1)_(j(i)) <= 1/(1+eps)"] = z_ok
    zero = ce.base.with_rows([Row((Fraction(1),) * d, "<=", Fraction(d), "sum-cut")])
    checks["all-ones point is a member at alpha = 0"] = closure_member(zero, ClosureVariant.STRONG, (1,) * d).member
    checks["weak closure member (B = N)"] = closure_member(P, ClosureVariant.WEAK, ce.xhat).member
    if ce.flipped:
        Q = ce.original_polytope()
        checks["original coordinates: strong member"] = closure_member(Q, ClosureVariant.STRONG,
                                                                       ce.original_point()).member
        checks["original coordinates: outside hull"] = not hull_member(
            Q, SubsetDisjunction(tuple(range(d)), ce.patterns), ce.original_point()).member
    return CounterexampleReport(all(checks.values()), checks)


# ---------------------------------------------------------------------------
# exhaustive classification


@dataclass
class Classification:
    patterns: Tuple[Pattern, ...]
    holds: bool
    ok: bool
    detail: str


def _random_cut(rng: random.Random, d: int, pats: Sequence[Pattern]) -> Row:
    """A random inequality keeping at least one pattern feasible."""
    while True:
        a = [Fraction(rng.randint(-3, 3)) for _ in range(d)]
        if any(a):
            break
    vals = sorted(sum((x * p for x, p in zip(a, q)), Fraction(0)) for q in pats)
    lo, hi = vals[0], vals[-1]
    rhs = lo + (hi - lo) * Fraction(rng.randint(1, 4), 4)
    return Row(tuple(a), "<=", rhs, "random-cut")


def dominance_polytopes(pats: Sequence[Pattern], rng: random.Random, extra: int = 3) -> List[BoxPolytope]:
    base = hull_from_vertices(pats)
    out = [base]
    for _ in range(extra):
        out.append(base.with_rows([_random_cut(rng, len(pats[0]), pats)]))
    return out


def sampled_dominance(P: BoxPolytope, pats: Sequence[Pattern], rng: random.Random,
                      trials: int) -> Optional[str]:
    d = P.n
    disj = SubsetDisjunction(tuple(range(d)), tuple(pats))
    _, samples = strong_ef_samples(P, rng, trials)
    for full in samples:
        x = tuple(full[:d])
        if not hull_member(P, disj, x).member:
            return f"strong closure point {x} outside the hull"
    return None


def classify(pats: Sequence[Pattern], rng: random.Random, trials: int = 3) -> Classification:
    pats = tuple(_norm_patterns(pats))
    rep = check_unique_face_condition(pats)
    if rep.holds:
        for P in dominance_polytopes(pats, rng):
            msg = sampled_dominance(P, pats, rng, trials)
            if msg:
                return Classification(pats, True, False, msg)
        return Classification(pats, True, True, "sampled dominance")
    ce = build_counterexample(pats)
    res = verify_counterexample(ce)
    return Classification(pats, False, res.ok,
                          "counterexample verified" if res.ok else "failed: " + ", ".join(res.failed()))


def all_pattern_sets(d: int):
    cube = list(itertools.product((0, 1), repeat=d))
    for mask in range(1, 2 ** len(cube)):
        yield tuple(p for b, p in enumerate(cube) if mask >> b & 1)


def classify_all(d_max: int = 3, seed: int = 0, trials: int = 3) -> List[Classification]:
    if d_max > 3:
        raise ValueError("exhaustive classification is limited to |D| <= 3")
    rng = random.Random(seed)
    out = []
    for d in range(1, d_max + 1):
        for pats in all_pattern_sets(d):
            out.append(classify(pats, rng, trials))
    return out


# ---------------------------------------------------------------------------
# weak closure against cardinality hulls


@dataclass
class GapCandidate:
    polytope: BoxPolytope
    J: Tuple[int, ...]
    point: Tuple[Fraction, ...]
    weak_witness: Dict[str, Fraction]
    cut: Row


def planted_cardinality_polytope(rng: random.Random, n: int, J: Sequence[int],
                                 cuts: int = 2) -> BoxPolytope:
    """conv of random 0/1 points with exactly one 1 on J, cut by random rows.

    Each cut keeps at least one of the points, so the result is nonempty and
    the equation ``sum_J x = 1`` stays valid.
    """
    J = list(J)
    pts = set()
    for j in J:
        p = [rng.randint(0, 1) for _ in range(n)]
        for k in J:
            p[k] = int(k == j)
        pts.add(tuple(p))
    for _ in range(rng.randint(0, 3)):
        j = rng.choice(J)
        p = [rng.randint(0, 1) for _ in range(n)]
        for k in J:
            p[k] = int(k == j)
        pts.add(tuple(p))
    pts = sorted(pts)
    P = hull_from_vertices(pts, binary=range(n))
    keep = rng.choice(pts)
    rows = []
    for _ in range(cuts):
        r = _random_cut(rng, n, pts)
        if r.holds(keep):
            rows.append(r)
    return P.with_rows(rows)


def explore_weak_gap(seeds: Sequence[int], n_max: int = 4, trials: int = 3) -> List[GapCandidate]:
    """Random search for weak-closure points outside a cardinality hull.

    Nothing is claimed either way; any find comes with a weak-closure witness
    and a hull cut, both re-verified.
    """
    from .lifted import verify_certificate

    found = []
    for seed in seeds:
        rng = random.Random(seed)
        n = rng.randint(2, n_max)
        J = sorted(rng.sample(range(n), rng.randint(1, n)))
        P = planted_cardinality_polytope(rng, n, J)
        B = set(range(n)) if rng.random() < 0.5 else set(J)
        P = P.with_binary(B)
        disj = cardinality_disjunction(P, J)
        L = build_rlt_ef(P, ClosureVariant.WEAK)
        for _ in range(trials):
            c = [Fraction(0)] * L.system.n
            for j in L.public:
                c[j] = Fraction(rng.randint(-5, 5))
            out = lp.solve(L.system, c, "max")
            if not isinstance(out, lp.Optimal):
                continue
            x = tuple(out.x[j] for j in L.public)
            h = hull_member(P, disj, x)
            if h.member:
                continue
            w = closure_member(P, ClosureVariant.WEAK, x)
            if w.member and verify_certificate(build_balas_ef(P, disj), h):
                found.append(GapCandidate(P, tuple(J), x, w.witness, h.cut))
    return found
