"""The three worked examples shipped as fixtures, with their check bundles."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Callable, Dict, List, Tuple

from . import lp
from .characterization import derive_z, find_z
from .disjunctive import (SubsetDisjunction, cardinality_disjunction, hull_member,
                          landp_member)
from .dominance import verify_cardinality_dominance
from .io import polytope_from_dict
from .lifted import verify_certificate
from .lp import Row
from .polytope import BoxPolytope, sample_points
from .rlt import (ClosureVariant, build_rlt_ef, closure_member, ef_point_holds,
                  optimize_over_closure, y_matrix)

F = Fraction
WEAK, STRONG = ClosureVariant.WEAK, ClosureVariant.STRONG


def load_fixture(name: str) -> BoxPolytope:
    text = resources.files("rltlab").joinpath("data", f"{name}.json").read_text()
    return polytope_from_dict(json.loads(text))


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class FigureReport:
    figure: str
    checks: List[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))


def _implies_row(rows: List[Row], target: Row, n: int) -> bool:
    return lp.is_redundant(lp.LinearSystem(tuple(f"x{i}" for i in range(n)), tuple(rows)), target).redundant


def _fmt_z(z) -> str:
    if z is None:
        return "none"
    return "; ".join(f"z({i},{b}) = ({', '.join(map(str, p))})" for (i, b), p in sorted(z.items()))


def fig2() -> FigureReport:
    P = load_fixture("fig2")
    rep = FigureReport("fig2")
    L = build_rlt_ef(P, WEAK)
    top = F(1, 2), F(1)
    c = closure_member(P, WEAK, top)
    rep.add("weak closure excludes (1/2,1)", not c.member and verify_certificate(L, c),
            "" if c.member else f"cut {c.cut}")
    if not c.member:
        box = [Row.sparse(2, {i: 1}, "<=", 1) for i in range(2)] + [Row.sparse(2, {i: 1}, ">=", 0) for i in range(2)]
        rep.add("cut forces x1 <= 0 on the box", _implies_row([c.cut] + box, Row((F(0), F(1)), "<=", F(0)), 2),
                str(c.cut))
    for t in (F(0), F(1, 4), F(1, 2), F(1)):
        m = closure_member(P, WEAK, (t, F(0)))
        rep.add(f"weak closure contains ({t},0)", m.member and verify_certificate(L, m))
    m = closure_member(P, WEAK, (F(1, 2), F(0)))
    if m.member:
        y = y_matrix(P, WEAK, m.witness)
        rep.add("lifting of (1/2,0) is y00 = 1/2, y10 = 0", (y[0, 0], y[1, 0]) == (F(1, 2), F(0)))
        z = derive_z((F(1, 2), F(0)), y, P.binary)
        rep.add("derived z-points at (1/2,0) are (0,0) and (1,0)",
                z == {(0, 0): (F(0), F(0)), (0, 1): (F(1), F(0))})
    best = optimize_over_closure(P, WEAK, (0, 1))
    rep.add("max x1 over the weak closure is 0", best is not None and best[0] == 0)
    z4 = find_z(P, top, "iv")
    rep.add("equation conditions hold at (1/2,1) with z = (0,0), (1,0)",
            z4 == {(0, 0): (F(0), F(0)), (0, 1): (F(1), F(0))}, _fmt_z(z4))
    rep.add("convex conditions fail at (1/2,1)", find_z(P, top, "iii") is None)
    return rep


def _in_triangle(x) -> bool:
    return x[3] == 0 and x[0] + x[1] + x[2] == 1 and all(v >= 0 for v in x)


def fig3(trials: int = 8, samples: int = 12, seed: int = 0) -> FigureReport:
    P = load_fixture("fig3")
    rep = FigureReport("fig3")
    rng = random.Random(seed)
    xs = (F(1, 3), F(1, 3), F(1, 3), F(2, 3))
    rep.add("cardinality equation x0 + x1 + x2 = 1 is valid",
            lp.is_redundant(P.system(), Row((F(1), F(1), F(1), F(0)), "=", F(1))).redundant)
    rep.add("lift-and-project contains x*", landp_member(P, None, xs).member)
    s = closure_member(P, STRONG, xs)
    rep.add("strong closure excludes x*", not s.member, "" if s.member else f"cut {s.cut}")
    res = verify_cardinality_dominance(P, (0, 1, 2), trials, rng)
    rep.add("strong closure points lie in the cardinality hull", res.ok,
            f"{res.points} points" + ("" if res.ok else "; " + "; ".join(res.failures)))
    disj = cardinality_disjunction(P, (0, 1, 2))
    pts = []
    for _ in range(samples):
        w = [F(rng.randint(0, 5)) for _ in range(3)]
        if not any(w):
            w[0] = F(1)
        pts.append(tuple(v / sum(w) for v in w) + (F(0),))
    pts += sample_points(P, rng, samples, max_den=6)
    bad = [x for x in pts if hull_member(P, disj, x).member != _in_triangle(x)]
    rep.add("cardinality hull is the triangle at x3 = 0 on samples", not bad,
            f"{len(pts)} points, {sum(map(_in_triangle, pts))} in the triangle"
            + ("" if not bad else f"; mismatch at {[str(v) for v in bad[0]]}"))
    return rep


FIG4_X = (F(1, 4), F(1, 4), F(1, 4), F(0))
FIG4_PATTERNS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0))


def fig4_lifting() -> Dict[Tuple[int, int], Fraction]:
    return {(i, j): (FIG4_X[i] if i == j else F(0)) for i in range(4) for j in range(4)}


def fig4(samples: int = 50, seed: int = 0) -> FigureReport:
    P = load_fixture("fig4")
    rep = FigureReport("fig4")
    rng = random.Random(seed)
    L = build_rlt_ef(P, STRONG)
    rep.add("the given lifting satisfies every strong EF row", ef_point_holds(P, STRONG, FIG4_X, fig4_lifting()),
            f"{len(L.system.rows)} rows")
    rep.add("strong closure contains x-hat", closure_member(P, STRONG, FIG4_X).member)
    disj = SubsetDisjunction((0, 1, 2), FIG4_PATTERNS)
    h = hull_member(P, disj, FIG4_X)
    rep.add("disjunctive hull excludes x-hat", not h.member, "" if h.member else f"cut {h.cut}")
    pts = []
    while len(pts) < samples:
        if len(pts) % 2 == 0:
            w = [F(rng.randint(0, 4)) for _ in range(4)]
            if not any(w):
                continue
            pts.append(tuple(v / sum(w) for v in w))
        else:
            q = rng.randint(1, 6)
            pts.append(tuple(F(rng.randint(0, q), q) for _ in range(4)))
    bad = [x for x in pts if hull_member(P, disj, x).member != (sum(x) == 1)]
    rep.add("hull is the simplex {x in box : sum x = 1} on samples", not bad,
            f"{len(pts)} queries" + ("" if not bad else f"; mismatch at {[str(v) for v in bad[0]]}"))
    return rep


FIGURES: Dict[str, Callable[[], FigureReport]] = {"fig2": fig2, "fig3": fig3, "fig4": fig4}
