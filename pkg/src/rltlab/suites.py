"""Seeded property suites over random instances.

Each suite returns a :class:`SuiteReport` that counts the individual checks
and records every violation with enough data to replay it.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import lp
from .characterization import (check_condition_iii, check_condition_iv, derive_z,
                               find_z)
from .disjunctive import landp_member
from .dominance import (classify_all, planted_cardinality_polytope,
                        verify_cardinality_dominance)
from .lp import Row
from .polytope import (BoxPolytope, birkhoff, complement, complement_point, face,
                       hull_from_vertices, sample_points, vertices)
from .qap import (QapInstance, aj_solution, aj_xy_rows, build_adams_johnson,
                  build_column_kb, build_kaufman_broeckx, decompose_aj_column,
                  qap_optimum, rlt_rows_in_aj_space, solve_model, xw_point)
from .rlt import (ClosureVariant, build_rlt_ef, closure_member, mccormick_system,
                  optimize_over_closure, y_matrix)

WEAK, STRONG = ClosureVariant.WEAK, ClosureVariant.STRONG
VARIANTS = (WEAK, STRONG)


@dataclass
class SuiteReport:
    name: str
    checks: int = 0
    violations: List[Dict[str, Any]] = field(default_factory=list)
    stats: Dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def expect(self, cond: bool, prop: str, **data) -> bool:
        self.checks += 1
        if not cond:
            self.violations.append({"property": prop, **data})
        return cond

    def bump(self, key: str, by: int = 1) -> None:
        self.stats[key] = self.stats.get(key, 0) + by


def _poly_doc(P: BoxPolytope) -> Dict[str, Any]:
    from .io import polytope_to_dict
    return polytope_to_dict(P)


def _pt(x) -> List[str]:
    return [str(v) for v in x]


# ---------------------------------------------------------------------------
# instance family


def _rand_frac(rng: random.Random, max_den: int, span: int = 8) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, max_den))


def random_polytope(rng: random.Random, n_max: int = 4, max_rows: int = 6, max_den: int = 8,
                    full_binary: bool = False) -> BoxPolytope:
    """A nonempty polytope in the unit box built around a random anchor point."""
    n = rng.randint(2, n_max)
    anchor = [Fraction(rng.randint(0, q), q) for q in (rng.randint(1, max_den) for _ in range(n))]
    rows = []
    for k in range(rng.randint(1, max_rows)):
        a = [_rand_frac(rng, max_den) for _ in range(n)]
        if not any(a):
            a[rng.randrange(n)] = Fraction(1)
        val = sum((c * v for c, v in zip(a, anchor)), Fraction(0))
        slack = Fraction(rng.randint(0, 4), rng.randint(1, max_den))
        roll = rng.random()
        if roll < 0.1:
            rows.append(Row(tuple(a), "=", val, f"r{k}"))
        elif roll < 0.3:
            rows.append(Row(tuple(a), ">=", val - slack, f"r{k}"))
        else:
            rows.append(Row(tuple(a), "<=", val + slack, f"r{k}"))
    if full_binary:
        B = frozenset(range(n))
    else:
        B = frozenset(i for i in range(n) if rng.random() < 0.6) or frozenset({rng.randrange(n)})
    return BoxPolytope(n, B, tuple(rows))


def _closure_samples(P: BoxPolytope, rng: random.Random, box: int, inner: int) -> List[Tuple[Fraction, ...]]:
    pts = []
    for v in VARIANTS:
        c = [Fraction(rng.randint(-4, 4)) for _ in range(P.n)]
        res = optimize_over_closure(P, v, c, "max")
        if res is not None:
            pts.append(res[1])
    pts += sample_points(P, rng, max(box, inner), max_den=8)[:box]
    V = vertices(P)
    for _ in range(inner):
        w = [Fraction(rng.randint(0, 3)) for _ in V] or [Fraction(1)]
        if not any(w):
            w[0] = Fraction(1)
        s = sum(w)
        pts.append(tuple(sum((wk * v[j] for wk, v in zip(w, V)), Fraction(0)) / s for j in range(P.n)))
    out = []
    for p in pts:
        if p not in out:
            out.append(p)
    return out


def _redundant_row(P: BoxPolytope, rng: random.Random) -> Row:
    """A nonnegative combination of P's rows, loosened by a random slack."""
    n = P.n
    coef = [Fraction(0)] * n
    rhs = Fraction(0)
    for r in rng.sample(P.all_rows(), min(3, len(P.all_rows()))):
        r = r.as_le() if r.rel != "=" else (r if rng.random() < 0.5 else r.negated())
        w = Fraction(rng.randint(1, 3), rng.randint(1, 3))
        coef = [c + w * a for c, a in zip(coef, r.coef)]
        rhs += w * r.rhs
    return Row(tuple(coef), "<=", rhs + Fraction(rng.randint(0, 2), 4), "extra")


def _implied(system, rows) -> bool:
    """Row implication, vacuously true over an empty system."""
    try:
        return lp.implies(system, rows)
    except lp.InfeasibleSystemError:
        return True


def _le_key(r: Row):
    r = r.as_le()
    lead = next((a for a in r.coef if a), None)
    if lead is None:
        return None
    s = abs(lead)
    return tuple(a / s for a in r.coef), r.rhs / s


def _rows_implied(system, rows: Sequence[Row], rng: random.Random, lp_checks: int = 3) -> bool:
    """Each row matches a scaled row of ``system`` with no larger rhs, or passes an LP test.

    A random handful of rows goes through the LP test regardless.
    """
    best: Dict[Tuple[Fraction, ...], Fraction] = {}
    for r in system.rows:
        for form in ([r] if r.rel != "=" else [Row(r.coef, "<=", r.rhs), Row(r.coef, ">=", r.rhs)]):
            k = _le_key(form)
            if k is not None and (k[0] not in best or k[1] < best[k[0]]):
                best[k[0]] = k[1]
    pending = []
    for r in rows:
        forms = [r] if r.rel != "=" else [Row(r.coef, "<=", r.rhs), Row(r.coef, ">=", r.rhs)]
        for f in forms:
            k = _le_key(f)
            if k is None or k[0] not in best or best[k[0]] > k[1]:
                pending.append(f)
    pending += rng.sample(list(rows), min(lp_checks, len(rows)))
    return _implied(system, pending)


def _members(P: BoxPolytope, v, pts) -> List[bool]:
    return [closure_member(P, v, x).member for x in pts]


# ---------------------------------------------------------------------------
# closure properties


def suite_prop2(seed: int = 0, trials: int = 50, samples: int = 4) -> SuiteReport:
    """Weak closure inside lift-and-project inside P."""
    rep = SuiteReport("prop2")
    t0 = time.perf_counter()
    rng = random.Random(seed)
    for t in range(trials):
        P = random_polytope(rng)
        for x in _closure_samples(P, rng, samples, samples):
            weak = closure_member(P, WEAK, x).member
            lap = landp_member(P, None, x).member
            if weak:
                rep.expect(lap, "weak closure point outside lift-and-project",
                           trial=t, polytope=_poly_doc(P), point=_pt(x))
            if lap:
                rep.expect(P.contains(x), "lift-and-project point outside P",
                           trial=t, polytope=_poly_doc(P), point=_pt(x))
            rep.bump("points")
    rep.seconds = time.perf_counter() - t0
    return rep


def _facet_hull(P: BoxPolytope) -> Optional[BoxPolytope]:
    """conv of the union of P's intersections with the cube facets."""
    pts = set()
    for k in range(P.n):
        for beta in (0, 1):
            a = [Fraction(0)] * P.n
            a[k] = Fraction(1 if beta else -1)
            F = face(P, a, beta if beta else 0)
            if not F.is_empty():
                pts.update(vertices(F))
    if not pts:
        return None
    return hull_from_vertices(sorted(pts), binary=P.binary)


def _same_facet_sections(P: BoxPolytope, Q: BoxPolytope, rng: random.Random) -> bool:
    for k in range(P.n):
        for beta in (0, 1):
            a = [Fraction(0)] * P.n
            a[k] = Fraction(1 if beta else -1)
            FP, FQ = face(P, a, beta if beta else 0), face(Q, a, beta if beta else 0)
            for A, Bp in ((FP, FQ), (FQ, FP)):
                if A.is_empty():
                    continue
                if not all(Bp.contains(v) for v in vertices(A)):
                    return False
    return True


def suite_prop3(seed: int = 0, trials: int = 50, samples: int = 3) -> SuiteReport:
    """Containment chain, redundancy, complementation, faces, monotonicity, McCormick."""
    rep = SuiteReport("prop3")
    t0 = time.perf_counter()
    rng = random.Random(seed)
    for t in range(trials):
        P = random_polytope(rng)
        doc = _poly_doc(P)
        pts = _closure_samples(P, rng, samples, samples)
        verdict = {v: _members(P, v, pts) for v in VARIANTS}
        rep.bump("points", len(pts))

        # containment chain
        for v in vertices(P):
            if all(v[i] in (0, 1) for i in P.binary):
                for var in VARIANTS:
                    rep.expect(closure_member(P, var, v).member, "integral vertex outside the closure",
                               trial=t, polytope=doc, point=_pt(v), variant=var.value)
        for x, s, w in zip(pts, verdict[STRONG], verdict[WEAK]):
            if s:
                rep.expect(w, "strong closure point outside the weak closure",
                           trial=t, polytope=doc, point=_pt(x))
            if w:
                rep.expect(P.contains(x), "weak closure point outside P",
                           trial=t, polytope=doc, point=_pt(x))

        # adding a redundant row
        extra = _redundant_row(P, rng)
        if rep.expect(lp.is_redundant(P.system(), extra).redundant, "generated row is not redundant",
                      trial=t, polytope=doc, row=str(extra)):
            P2 = P.with_rows([extra])
            for var in VARIANTS:
                rep.expect(_members(P2, var, pts) == verdict[var], "redundant row changed a verdict",
                           trial=t, polytope=doc, row=str(extra), variant=var.value)

        # complementation
        for k in range(P.n):
            Pk = complement(P, k)
            for var in VARIANTS:
                got = [closure_member(Pk, var, complement_point(x, [k])).member for x in pts]
                rep.expect(got == verdict[var], "complementation changed a verdict",
                           trial=t, polytope=doc, k=k, variant=var.value)

        # monotonicity: drop rows to get a superset Q
        if P.rows:
            keep = [r for r in P.rows if rng.random() < 0.5]
            Q = BoxPolytope(P.n, P.binary, tuple(keep))
            rep.expect(_implied(P.system(), Q.all_rows()), "relaxed polytope does not contain P",
                       trial=t, polytope=doc)
            for var in VARIANTS:
                got = _members(Q, var, pts)
                rep.expect(all(q or not p for p, q in zip(verdict[var], got)),
                           "closure membership not monotone", trial=t, polytope=doc, variant=var.value)

        # faces
        a = [Fraction(rng.randint(-3, 3)) for _ in range(P.n)]
        if not any(a):
            a[0] = Fraction(1)
        top = lp.solve(P.system(), a, "max")
        beta = top.value
        F = face(P, a, beta)
        fpts = list(pts)
        for var in VARIANTS:
            res = optimize_over_closure(F, var, [Fraction(rng.randint(-4, 4)) for _ in range(P.n)])
            if res is not None:
                fpts.append(res[1])
        fpts.append(top.x)
        for var in VARIANTS:
            for x in fpts:
                on = sum((c * v for c, v in zip(a, x)), Fraction(0)) == beta
                lhs = closure_member(F, var, x).member
                rhs = on and closure_member(P, var, x).member
                rep.expect(lhs == rhs, "closure of the face differs from the face of the closure",
                           trial=t, polytope=doc, normal=_pt(a), beta=str(beta), point=_pt(x),
                           variant=var.value)

        # McCormick rows are implied by the EF
        for var in VARIANTS:
            L = build_rlt_ef(P, var)
            M = mccormick_system(P, var)
            rep.expect(_rows_implied(L.system, M.rows, rng), "McCormick row not implied by the EF",
                       trial=t, polytope=doc, variant=var.value)

        # with B = N the closure only sees the facet sections
        if P.binary == frozenset(range(P.n)):
            Q = _facet_hull(P)
            if Q is not None and rep.expect(_same_facet_sections(P, Q, rng),
                                            "facet hull has different facet sections",
                                            trial=t, polytope=doc):
                for var in VARIANTS:
                    rep.expect(_members(Q, var, pts) == verdict[var],
                               "closure depends on more than the facet sections",
                               trial=t, polytope=doc, variant=var.value)
                rep.bump("facet_pairs")
    rep.seconds = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# pointwise characterization


def _points_in_P(P: BoxPolytope, rng: random.Random, count: int):
    pts = [p for p in _closure_samples(P, rng, count, count) if P.contains(p)]
    pts += vertices(P)[:2]
    out = []
    for p in pts:
        if p not in out:
            out.append(p)
    return out


def suite_thm3(seed: int = 0, trials: int = 50, samples: int = 3) -> SuiteReport:
    rep = SuiteReport("thm3")
    t0 = time.perf_counter()
    rng = random.Random(seed)
    for t in range(trials):
        P = random_polytope(rng)
        doc = _poly_doc(P)
        for x in _points_in_P(P, rng, samples):
            cert = closure_member(P, WEAK, x)
            z3 = find_z(P, x, "iii")
            rep.expect(cert.member == (z3 is not None), "weak closure and z-condition disagree",
                       trial=t, polytope=doc, point=_pt(x), member=cert.member)
            if cert.member:
                z = derive_z(x, y_matrix(P, WEAK, cert.witness), P.binary)
                rep.expect(check_condition_iii(P, x, z), "derived z-points fail the convex conditions",
                           trial=t, polytope=doc, point=_pt(x))
                rep.expect(check_condition_iv(P, x, z), "derived z-points fail the equation conditions",
                           trial=t, polytope=doc, point=_pt(x))
            if z3 is not None:
                rep.expect(check_condition_iv(P, x, z3), "convex conditions without equation conditions",
                           trial=t, polytope=doc, point=_pt(x))
            rep.bump("points")

        Pn = P.with_binary(range(P.n))
        dn = _poly_doc(Pn)
        for x in _points_in_P(Pn, rng, samples):
            z4 = find_z(Pn, x, "iv") is not None
            s = closure_member(Pn, STRONG, x).member
            w = closure_member(Pn, WEAK, x).member
            rep.expect(z4 == s == w, "full-binary equivalence chain broken",
                       trial=t, polytope=dn, point=_pt(x), iv=z4, strong=s, weak=w)
            rep.bump("full_binary_points")
    rep.seconds = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# cardinality dominance


def suite_thm4(seed: int = 0, trials: int = 40, samples: int = 4,
               extra: Sequence[Tuple[str, BoxPolytope, Sequence[int]]] = ()) -> SuiteReport:
    rep = SuiteReport("thm4")
    t0 = time.perf_counter()
    rng = random.Random(seed)
    cases = [("birkhoff3", birkhoff(3), (0, 1, 2))]
    cases += list(extra)
    for t in range(trials):
        n = rng.randint(2, 4)
        J = tuple(sorted(rng.sample(range(n), rng.randint(1, n))))
        cases.append((f"planted{t}", planted_cardinality_polytope(rng, n, J), J))
    for name, P, J in cases:
        res = verify_cardinality_dominance(P, J, samples, rng)
        rep.expect(res.ok, "strong closure point outside the cardinality hull", case=name,
                   polytope=_poly_doc(P), J=list(J), failures=res.failures)
        rep.bump("points", res.points)
    rep.stats["cases"] = len(cases)
    rep.seconds = time.perf_counter() - t0
    return rep


def suite_cardinality(P: BoxPolytope, J: Sequence[int], seed: int = 0, trials: int = 10,
                      name: str = "input") -> SuiteReport:
    """Cardinality dominance on one given polytope."""
    rep = SuiteReport("thm4")
    t0 = time.perf_counter()
    res = verify_cardinality_dominance(P, J, trials, random.Random(seed))
    rep.expect(res.ok, "strong closure point outside the cardinality hull", case=name,
               polytope=_poly_doc(P), J=list(J), failures=res.failures)
    rep.stats["points"] = res.points
    rep.seconds = time.perf_counter() - t0
    return rep


def suite_thm7(seed: int = 0, trials: int = 3, d_max: int = 3) -> SuiteReport:
    rep = SuiteReport("thm7")
    t0 = time.perf_counter()
    for c in classify_all(d_max, seed, trials):
        rep.expect(c.ok, "classification discrepancy",
                   patterns=["".join(map(str, p)) for p in c.patterns], holds=c.holds, detail=c.detail)
        rep.bump("holds" if c.holds else "fails")
        rep.bump(f"d{len(c.patterns[0])}")
    rep.seconds = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# QAP


def suite_qap(seed: int = 0, trials: int = 20, n: int = 3) -> SuiteReport:
    rep = SuiteReport("qap")
    t0 = time.perf_counter()
    rng = random.Random(seed)
    for t in range(trials):
        inst = QapInstance.random(n, rng)
        q = [str(v) for v in inst.q]
        aj = build_adams_johnson(inst)
        sol_lp = solve_model(aj)
        kb = solve_model(build_kaufman_broeckx(inst)).value
        kbc = solve_model(build_column_kb(inst)).value
        opt, _ = qap_optimum(inst)
        rep.expect(sol_lp.value >= kb, "AJ bound below KB", trial=t, q=q, aj=str(sol_lp.value), kb=str(kb))
        rep.expect(sol_lp.value >= kbc, "AJ bound below column KB", trial=t, q=q)
        rep.expect(sol_lp.value <= opt, "AJ bound above the optimum", trial=t, q=q)
        sol = aj_solution(aj, sol_lp.x)
        for j in range(n):
            try:
                decompose_aj_column(inst, sol, j)
                rep.expect(True, "")
            except AssertionError as e:
                rep.expect(False, "AJ column does not decompose", trial=t, q=q, column=j, detail=str(e))
        for build in (build_kaufman_broeckx, build_column_kb):
            m = build(inst)
            rep.expect(lp.is_feasible_point(m.system, xw_point(m, sol)),
                       f"AJ (x, w) is not feasible for {m.name}", trial=t, q=q)
        rep.bump("gap_closed" if sol_lp.value == opt else "gap_open")
    A, R = aj_xy_rows(2), rlt_rows_in_aj_space(2)
    rep.expect(lp.implies(A, R.rows), "RLT rows not implied by AJ rows at n=2")
    rep.expect(lp.implies(R, A.rows), "AJ rows not implied by RLT rows at n=2")
    rep.seconds = time.perf_counter() - t0
    return rep


SUITES: Dict[str, Callable[..., SuiteReport]] = {
    "prop2": suite_prop2,
    "prop3": suite_prop3,
    "thm3": suite_thm3,
    "thm4": suite_thm4,
    "thm7": suite_thm7,
    "qap": suite_qap,
}
