"""rltlab command line.

Exit codes: 0 when the command completed (whatever the verdict), 1 when an
assertion or property check failed, 2 on bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from typing import Any, Dict, List, Optional

from . import io
from .disjunctive import (SubsetDisjunction, build_balas_ef, hull_member, landp_member,
                          variable_disjunction)
from .figures import FIGURES
from .lifted import LiftedSystem, MembershipCertificate, verify_certificate
from .qap import BUILDERS, MAX_N, lp_bound, qap_optimum
from .rlt import ClosureVariant, build_rlt_ef, closure_member
from .suites import SUITES, suite_cardinality

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
CLOSURES = ("weak", "strong", "landp", "hull")


def _digest(*parts: Any) -> str:
    blob = json.dumps(io.to_jsonable(list(parts)), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _emit(doc: Dict[str, Any], as_json: bool, human: List[str]) -> None:
    if as_json:
        print(json.dumps(io.to_jsonable(doc), indent=2, sort_keys=True))
    else:
        print("\n".join(human))


def _certificate(L: LiftedSystem, cert: MembershipCertificate) -> Dict[str, Any]:
    if cert.member:
        return {"witness": dict(sorted(cert.witness.items()))}
    names = L.public_names
    rows = L.system.rows
    mult = [{"row": rows[k].label, "value": u} for k, u in enumerate(cert.multipliers) if u]
    return {"cut": {**io.row_to_json(cert.cut), "text": cert.cut.format(names)},
            "multipliers": mult,
            "verified": verify_certificate(L, cert)}


def cmd_member(args) -> int:
    P = io.load_polytope(args.polytope)
    x = io.parse_point(args.point)
    if len(x) != P.n:
        raise io.InputError(f"point has {len(x)} coordinates, polytope has {P.n}")
    if any(not 0 <= v <= 1 for v in x):
        raise io.InputError("point lies outside the unit box")
    doc: Dict[str, Any] = {"command": "member", "closure": args.closure, "point": list(x),
                           "input_digest": _digest(io.polytope_to_dict(P), list(x), args.closure,
                                                   args.disjunction)}
    t0 = time.perf_counter()
    if args.closure in ("weak", "strong"):
        variant = ClosureVariant.parse(args.closure)
        L = build_rlt_ef(P, variant)
        cert = closure_member(P, variant, x)
        doc["member"] = cert.member
        doc["certificate"] = _certificate(L, cert)
    elif args.closure == "landp":
        res = landp_member(P, None, x)
        doc["member"] = res.member
        parts = []
        for j, c in res.certificates:
            L = build_balas_ef(P, variable_disjunction(P, j))
            parts.append({"index": j, "member": c.member, **_certificate(L, c)})
        doc["certificate"] = {"disjunctions": parts, "failing": res.failing}
    else:
        if not args.disjunction:
            raise io.InputError("--closure hull needs --disjunction")
        disj = io.parse_disjunction(args.disjunction, P)
        if isinstance(disj, SubsetDisjunction):
            disj = disj.expand(P.n)
        L = build_balas_ef(P, disj)
        cert = hull_member(P, disj, x)
        doc["member"] = cert.member
        doc["certificate"] = _certificate(L, cert)
    elapsed = time.perf_counter() - t0
    human = [f"closure {args.closure} at ({', '.join(map(str, x))}): "
             + ("member" if doc["member"] else "not a member")]
    cert = doc["certificate"]
    if "cut" in cert:
        human.append(f"separating cut: {cert['cut']['text']}")
    if not doc["member"] and args.closure == "landp":
        human.append(f"fails the disjunction on x{cert['failing']}: {cert['disjunctions'][-1]['cut']['text']}")
    human.append(f"elapsed {elapsed:.3f}s")
    _emit(doc, args.json, human)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    rep = FIGURES[args.figure]()
    doc = {"command": "reproduce", "figure": rep.figure, "ok": rep.ok,
           "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in rep.checks]}
    human = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}" + (f"  ({c.detail})" if c.detail else "")
             for c in rep.checks]
    human.append(f"{rep.figure}: {'all checks passed' if rep.ok else 'FAILED'}")
    _emit(doc, args.json, human)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_qap(args) -> int:
    inst = io.load_qap(args.instance)
    if inst.n > MAX_N:
        raise io.InputError(f"QAP models are limited to n <= {MAX_N}, got {inst.n}")
    forms = [f.strip() for f in args.formulations.split(",") if f.strip()]
    unknown = [f for f in forms if f not in BUILDERS]
    if unknown or not forms:
        raise io.InputError(f"unknown formulations {unknown}; choose from {sorted(BUILDERS)}")
    bounds = {f: lp_bound(BUILDERS[f](inst)) for f in forms}
    opt, perm = qap_optimum(inst)
    flags = []
    if "AJ" in bounds:
        for f in ("KB", "KBcol"):
            if f in bounds and bounds["AJ"] < bounds[f]:
                flags.append(f"violation: AJ bound {bounds['AJ']} below {f} bound {bounds[f]}")
    tight = sorted(f for f, b in bounds.items() if b == opt)
    over = sorted(f for f, b in bounds.items() if b > opt)
    flags += [f"violation: {f} bound exceeds the optimum" for f in over]
    doc = {"command": "qap", "n": inst.n, "input_digest": _digest(io.qap_to_text(inst)),
           "bounds": bounds, "optimum": opt, "permutation": list(perm),
           "equal_to_optimum": tight, "violations": flags}
    human = [f"{'formulation':<12}{'bound':>12}"]
    human += [f"{f:<12}{str(b):>12}" + ("  = optimum" if b == opt else "") for f, b in bounds.items()]
    human.append(f"{'optimum':<12}{str(opt):>12}  permutation {list(perm)}")
    human += flags or ["no bound violations"]
    _emit(doc, args.json, human)
    return EXIT_FAIL if flags else EXIT_OK


def cmd_verify(args) -> int:
    kw: Dict[str, Any] = {"seed": args.seed}
    if args.trials is not None:
        kw["trials"] = args.trials
    if args.polytope:
        if args.suite != "thm4":
            raise io.InputError("--polytope is only used by the thm4 suite")
        P = io.load_polytope(args.polytope)
        if not args.disjunction or not args.disjunction.startswith("card:"):
            raise io.InputError("thm4 on a polytope needs --disjunction card:j1,j2,...")
        J = [int(t) for t in args.disjunction[5:].split(",") if t]
        if any(j not in P.binary for j in J):
            raise io.InputError("cardinality indices must be binary")
        try:
            rep = suite_cardinality(P, J, name=str(args.polytope), **kw)
        except ValueError as e:
            raise io.InputError(str(e)) from None
    else:
        rep = SUITES[args.suite](**kw)
    doc = {"command": "verify", "suite": rep.name, "seed": args.seed, "ok": rep.ok,
           "checks": rep.checks, "stats": dict(sorted(rep.stats.items())), "violations": rep.violations}
    human = [f"suite {rep.name}: {rep.checks} checks, {len(rep.violations)} violations, {rep.seconds:.1f}s"]
    human += [f"  {k}: {v}" for k, v in sorted(rep.stats.items())]
    if rep.violations:
        human.append("first violation:")
        human.append(json.dumps(io.to_jsonable(rep.violations[0]), indent=2, sort_keys=True))
    _emit(doc, args.json, human)
    return EXIT_OK if rep.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rltlab", description="Exact RLT closure, disjunctive hull and QAP bound tools.")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("member", help="closure membership with a certificate")
    m.add_argument("--polytope", required=True)
    m.add_argument("--closure", required=True, choices=CLOSURES)
    m.add_argument("--point", required=True, help='comma separated rationals, e.g. "1/2,1"')
    m.add_argument("--disjunction", help="var:j, card:j1,j2 or patterns:d1,d2:p1,p2 (hull only)")
    m.set_defaults(func=cmd_member)

    r = sub.add_parser("reproduce", help="run the check bundle of a shipped example")
    r.add_argument("figure", choices=sorted(FIGURES))
    r.set_defaults(func=cmd_reproduce)

    q = sub.add_parser("qap", help="exact LP bounds of QAP relaxations")
    q.add_argument("--instance", required=True)
    q.add_argument("--formulations", default="AJ,KB,KBcol")
    q.set_defaults(func=cmd_qap)

    v = sub.add_parser("verify", help="run a seeded property suite")
    v.add_argument("--suite", required=True, choices=sorted(SUITES))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int)
    v.add_argument("--polytope", help="thm4 only: check this polytope instead of random ones")
    v.add_argument("--disjunction", help="thm4 only: card:j1,j2,...")
    v.set_defaults(func=cmd_verify)

    for s in (m, r, q, v):
        s.add_argument("--json", action="store_true", help="machine-readable output")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except io.InputError as e:
        print(f"rltlab: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as e:
        print(f"rltlab: assertion failed: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
