"""Linear systems over an enlarged space, and projection membership.

A point ``x`` is in the projection of a lifted system when the auxiliary
variables can be completed.  We decide this by substituting ``x`` into
every row and solving the remaining system over the auxiliaries.  When that
fails, the Farkas multipliers (one per lifted row) aggregate to an
inequality whose auxiliary coefficients vanish; its public part is a cut
valid for the projection and violated by ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from . import simplex
from .linalg import primitive
from .lp import CertificateError, LinearSystem, Row, aggregate, frac


@dataclass(frozen=True)
class LiftedSystem:
    """``system`` over public variables ``public`` (in order) plus auxiliaries."""
    system: LinearSystem
    public: Tuple[int, ...]
    kind: str = ""

    def __post_init__(self):
        object.__setattr__(self, "public", tuple(self.public))
        if any(not 0 <= j < self.system.n for j in self.public):
            raise ValueError("projection map refers to unknown variables")
        if len(set(self.public)) != len(self.public):
            raise ValueError("projection map repeats a variable")

    @property
    def auxiliary(self) -> Tuple[int, ...]:
        pub = set(self.public)
        return tuple(j for j in range(self.system.n) if j not in pub)

    @property
    def public_names(self) -> Tuple[str, ...]:
        return tuple(self.system.variables[j] for j in self.public)

    def rows_named(self, prefix: str) -> List[Row]:
        return [r for r in self.system.rows if r.label.startswith(prefix)]

    def full_point(self, x: Sequence, aux: Dict[str, Fraction]) -> Tuple[Fraction, ...]:
        v = [Fraction(0)] * self.system.n
        for j, val in zip(self.public, x):
            v[j] = frac(val)
        for name, val in aux.items():
            v[self.system.index(name)] = frac(val)
        return tuple(v)


@dataclass(frozen=True)
class MembershipCertificate:
    """Either a witness for the auxiliaries or a cut with its multipliers.

    ``cut`` is over the public variables, in primitive integer form;
    ``multipliers`` is indexed by the lifted rows and aggregates (rows read
    as ``<=``) to ``scale * cut`` for a positive ``scale``.
    """
    member: bool
    point: Tuple[Fraction, ...]
    witness: Optional[Dict[str, Fraction]] = None
    cut: Optional[Row] = None
    multipliers: Optional[Tuple[Fraction, ...]] = None

    def __bool__(self):
        return self.member


@dataclass
class _Prepared:
    aux: Tuple[int, ...]
    aux_rows: List[Dict[int, Fraction]]
    pub_rows: List[Dict[int, Fraction]]
    bounds: List[Tuple[Optional[Fraction], Optional[Fraction]]]


@lru_cache(maxsize=256)
def _prepare(L: LiftedSystem) -> _Prepared:
    aux = L.auxiliary
    apos = {j: p for p, j in enumerate(aux)}
    ppos = {j: p for p, j in enumerate(L.public)}
    aux_rows, pub_rows, bounds = [], [], []
    for r in L.system.rows:
        ar, pr = {}, {}
        for j, a in enumerate(r.coef):
            if not a:
                continue
            if j in apos:
                ar[apos[j]] = a
            else:
                pr[ppos[j]] = a
        aux_rows.append(ar)
        pub_rows.append(pr)
        bounds.append(r.bounds())
    return _Prepared(aux, aux_rows, pub_rows, bounds)


def lifted_member(L: LiftedSystem, x: Sequence, verify: bool = True) -> MembershipCertificate:
    """Decide whether ``x`` extends to a point of ``L``."""
    x = tuple(frac(v) for v in x)
    if len(x) != len(L.public):
        raise ValueError(f"point has dimension {len(x)}, projection has {len(L.public)}")
    if L.system.bounds is not None and any(b != (None, None) for b in L.system.bounds):
        raise ValueError("lifted systems carry all constraints as rows")
    prep = _prepare(L)
    lo, hi = [], []
    for pr, (l, h) in zip(prep.pub_rows, prep.bounds):
        shift = sum((a * x[p] for p, a in pr.items()), Fraction(0))
        lo.append(None if l is None else l - shift)
        hi.append(None if h is None else h - shift)
    k = len(prep.aux)
    res = simplex.run(k, prep.aux_rows, lo, hi, [None] * k, [None] * k)
    if res.status == "optimal":
        names = L.system.variables
        witness = {names[j]: v for j, v in zip(prep.aux, res.x)}
        cert = MembershipCertificate(True, x, witness=witness)
    else:
        mult = tuple(-u if r.rel == ">=" else u for u, r in zip(res.row_mult, L.system.rows))
        cert = MembershipCertificate(False, x, cut=_cut(L, mult), multipliers=mult)
    if verify and not verify_certificate(L, cert):
        raise CertificateError("membership certificate failed verification")
    return cert


def _cut(L: LiftedSystem, mult: Sequence[Fraction]) -> Row:
    coef, rhs = aggregate(L.system, mult)
    scaled = primitive([coef[j] for j in L.public] + [rhs])
    return Row(tuple(scaled[:-1]), "<=", scaled[-1], "cut")


def verify_certificate(L: LiftedSystem, cert: MembershipCertificate) -> bool:
    """Re-check a certificate with plain arithmetic, no solver involved."""
    if cert.member:
        if cert.witness is None:
            return False
        try:
            full = L.full_point(cert.point, cert.witness)
        except KeyError:
            return False
        return all(r.holds(full) for r in L.system.rows)
    if cert.multipliers is None or cert.cut is None:
        return False
    try:
        coef, rhs = aggregate(L.system, cert.multipliers)
    except CertificateError:
        return False
    if any(coef[j] for j in L.auxiliary):
        return False
    agg = [coef[j] for j in L.public] + [rhs]
    cut = list(cert.cut.coef) + [cert.cut.rhs]
    # the cut must be a positive multiple of the aggregate
    piv = next((i for i, v in enumerate(agg) if v), None)
    if piv is None or cut[piv] == 0 or (cut[piv] > 0) != (agg[piv] > 0):
        return False
    f = cut[piv] / agg[piv]
    if any(c != f * a for c, a in zip(cut, agg)):
        return False
    return cert.cut.lhs(cert.point) > cert.cut.rhs
