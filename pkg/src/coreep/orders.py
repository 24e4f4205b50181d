"""Decision procedures for seven matrix order relations.

Every predicate returns an :class:`OrderVerdict`.  Identities between
matrices are judged on Frobenius residuals scaled by ``max(||A||, ||B||)``
times the norm of the remaining factor; rank identities (minus order) are
compared as exact integers after tolerance-based rank extraction, all
ranks of one comparison sharing a common reference scale.

Where two equivalent characterizations are available both are evaluated
and a disagreement raises :class:`CharacterizationDisagreement`; it
always means some rank or index decision sat on the tolerance boundary.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .decomp import _chain, canonical_form, core_ep_decompose, core_nilpotent_decompose, index
from .errors import CharacterizationDisagreement, IndexTooLarge, ShapeMismatch
from .inverses import _core_ep_value, core, group, moore_penrose
from .numkernel import DEFAULT_TOL, ToleranceContext, as_matrix, as_square, ctranspose, frob, rank
from .numkernel import singular_values


class Relation(str, enum.Enum):
    MINUS = "minus"
    SHARP = "sharp"
    CORE = "core"
    DRAZIN = "drazin"
    CORE_EP = "core_ep"
    CN = "cn"
    CORE_MINUS = "core_minus"


@dataclass(frozen=True)
class OrderVerdict:
    """Outcome of ``A <= B`` under ``relation``.

    ``residuals`` maps condition names to relative residuals;
    ``rank_witness`` is ``(rk(A), rk(B), rk(B - A))`` for minus-type checks.
    ``parts`` holds nested verdicts for relations defined through others.
    """

    holds: bool
    relation: Relation
    residuals: dict = field(default_factory=dict)
    rank_witness: tuple | None = None
    parts: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds


def _pair(a, b, square=True):
    conv = as_square if square else as_matrix
    a, b = conv(a), conv(b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    return a, b


class _Conditions:
    def __init__(self, tol, prefix=""):
        self.tol = tol
        self.prefix = prefix
        self.values = {}
        self.ok = True

    def add(self, name, absolute, scale):
        self.values[self.prefix + name] = absolute / scale if scale > 0 else absolute
        if not self.tol.accepts(absolute, scale):
            self.ok = False


def _require_index_le1(a, tol, which):
    k = index(a, tol)
    if k > 1:
        raise IndexTooLarge(k, which)


def le_minus(a, b, tol: ToleranceContext = DEFAULT_TOL, *, scale: float | None = None) -> OrderVerdict:
    """Minus order: ``rk(B) - rk(A) = rk(B - A)``.

    All three ranks use the reference ``scale`` (default: the larger of the
    two spectral norms), so a difference made of rounding noise counts as
    rank zero.
    """
    a, b = _pair(a, b, square=False)
    if scale is None:
        sa, sb = singular_values(a), singular_values(b)
        scale = max(sa[0] if sa.size else 0.0, sb[0] if sb.size else 0.0)
    ra = rank(a, tol, scale=scale)
    rb = rank(b, tol, scale=scale)
    rd = rank(b - a, tol, scale=scale)
    return OrderVerdict(
        holds=(rb - ra == rd),
        relation=Relation.MINUS,
        residuals={"rank_defect": rb - ra - rd},
        rank_witness=(ra, rb, rd),
    )


def le_sharp(a, b, tol: ToleranceContext = DEFAULT_TOL) -> OrderVerdict:
    """Sharp order on index <= 1 matrices: ``A#A = A#B`` and ``AA# = BA#``."""
    a, b = _pair(a, b)
    _require_index_le1(a, tol, "A")
    _require_index_le1(b, tol, "B")
    g = group(a, tol, cross_check=False).value
    big = max(frob(a), frob(b))
    scale = frob(g) * big
    c = _Conditions(tol)
    c.add("A#A=A#B", kernels.frob_prod_diff(g, a - b, np.zeros_like(a)), scale)
    c.add("AA#=BA#", kernels.frob_prod_diff(a - b, g, np.zeros_like(a)), scale)
    return OrderVerdict(c.ok, Relation.SHARP, c.values)


def le_core(a, b, tol: ToleranceContext = DEFAULT_TOL) -> OrderVerdict:
    """Core order on index <= 1 matrices: ``A(+)A = A(+)B`` and ``AA(+) = BA(+)``.

    Cross-checked against ``A^+A = A^+B`` and ``A^2 = BA``.
    """
    a, b = _pair(a, b)
    _require_index_le1(a, tol, "A")
    _require_index_le1(b, tol, "B")
    big = max(frob(a), frob(b))
    zero = np.zeros_like(a)
    d = a - b

    x = core(a, tol, cross_check=False).value
    c1 = _Conditions(tol, "def:")
    c1.add("XA=XB", kernels.frob_prod_diff(x, d, zero), frob(x) * big)
    c1.add("AX=BX", kernels.frob_prod_diff(d, x, zero), frob(x) * big)

    mp = moore_penrose(a, tol).value
    c2 = _Conditions(tol, "alt:")
    c2.add("A+A=A+B", kernels.frob_prod_diff(mp, d, zero), frob(mp) * big)
    c2.add("A^2=BA", kernels.frob_prod_diff(d, a, zero), frob(a) * big)

    residuals = {**c1.values, **c2.values}
    if c1.ok != c2.ok:
        raise CharacterizationDisagreement(
            f"core order: defining equations say {c1.ok}, A+A=A+B/A^2=BA say {c2.ok}", residuals
        )
    return OrderVerdict(c1.ok, Relation.CORE, residuals)


def le_drazin(a, b, tol: ToleranceContext = DEFAULT_TOL) -> OrderVerdict:
    """Drazin pre-order: ``A^k B = B A^k = A^(k+1)`` with ``k = Ind(A)``.

    With ``D = B - A`` the identities read ``A^k D = 0`` and ``D A^k = 0``,
    which only involve R(A^k) and N(A^k).  Orthonormal bases ``Q`` of
    R(A^k) and ``P`` of R((A*)^k) turn them into ``P* D = 0`` and
    ``D Q = 0``, so no power of A is formed.
    """
    a, b = _pair(a, b)
    k, q, ranks = _chain(a, tol)
    kh, p, ranks_h = _chain(ctranspose(a), tol)
    if (kh, p.shape[1]) != (k, q.shape[1]):
        raise CharacterizationDisagreement(
            f"A and A* give different rank sequences: {ranks} vs {ranks_h}", {"index": k, "index_h": kh}
        )
    d = b - a
    scale = math.sqrt(q.shape[1]) * max(frob(a), frob(b))
    c = _Conditions(tol)
    c.add("A^kB=A^(k+1)", frob(ctranspose(p) @ d), scale)
    c.add("BA^k=A^(k+1)", frob(d @ q), scale)
    c.values["index"] = k
    return OrderVerdict(c.ok, Relation.DRAZIN, c.values)


def le_core_ep(a, b, tol: ToleranceContext = DEFAULT_TOL) -> OrderVerdict:
    """Core-EP pre-order ``X A = X B``, ``A X = B X`` with X the core-EP inverse of A.

    Cross-checked against ``A^(k+1) = B A^k`` and ``A* A^k = B* A^k``.
    Both only see R(A^k), so ``A^k`` is replaced by the orthonormal basis
    ``Q`` of that range taken from the canonical form.
    """
    a, b = _pair(a, b)
    cf = canonical_form(a, tol)
    k, r = cf.index, cf.core_rank
    # the residual audit lives in inverses.core_ep; here only X is needed
    x = _core_ep_value(cf, tol, {})
    d = a - b
    big = max(frob(a), frob(b))
    zero = np.zeros_like(a)

    c1 = _Conditions(tol, "def:")
    c1.add("XA=XB", kernels.frob_prod_diff(x, d, zero), frob(x) * big)
    c1.add("AX=BX", kernels.frob_prod_diff(d, x, zero), frob(x) * big)

    q = cf.u[:, :r]
    c2 = _Conditions(tol, "alt:")
    qscale = math.sqrt(r) * big
    c2.add("A^(k+1)=BA^k", frob(d @ q), qscale)
    c2.add("A*A^k=B*A^k", frob(ctranspose(d) @ q), qscale)

    residuals = {**c1.values, **c2.values, "index": k}
    if c1.ok != c2.ok:
        raise CharacterizationDisagreement(
            f"core-EP order: defining equations say {c1.ok}, power identities say {c2.ok}",
            residuals,
        )
    return OrderVerdict(c1.ok, Relation.CORE_EP, residuals)


def le_cn(a, b, tol: ToleranceContext = DEFAULT_TOL) -> OrderVerdict:
    """C-N partial order: sharp order on the cores, minus order on the nilpotent parts."""
    a, b = _pair(a, b)
    pa = core_nilpotent_decompose(a, tol)
    pb = core_nilpotent_decompose(b, tol)
    scale = max(frob(a), frob(b))
    sharp = le_sharp(pa.core, pb.core, tol)
    minus = le_minus(pa.nil, pb.nil, tol, scale=scale)
    return OrderVerdict(
        sharp.holds and minus.holds,
        Relation.CN,
        {**{f"core:{k}": v for k, v in sharp.residuals.items()}, "nil:rank_defect": minus.residuals["rank_defect"]},
        rank_witness=minus.rank_witness,
        parts={"core": sharp, "nil": minus},
    )


def le_core_minus(a, b, tol: ToleranceContext = DEFAULT_TOL) -> OrderVerdict:
    """Core-minus partial order.

    Definition: ``A1 <=(core) B1`` and ``A2 <=(minus) B2`` on the core-EP
    splittings.  Cross-check: ``A <=(core-EP) B`` together with
    ``A - A X_A A <=(minus) B - B X_B B``.
    """
    a, b = _pair(a, b)
    scale = max(frob(a), frob(b))
    pa = core_ep_decompose(a, tol)
    pb = core_ep_decompose(b, tol)
    core_v = le_core(pa.a1, pb.a1, tol)
    nil_v = le_minus(pa.a2, pb.a2, tol, scale=scale)
    holds = core_v.holds and nil_v.holds

    ep_v = le_core_ep(a, b, tol)
    xa = _core_ep_value(canonical_form(a, tol), tol, {})
    xb = _core_ep_value(canonical_form(b, tol), tol, {})
    rest_v = le_minus(a - a @ xa @ a, b - b @ xb @ b, tol, scale=scale)
    alt = ep_v.holds and rest_v.holds

    residuals = {
        **{f"core:{k}": v for k, v in core_v.residuals.items()},
        "nil:rank_defect": nil_v.residuals["rank_defect"],
        **{f"core_ep:{k}": v for k, v in ep_v.residuals.items()},
        "rest:rank_defect": rest_v.residuals["rank_defect"],
    }
    if holds != alt:
        raise CharacterizationDisagreement(
            f"core-minus order: definition says {holds}, core-EP/minus characterization says {alt}",
            residuals,
        )
    return OrderVerdict(
        holds,
        Relation.CORE_MINUS,
        residuals,
        rank_witness=nil_v.rank_witness,
        parts={"core": core_v, "nil": nil_v, "core_ep": ep_v, "rest": rest_v},
    )


PREDICATES = {
    Relation.MINUS: le_minus,
    Relation.SHARP: le_sharp,
    Relation.CORE: le_core,
    Relation.DRAZIN: le_drazin,
    Relation.CORE_EP: le_core_ep,
    Relation.CN: le_cn,
    Relation.CORE_MINUS: le_core_minus,
}


def compare(relation, a, b, tol: ToleranceContext = DEFAULT_TOL) -> OrderVerdict:
    return PREDICATES[Relation(relation)](a, b, tol)
