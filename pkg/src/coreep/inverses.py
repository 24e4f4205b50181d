"""Moore-Penrose, Drazin, group, core and core-EP inverses.

Each inverse comes back as an :class:`InverseResult` carrying the
relative residual of every defining equation, so callers never have to
recompute them.  Residuals are measured in Frobenius norm and divided by
the natural size of the terms involved (e.g. ``||XAX - X||`` by
``||X||^2 ||A|| + ||X||``); construction fails with
:class:`ResidualTooLarge` when any of them exceeds the tolerance.

The Drazin and core-EP inverses are cross-checked by a second route that
shares nothing with the canonical form except the rank ``r``:

* Cline's formula ``A^D = A^k (A^(2k+1))^+ A^k`` and the core-EP formula
  ``A^k ((A^k)* A^(k+1))^+ (A^k)*`` only depend on ``A^k`` through its
  column space (and, for Cline, its null space).  Explicit powers lose
  those subspaces to rounding once ``T`` is moderately ill conditioned,
  so both formulas are evaluated with ``A^k`` replaced by a matrix ``E``
  having the same range and null space, built from ordered Schur forms
  of ``A`` and ``A*``.  ``literal=True`` uses the scaled power instead.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import kernels
from .decomp import CanonicalForm, canonical_form, core_form, index_and_core_basis
from .errors import IndexTooLarge, ResidualTooLarge, RouteDisagreement
from .numkernel import (
    DEFAULT_TOL,
    ToleranceContext,
    as_matrix,
    as_square,
    ctranspose,
    frob,
    range_basis,
    scaled_power,
)

ROUTE_AGREEMENT_FACTOR = 100.0


@dataclass(frozen=True)
class InverseResult:
    """An inverse together with the evidence that it is one.

    ``route`` names the computation that produced ``value``: ``"canonical"``
    (block form), ``"formula"`` (closed-form expression) or ``"cline"``.
    ``residuals`` maps each defining equation to its relative residual;
    ``diagnostics`` holds non-residual numbers such as ``cond_T``.
    """

    value: np.ndarray
    route: str
    residuals: dict
    index: int | None = None
    core_rank: int | None = None
    diagnostics: dict = field(default_factory=dict)


class _Residuals:
    def __init__(self, tol: ToleranceContext):
        self.tol = tol
        self.values = {}
        self.failed = []

    def add(self, name, absolute, scale):
        rel = absolute / scale if scale > 0 else absolute
        self.values[name] = float(rel)
        if not self.tol.accepts(absolute, scale):
            self.failed.append(name)

    def check(self, what):
        if self.failed:
            detail = ", ".join(f"{k}={self.values[k]:.3e}" for k in self.failed)
            raise ResidualTooLarge(f"{what}: defining equations violated ({detail})", self.values)
        return self.values


def _unit_power(a, k):
    """``(A/||A||)^k`` as an explicit matrix of norm <= 1, and ``||A||_F``."""
    alpha = frob(a)
    n = a.shape[0]
    if k == 0:
        return np.eye(n, dtype=np.complex128), alpha
    if alpha == 0.0:
        return np.zeros_like(a), alpha
    m, s = scaled_power(a / alpha, k)
    return m * s, alpha


def _pinv(a, r):
    """Moore-Penrose inverse of ``a`` truncated to its ``r`` leading singular triplets."""
    if r == 0:
        return np.zeros(a.shape[::-1], dtype=np.complex128)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    return (ctranspose(vh[:r]) / s[:r]) @ ctranspose(u[:, :r])


def _solve_inverse(t, tol, diagnostics):
    r = t.shape[0]
    if r == 0:
        diagnostics["cond_T"] = 1.0
        return np.zeros((0, 0), dtype=np.complex128)
    # one SVD yields both the inverse and its condition number
    u, s, vh = np.linalg.svd(t)
    cond = float(s[0] / s[-1]) if s[-1] > 0 else math.inf
    diagnostics["cond_T"] = cond
    thresh = tol.rank_threshold(1.0)
    if thresh > 0 and cond > 1.0 / thresh:
        warnings.warn(f"T block is ill conditioned (cond = {cond:.3e})", RuntimeWarning, stacklevel=3)
    return (ctranspose(vh) / s) @ ctranspose(u)


def _agree(x, y, tol, what):
    diff = kernels.frob_diff(x, y)
    scale = max(frob(x), frob(y))
    rel = diff / scale if scale > 0 else diff
    if diff > ROUTE_AGREEMENT_FACTOR * (tol.atol + tol.rtol * scale):
        raise RouteDisagreement(f"{what}: routes differ by {rel:.3e} (relative)", rel)
    return rel


# -- Moore-Penrose ---------------------------------------------------------


def penrose_residuals(a, x, tol: ToleranceContext = DEFAULT_TOL) -> _Residuals:
    na, nx = frob(a), frob(x)
    ax = a @ x
    xa = x @ a
    res = _Residuals(tol)
    res.add("AXA=A", kernels.frob_prod_diff(ax, a, a), na * na * nx + na)
    res.add("XAX=X", kernels.frob_prod_diff(x, ax, x), nx * nx * na + nx)
    res.add("(AX)*=AX", kernels.frob_diff(ctranspose(ax), ax), na * nx)
    res.add("(XA)*=XA", kernels.frob_diff(ctranspose(xa), xa), na * nx)
    return res


def moore_penrose(a, tol: ToleranceContext = DEFAULT_TOL) -> InverseResult:
    """Moore-Penrose inverse by thresholded singular value inversion."""
    a = as_matrix(a)
    if a.size == 0:
        x = np.zeros(a.shape[::-1], dtype=np.complex128)
        return InverseResult(x, "canonical", {})
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    if s[0] == 0.0 and tol.atol == 0.0:
        r = 0
    else:
        r = int(np.count_nonzero(s > tol.rank_threshold(s[0])))
    x = (ctranspose(vh[:r]) / s[:r]) @ ctranspose(u[:, :r])
    residuals = penrose_residuals(a, x, tol).check("Moore-Penrose inverse")
    return InverseResult(x, "canonical", residuals, core_rank=r)


# -- Drazin and group ------------------------------------------------------


def drazin_block(cf: CanonicalForm) -> np.ndarray:
    """``U [[T^-1, Z], [0, 0]] U*`` with ``Z = sum_{i<k} T^-(i+2) S N^i``."""
    r, k = cf.core_rank, cf.index
    n = cf.n
    if r == 0:
        return np.zeros((n, n), dtype=np.complex128)
    tinv = scipy.linalg.solve(cf.t, np.eye(r, dtype=np.complex128))
    term = tinv @ tinv @ cf.s
    z = term.copy()
    for _ in range(1, k):
        term = tinv @ term @ cf.nil
        z += term
    q = cf.u[:, :r]
    return q @ np.hstack([tinv, z]) @ ctranspose(cf.u)


def _schur_basis(a, r):
    """Orthonormal basis of the invariant subspace for the ``r`` largest eigenvalues."""
    n = a.shape[0]
    if r == 0:
        return np.zeros((n, 0), dtype=np.complex128)
    if r == n:
        return np.eye(n, dtype=np.complex128)
    t0 = scipy.linalg.schur(a, output="complex")[0]
    mags = np.sort(np.abs(np.diag(t0)))[::-1]
    hi, lo = mags[r - 1], mags[r]
    thr = math.sqrt(hi * lo) if lo > 0 else hi / 2
    _, z, sdim = scipy.linalg.schur(a, output="complex", sort=lambda w: abs(w) > thr)
    if sdim != r:
        raise RouteDisagreement(
            f"ordered Schur form isolates {sdim} eigenvalues, expected core rank {r}"
        )
    return z[:, :r]


def power_surrogate(a, k, r, *, literal=False, side="both"):
    """A stand-in for ``A^k`` with the same range (and null space).

    ``side="range"`` returns the orthogonal projector onto R(A^k);
    ``side="both"`` returns ``Z_A Z_{A*}^*``, whose range is R(A^k) and
    whose null space is N(A^k).  ``literal=True`` returns the scaled
    power ``(A/||A||)^k`` itself.
    """
    if literal:
        return _unit_power(a, k)[0]
    za = _schur_basis(a, r)
    if side == "range":
        return za @ ctranspose(za)
    zh = _schur_basis(ctranspose(a), r)
    return za @ ctranspose(zh)


def drazin_cline(a, k, r, *, literal=False) -> np.ndarray:
    """Cline's formula ``E (E A E)^+ E`` with ``E`` standing in for ``A^k``."""
    e = power_surrogate(a, k, r, literal=literal)
    return e @ _pinv(e @ a @ e, r) @ e


def drazin_residuals(a, x, k, tol: ToleranceContext = DEFAULT_TOL) -> _Residuals:
    na, nx = frob(a), frob(x)
    ak, _ = _unit_power(a, k)
    ax = a @ x
    xa = x @ a
    res = _Residuals(tol)
    res.add("AXA^k=A^k", kernels.frob_prod_diff(ax, ak, ak), na * nx + 1.0)
    res.add("XAX=X", kernels.frob_prod_diff(x, ax, x), nx * nx * na + nx)
    res.add("AX=XA", kernels.frob_diff(ax, xa), 2 * na * nx)
    return res


def drazin(a, tol: ToleranceContext = DEFAULT_TOL, *, cross_check: bool = True) -> InverseResult:
    """Drazin inverse from the canonical block form, cross-checked by Cline's formula.

    Raises :class:`RouteDisagreement` when the two routes differ by more
    than ``100`` times the tolerance.
    """
    a = as_square(a)
    cf = canonical_form(a, tol)
    diagnostics = {}
    if cf.core_rank:
        _solve_inverse(cf.t, tol, diagnostics)
    x = drazin_block(cf)
    res = drazin_residuals(a, x, cf.index, tol)
    if cross_check:
        y = drazin_cline(a, cf.index, cf.core_rank)
        res.values["route_agreement"] = _agree(x, y, tol, "Drazin inverse (block vs Cline)")
    residuals = res.check("Drazin inverse")
    return InverseResult(x, "canonical", residuals, cf.index, cf.core_rank, diagnostics)


def group(a, tol: ToleranceContext = DEFAULT_TOL, *, cross_check: bool = True) -> InverseResult:
    """Group inverse; only defined for index <= 1."""
    a = as_square(a)
    k, _ = index_and_core_basis(a, tol)
    if k > 1:
        raise IndexTooLarge(k)
    d = drazin(a, tol, cross_check=cross_check)
    x = d.value
    na, nx = frob(a), frob(x)
    res = _Residuals(tol)
    res.values.update(d.residuals)
    res.add("AXA=A", kernels.frob_prod_diff(a @ x, a, a), na * na * nx + na)
    residuals = res.check("group inverse")
    return InverseResult(x, d.route, residuals, d.index, d.core_rank, d.diagnostics)


# -- core and core-EP ------------------------------------------------------


def core(a, tol: ToleranceContext = DEFAULT_TOL, *, cross_check: bool = True) -> InverseResult:
    """Core inverse ``U [[T^-1, 0], [0, 0]] U*`` from the unitary core form.

    Checked against ``AX = AA^+`` and ``R(X) subset R(A)``; the cross
    check compares with ``A^# A A^+``.
    """
    a = as_square(a)
    k, _ = index_and_core_basis(a, tol)
    if k > 1:
        raise IndexTooLarge(k)
    cf = core_form(a, tol)
    diagnostics = {}
    r = cf.core_rank
    tinv = _solve_inverse(cf.t, tol, diagnostics)
    q = cf.u[:, :r]
    x = q @ tinv @ ctranspose(q)
    mp = moore_penrose(a, tol).value
    na, nx = frob(a), frob(x)
    p = a @ mp
    res = _Residuals(tol)
    res.add("AX=AA+", kernels.frob_diff(a @ x, p), na * nx + frob(p))
    qa = range_basis(a, tol)
    res.add("R(X)<=R(A)", frob(x - qa @ (ctranspose(qa) @ x)), nx)
    if cross_check:
        g = group(a, tol, cross_check=False).value
        res.values["route_agreement"] = _agree(x, g @ p, tol, "core inverse (core form vs A#AA+)")
    residuals = res.check("core inverse")
    return InverseResult(x, "canonical", residuals, k, r, diagnostics)


def core_ep_formula(a, k, r, *, literal=False) -> np.ndarray:
    """``F ((F)* A F)^+ (F)*`` with ``F`` standing in for ``A^k``."""
    f = power_surrogate(a, k, r, literal=literal, side="range")
    fh = ctranspose(f)
    return f @ _pinv(fh @ a @ f, r) @ fh


def core_ep_residuals(a, x, k, q, tol: ToleranceContext = DEFAULT_TOL) -> _Residuals:
    """Residuals of ``XA^(k+1) = A^k``, ``XAX = X``, ``(AX)* = AX`` and ``R(X) in R(A^k)``.

    ``q`` is an orthonormal basis of R(A^k).
    """
    na, nx = frob(a), frob(x)
    ak, _ = _unit_power(a, k)
    ax = a @ x
    res = _Residuals(tol)
    res.add("XA^(k+1)=A^k", kernels.frob_prod_diff(x @ a, ak, ak), na * nx + 1.0)
    res.add("XAX=X", kernels.frob_prod_diff(x, ax, x), nx * nx * na + nx)
    res.add("(AX)*=AX", kernels.frob_diff(ctranspose(ax), ax), na * nx)
    res.add("R(X)<=R(A^k)", frob(x - q @ (ctranspose(q) @ x)), nx)
    return res


def core_ep(a, tol: ToleranceContext = DEFAULT_TOL, *, cross_check: bool = True) -> InverseResult:
    """Core-EP inverse ``U [[T^-1, 0], [0, 0]] U*`` from the canonical form.

    Cross-checked against ``A^k ((A^k)* A^(k+1))^+ (A^k)*``.
    """
    a = as_square(a)
    cf = canonical_form(a, tol)
    return _core_ep_from(a, cf, tol, cross_check)


def _core_ep_value(cf, tol, diagnostics):
    q = cf.u[:, : cf.core_rank]
    return q @ _solve_inverse(cf.t, tol, diagnostics) @ ctranspose(q)


def _core_ep_from(a, cf, tol, cross_check):
    diagnostics = {}
    r = cf.core_rank
    x = _core_ep_value(cf, tol, diagnostics)
    q = cf.u[:, :r]
    res = core_ep_residuals(a, x, cf.index, q, tol)
    if cross_check:
        y = core_ep_formula(a, cf.index, r)
        res.values["route_agreement"] = _agree(x, y, tol, "core-EP inverse (canonical vs formula)")
    residuals = res.check("core-EP inverse")
    return InverseResult(x, "canonical", residuals, cf.index, r, diagnostics)


def core_ep_projector(a, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """``A A^(core-EP)``, the orthogonal projector onto R(A^k)."""
    a = as_square(a)
    x = core_ep(a, tol, cross_check=False).value
    p = a @ x
    _, q = index_and_core_basis(a, tol)
    res = _Residuals(tol)
    np_ = max(frob(p), 1.0)
    res.add("P*=P", kernels.frob_diff(ctranspose(p), p), np_)
    res.add("P^2=P", kernels.frob_prod_diff(p, p, p), np_)
    res.add("P=QQ*", kernels.frob_diff(p, q @ ctranspose(q)), np_)
    res.check("core-EP projector")
    return p
