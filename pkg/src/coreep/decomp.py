"""Index, core form, canonical block form and the two additive splittings.

The canonical form of a square ``A`` is

    A = U [[T, S], [0, N]] U*

with ``U`` unitary, ``T`` nonsingular of size ``r = rk(A^k)`` and ``N``
nilpotent, where ``k = Ind(A)``.  The first ``r`` columns of ``U`` span
R(A^k).  The core-EP splitting reads off ``A1 = U [[T, S], [0, 0]] U*``
and ``A2 = U [[0, 0], [0, N]] U*``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ResidualTooLarge
from .numkernel import (
    DEFAULT_TOL,
    ToleranceContext,
    as_square,
    ctranspose,
    frob,
    power_chain,
    range_basis,
    rank,
    singular_values,
    unitary_complete,
)


@dataclass(frozen=True)
class CoreEPParts:
    a1: np.ndarray
    a2: np.ndarray
    index: int


@dataclass(frozen=True)
class CoreNilpotentParts:
    core: np.ndarray
    nil: np.ndarray
    index: int


@dataclass(frozen=True)
class CanonicalForm:
    """``A = u @ [[t, s], [0, nil]] @ u*`` with ``t`` of size ``core_rank``.

    ``index`` is the index of the analysed matrix (``None`` for the plain
    core form, whose ``t`` may be singular and whose ``nil`` is zero).
    """

    u: np.ndarray
    t: np.ndarray
    s: np.ndarray
    nil: np.ndarray
    core_rank: int
    index: int | None = None

    @property
    def n(self) -> int:
        return self.u.shape[0]

    def block(self) -> np.ndarray:
        """The middle factor ``[[T, S], [0, N]]``."""
        n, r = self.n, self.core_rank
        m = np.zeros((n, n), dtype=np.complex128)
        m[:r, :r] = self.t
        m[:r, r:] = self.s
        m[r:, r:] = self.nil
        return m

    def assemble(self) -> np.ndarray:
        return self.u @ self.block() @ ctranspose(self.u)

    def core_part(self) -> np.ndarray:
        """``U [[T, S], [0, 0]] U*``."""
        r = self.core_rank
        q = self.u[:, :r]
        return q @ np.hstack([self.t, self.s]) @ ctranspose(self.u)

    def nilpotent_part(self) -> np.ndarray:
        """``U [[0, 0], [0, N]] U*``."""
        r = self.core_rank
        qp = self.u[:, r:]
        return qp @ self.nil @ ctranspose(qp)


def _chain(a, tol):
    bases, ranks, settled = power_chain(a, tol)
    k = len(ranks) - 2
    if not settled:
        warnings.warn(
            f"rank sequence of powers did not settle within {a.shape[0] + 1} steps; "
            f"reporting index {k}",
            RuntimeWarning,
            stacklevel=3,
        )
    return k, bases[k], ranks


def index(a, tol: ToleranceContext = DEFAULT_TOL) -> int:
    """Smallest ``k >= 0`` with ``rk(A^(k+1)) = rk(A^k)``.

    Nonsingular matrices have index 0 and the zero matrix index 1.  The
    ranks come from an orthonormal subspace chain (see
    :func:`coreep.numkernel.power_chain`) rather than from explicit powers.
    """
    a = as_square(a)
    return _chain(a, tol)[0]


def index_and_core_basis(a, tol: ToleranceContext = DEFAULT_TOL) -> tuple[int, np.ndarray]:
    """``(Ind(A), Q)`` where ``Q`` is an orthonormal basis of R(A^Ind(A))."""
    a = as_square(a)
    k, q, _ = _chain(a, tol)
    return k, q


def _split(a, u, r):
    uh = ctranspose(u)
    b = uh @ a @ u
    return b[:r, :r], b[:r, r:], b[r:, :r], b[r:, r:]


def core_form(a, tol: ToleranceContext = DEFAULT_TOL) -> CanonicalForm:
    """Unitary core form ``A = U [[T, S], [0, 0]] U*`` with U[:, :r] spanning R(A)."""
    a = as_square(a)
    q = range_basis(a, tol)
    r = q.shape[1]
    u = unitary_complete(q)
    t, s, _, _ = _split(a, u, r)
    lower = ctranspose(u[:, r:]) @ a
    norm_a = frob(a)
    resid = frob(lower)
    # rows below R(A) vanish up to the discarded singular values
    if not tol.accepts(resid, norm_a * math.sqrt(a.shape[0])):
        raise ResidualTooLarge(
            f"core form lower block residual {resid:.3e} exceeds tolerance",
            {"lower_block": resid / norm_a if norm_a else resid},
        )
    n = a.shape[0]
    return CanonicalForm(
        u=u,
        t=t,
        s=s,
        nil=np.zeros((n - r, n - r), dtype=np.complex128),
        core_rank=r,
    )


def canonical_form(a, tol: ToleranceContext = DEFAULT_TOL) -> CanonicalForm:
    """Block form ``A = U [[T, S], [0, N]] U*`` with T nonsingular, N nilpotent.

    Raises :class:`ResidualTooLarge` if the lower-left block
    ``U2* A U1`` is not negligible, which happens only when the rank or
    index decision was unreliable.
    """
    a = as_square(a)
    k, q, _ = _chain(a, tol)
    r = q.shape[1]
    u = unitary_complete(q)
    t, s, lower, nil = _split(a, u, r)
    norm_a = frob(a)
    resid = frob(lower)
    if not tol.accepts(resid, norm_a):
        raise ResidualTooLarge(
            f"lower-left block residual {resid:.3e} exceeds tolerance "
            f"(||A||_F = {norm_a:.3e}); R(A^{k}) is not numerically A-invariant",
            {"lower_left": resid / norm_a},
        )
    return CanonicalForm(u=u, t=t, s=s, nil=nil, core_rank=r, index=k)


def core_ep_decompose(a, tol: ToleranceContext = DEFAULT_TOL, *, route: str = "projector") -> CoreEPParts:
    """Split ``A = A1 + A2`` with A1 of index <= 1, A2 nilpotent and A1* A2 = A2 A1 = 0.

    ``route="projector"`` (default) takes ``A1 = Q Q* A`` with Q an
    orthonormal basis of R(A^k).  ``route="formula"`` evaluates
    ``A1 = F F^(core) A`` with the library's core inverse, where F has the
    same range and null space as ``A^k`` (see
    :func:`coreep.inverses.power_surrogate`); ``route="literal"`` uses the
    scaled power ``(A/||A||)^k`` itself for F and is only reliable when
    A^k is well conditioned.  In every route ``A2 = A - A1`` exactly.
    """
    a = as_square(a)
    n = a.shape[0]
    k, q, _ = _chain(a, tol)
    r = q.shape[1]
    if r == n:
        return CoreEPParts(a1=a.copy(), a2=np.zeros_like(a), index=k)
    if route == "projector":
        a1 = q @ (ctranspose(q) @ a)
    elif route in ("formula", "literal"):
        from .inverses import core, power_surrogate

        if r == 0:
            a1 = np.zeros_like(a)
        else:
            f = power_surrogate(a, k, r, literal=route == "literal")
            a1 = f @ core(f, tol, cross_check=False).value @ a
    else:
        raise ValueError(f"unknown route {route!r}")
    return CoreEPParts(a1=a1, a2=a - a1, index=k)


def core_nilpotent_decompose(a, tol: ToleranceContext = DEFAULT_TOL) -> CoreNilpotentParts:
    """Split ``A = C + N`` with ``C = A A^D A`` and ``N = A - C``."""
    from .inverses import drazin

    a = as_square(a)
    res = drazin(a, tol)
    n = a.shape[0]
    if res.core_rank == n:
        return CoreNilpotentParts(core=a.copy(), nil=np.zeros_like(a), index=res.index)
    core = a @ res.value @ a
    return CoreNilpotentParts(core=core, nil=a - core, index=res.index)


def core_ep_law_residuals(a, parts: CoreEPParts, tol: ToleranceContext = DEFAULT_TOL) -> dict:
    """Absolute residuals of the four splitting laws plus the rank gap of A1.

    Keys: ``reconstruction``, ``a1_rank_gap`` (``rk(A1) - rk(A1^2)``, an
    integer), ``a2_power`` (``||A2^k||_F``), ``a1h_a2`` and ``a2_a1``.
    Ranks are judged against ``||A||_F`` so that a vanishing part is
    not mistaken for a full-rank cloud of rounding noise.
    """
    a = as_square(a)
    a1, a2, k = parts.a1, parts.a2, parts.index
    norm_a = frob(a)
    gap = rank(a1, tol, scale=norm_a) - rank(a1 @ a1, tol, scale=norm_a**2)
    if k == 0:
        a2_power = frob(a2)
    else:
        m, e = kernels.scaled_power(a2, k)
        a2_power = frob(m) * math.ldexp(1.0, e)
    return {
        "reconstruction": kernels.frob_diff(a1 + a2, a),
        "a1_rank_gap": gap,
        "a2_power": a2_power,
        "a1h_a2": kernels.frob_prod_diff(ctranspose(a1), a2, np.zeros_like(a)),
        "a2_a1": kernels.frob_prod_diff(a2, a1, np.zeros_like(a)),
    }


def canonical_residuals(a, cf: CanonicalForm) -> dict:
    """Residuals behind the CanonicalForm invariants, relative to ||A||_F where sensible."""
    a = as_square(a)
    n, r = cf.n, cf.core_rank
    norm_a = frob(a) or 1.0
    unit = kernels.frob_diff(ctranspose(cf.u) @ cf.u, np.eye(n, dtype=np.complex128))
    t_smin = singular_values(cf.t)[-1] if r else np.inf
    if n - r:
        nil_pow = np.linalg.matrix_power(cf.nil / norm_a, n - r)
        nil_res = frob(nil_pow)
    else:
        nil_res = 0.0
    return {
        "unitarity": unit,
        "t_min_singular": float(t_smin) / norm_a,
        "nil_power": nil_res,
        "reassembly": kernels.frob_diff(cf.assemble(), a) / norm_a,
    }
