"""Dense complex matrix primitives governed by an explicit tolerance.

Matrices are plain 2-D ``complex128`` numpy arrays; :func:`as_matrix`
validates and converts.  Every rank, equality and residual decision in
the package goes through a :class:`ToleranceContext`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NonFiniteMatrix, NonOrthonormalInput, ShapeMismatch

EPS = np.finfo(np.float64).eps


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a finite 2-D complex128 array (copy only if needed)."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteMatrix("matrix has NaN or infinite entries")
    return m


def as_square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got {m.shape}")
    return m


def ctranspose(a: np.ndarray) -> np.ndarray:
    return a.conj().T


@dataclass(frozen=True)
class ToleranceContext:
    """Absolute and relative thresholds.

    A quantity ``r`` measured against a reference magnitude ``scale``
    is accepted as zero when ``r <= atol + rtol * scale``.  Singular
    values count toward rank when ``s > max(atol, rtol * scale)``.
    """

    atol: float = 0.0
    rtol: float = 1e-10

    def __post_init__(self):
        if not (math.isfinite(self.atol) and math.isfinite(self.rtol)):
            raise ValueError("tolerances must be finite")
        if self.atol < 0 or self.rtol < 0:
            raise ValueError("tolerances must be non-negative")
        if self.atol == 0 and self.rtol == 0:
            raise ValueError("atol and rtol cannot both be zero")

    def rank_threshold(self, scale: float) -> float:
        return max(self.atol, self.rtol * scale)

    def accepts(self, residual: float, scale: float) -> bool:
        return residual <= self.atol + self.rtol * scale

    @classmethod
    def machine(cls, n: int) -> ToleranceContext:
        """The conventional ``n * eps`` rank tolerance for an n x n problem."""
        return cls(atol=0.0, rtol=max(n, 1) * EPS)


DEFAULT_TOL = ToleranceContext()


def frob(a: np.ndarray) -> float:
    return kernels.frob(a)


def singular_values(a: np.ndarray) -> np.ndarray:
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def _count_above(s: np.ndarray, tol: ToleranceContext, scale) -> int:
    if s.size == 0:
        return 0
    ref = s[0] if scale is None else scale
    if ref == 0.0 and tol.atol == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_threshold(ref)))


def rank(a, tol: ToleranceContext = DEFAULT_TOL, scale: float | None = None) -> int:
    """Numerical rank of ``a``.

    Counts singular values above ``max(atol, rtol * scale)``; ``scale``
    defaults to the largest singular value.  Passing an outside scale
    matters when ``a`` is a difference or a residual whose own largest
    singular value may be pure rounding noise.
    """
    return _count_above(singular_values(as_matrix(a)), tol, scale)


def range_basis(a, tol: ToleranceContext = DEFAULT_TOL, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis (n x r) of the numerical column space of ``a``.

    Columns are phase-normalised so the entry of largest modulus in each
    column is real and positive, which makes bases of coordinate
    subspaces come out as plain unit vectors.
    """
    a = as_matrix(a)
    if a.size == 0:
        return np.zeros((a.shape[0], 0), dtype=np.complex128)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    r = _count_above(s, tol, scale)
    return normalize_phases(u[:, :r])


def normalize_phases(q: np.ndarray) -> np.ndarray:
    if q.shape[1] == 0:
        return q.copy()
    idx = np.argmax(np.abs(q), axis=0)
    piv = q[idx, np.arange(q.shape[1])]
    return q * (np.abs(piv) / piv)


def unitary_complete(q, *, check_tol: float | None = None) -> np.ndarray:
    """Extend orthonormal columns ``q`` (n x r) to an n x n unitary matrix.

    The first r columns of the result are ``q`` itself.  Raises
    :class:`NonOrthonormalInput` when ``||q* q - I||_F`` exceeds
    ``check_tol`` (default ``1e3 * n * eps``).
    """
    q = as_matrix(q)
    n, r = q.shape
    if r > n:
        raise ShapeMismatch(f"cannot have {r} orthonormal columns in C^{n}")
    if check_tol is None:
        check_tol = 1e3 * max(n, 1) * EPS
    gram_err = kernels.frob_diff(ctranspose(q) @ q, np.eye(r, dtype=np.complex128))
    if gram_err > check_tol:
        raise NonOrthonormalInput(f"||Q*Q - I||_F = {gram_err:.3e} exceeds {check_tol:.3e}")
    if r == n:
        return q.copy()
    if r == 0:
        return np.eye(n, dtype=np.complex128)
    full, _ = np.linalg.qr(q, mode="complete")
    u = np.empty((n, n), dtype=np.complex128)
    u[:, :r] = q
    u[:, r:] = normalize_phases(full[:, r:])
    return u


def approx_eq(a, b, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """``||a - b||_F <= atol + rtol * max(||a||_F, ||b||_F)``."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    return tol.accepts(kernels.frob_diff(a, b), max(frob(a), frob(b)))


def scaled_power(a, p: int) -> tuple[np.ndarray, float]:
    """Return ``(m, s)`` with ``s * m == a**p`` computed without overflow.

    ``||m||_F`` lies in [1/2, 2] unless the power vanishes, in which case
    ``(0, 0.0)`` is returned.  ``s`` is a power of two; for extreme inputs
    it may overflow to ``inf`` while ``m`` stays usable for range work.
    """
    a = as_square(a)
    if p < 1:
        raise ValueError("power must be a positive integer")
    m, e = kernels.scaled_power(a, int(p))
    if e == 0 and not m.any():
        return m, 0.0
    try:
        s = math.ldexp(1.0, e)
    except OverflowError:
        s = math.inf
    return m, s


def power_chain(a, tol: ToleranceContext = DEFAULT_TOL, max_steps: int | None = None):
    """Orthonormal bases of R(A^j) for j = 0, 1, ... until the rank settles.

    Each step maps the previous basis through ``a`` and re-orthonormalises,
    so no explicit power is ever formed.  Ranks are judged against the
    largest singular value of ``a`` itself, which keeps decisions stable
    when a power is dominated by a few large directions.

    Returns ``(bases, ranks, settled)`` where ``bases[j]`` spans R(A^j)
    (only the settled basis ``bases[-2]`` is phase-normalised)
    and ``settled`` tells whether two consecutive ranks coincided within
    ``max_steps`` (default n + 1) steps.
    """
    a = as_square(a)
    n = a.shape[0]
    if max_steps is None:
        max_steps = n + 1
    s_max = singular_values(a)[0] if n else 0.0
    q = np.eye(n, dtype=np.complex128)
    bases = [q]
    ranks = [n]
    for _ in range(max_steps):
        y = a @ q
        if y.shape[1] == 0:
            q = y
        else:
            u, s, _ = np.linalg.svd(y, full_matrices=False)
            q = u[:, : _count_above(s, tol, s_max)]
        bases.append(q)
        ranks.append(q.shape[1])
        if ranks[-1] == ranks[-2]:
            break
    # only the settled basis is handed out in canonical phase
    bases[-2] = normalize_phases(bases[-2])
    return bases, ranks, ranks[-1] == ranks[-2]
