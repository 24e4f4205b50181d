"""High-precision reference values computed without the package.

Everything here works in mpmath at ``DPS`` decimal digits and evaluates
the textbook formulas literally: explicit powers, full-rank
factorizations from pivoted Gram-Schmidt, and plain inverses of the
small nonsingular cores.  No SVD, Schur form or tolerance logic from
``coreep`` is involved.
"""

from __future__ import annotations

import mpmath as mp
import numpy as np

DPS = 40
RANK_RTOL = mp.mpf("1e-25")


def to_mp(a) -> mp.matrix:
    a = np.asarray(a, dtype=complex)
    m = mp.matrix(a.shape[0], a.shape[1])
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            z = a[i, j]
            m[i, j] = mp.mpc(float(z.real), float(z.imag))
    return m


def to_np(m: mp.matrix) -> np.ndarray:
    out = np.empty((m.rows, m.cols), dtype=complex)
    for i in range(m.rows):
        for j in range(m.cols):
            out[i, j] = complex(m[i, j])
    return out


def ct(m: mp.matrix) -> mp.matrix:
    return m.transpose_conj()


def eye(n):
    return mp.eye(n)


def zeros(r, c):
    return mp.zeros(r, c)


def fro(m: mp.matrix):
    return mp.sqrt(mp.fsum(abs(m[i, j]) ** 2 for i in range(m.rows) for j in range(m.cols)))


def power(a: mp.matrix, k: int) -> mp.matrix:
    out = eye(a.rows)
    for _ in range(k):
        out = out * a
    return out


def column_basis(m: mp.matrix, ref=None, rtol=RANK_RTOL) -> mp.matrix:
    """Orthonormal basis of R(m) by Gram-Schmidt with column pivoting and re-orthogonalisation.

    Columns whose remaining norm drops below ``rtol * ref`` are discarded;
    ``ref`` defaults to the largest column norm of ``m``.
    """
    n, c = m.rows, m.cols
    cols = [m[:, j] for j in range(c)]
    if ref is None:
        ref = max((fro(v) for v in cols), default=mp.mpf(0))
    basis = []
    if ref == 0:
        return zeros(n, 0) if n else mp.matrix(0, 0)
    while cols:
        norms = [fro(v) for v in cols]
        j = max(range(len(cols)), key=lambda i: norms[i])
        if norms[j] <= rtol * ref:
            break
        v = cols.pop(j)
        for _ in range(2):
            for q in basis:
                v = v - q * (ct(q) * v)[0, 0]
        v = v / fro(v)
        basis.append(v)
        for i in range(len(cols)):
            cols[i] = cols[i] - v * (ct(v) * cols[i])[0, 0]
    out = zeros(n, len(basis))
    for j, q in enumerate(basis):
        out[:, j] = q
    return out


def rank(m: mp.matrix, ref=None) -> int:
    return column_basis(m, ref).cols


def index(a: mp.matrix) -> int:
    n = a.rows
    ranks = [n]
    p = eye(n)
    na = fro(a)
    for j in range(1, n + 2):
        p = p * a
        ranks.append(rank(p, na**j))
        if ranks[-1] == ranks[-2]:
            return len(ranks) - 2
    raise AssertionError("rank sequence did not settle")


def moore_penrose(a: mp.matrix) -> mp.matrix:
    """``G* (G G*)^-1 (F* F)^-1 F*`` for the full-rank factorization A = F G."""
    f = column_basis(a, fro(a))
    if f.cols == 0:
        return zeros(a.cols, a.rows)
    g = ct(f) * a
    return ct(g) * mp.inverse(g * ct(g)) * ct(f)


def power_basis(a: mp.matrix):
    """``(k, A^k, F)`` with F an orthonormal basis of R(A^k), k = Ind(A)."""
    k = index(a)
    ak = power(a, k)
    return k, ak, column_basis(ak, fro(a) ** k)


def drazin(a: mp.matrix) -> mp.matrix:
    """Cline: with A^k = F G, A^D = F (G A F)^-1 G."""
    k, ak, f = power_basis(a)
    if f.cols == 0:
        return zeros(a.rows, a.rows)
    g = ct(f) * ak
    return f * mp.inverse(g * a * f) * g


def core_ep(a: mp.matrix) -> mp.matrix:
    """``A^k ((A^k)* A^(k+1))^- (A^k)*`` reduced through A^k = F G to F (F* A F)^-1 F*."""
    _, _, f = power_basis(a)
    if f.cols == 0:
        return zeros(a.rows, a.rows)
    return f * mp.inverse(ct(f) * a * f) * ct(f)


def core_inverse_index1(m: mp.matrix, ref=None) -> mp.matrix:
    """``M^# M M^+`` for index-one M; equals F (G F)^-1 (F* F)^-1 F* when M = F G."""
    f = column_basis(m, ref)
    if f.cols == 0:
        return zeros(m.rows, m.rows)
    g = ct(f) * m
    return f * mp.inverse(g * f) * mp.inverse(ct(f) * f) * ct(f)


def core_ep_a1(a: mp.matrix) -> mp.matrix:
    """``A^k (A^k)^(core) A`` evaluated literally."""
    k = index(a)
    ak = power(a, k)
    return ak * core_inverse_index1(ak, fro(a) ** k) * a


def exact_from_blocks(u, t, s, nil) -> mp.matrix:
    """``U [[T, S], [0, N]] U^-1`` in high precision from double factors.

    Using the true inverse of the (nearly unitary) double ``U`` keeps the
    rank and index of the block matrix exact at working precision.
    """
    r = t.shape[0]
    n = u.shape[0]
    mid = np.zeros((n, n), dtype=complex)
    mid[:r, :r] = t
    mid[:r, r:] = s
    mid[r:, r:] = nil
    um = to_mp(u)
    return um * to_mp(mid) * mp.inverse(um)


class precision:
    """Context manager fixing mpmath precision for a block of oracle work."""

    def __enter__(self):
        self._ctx = mp.workdps(DPS)
        self._ctx.__enter__()
        return self

    def __exit__(self, *exc):
        return self._ctx.__exit__(*exc)
