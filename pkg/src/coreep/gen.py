"""Random matrices with prescribed rank, index and order relationships.

Everything is driven by a :class:`GenSpec`; the same spec (seed
included) always produces bit-identical output.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .decomp import CanonicalForm
from .errors import InfeasibleSpec
from .numkernel import ctranspose
from .orders import Relation

NIL_FAMILIES = ("zero", "equal", "embedded")


@dataclass(frozen=True)
class GenSpec:
    """Size ``n``, core rank ``r = rk(A^k)``, nilpotency index ``k`` of the nilpotent block.

    ``k = 0`` means nonsingular (``r == n``); otherwise ``n - r >= k``.
    Singular values of the ``T`` block are drawn from ``[1, conditioning]``.
    """

    n: int
    core_rank: int
    nilpotency_index: int
    seed: int = 0
    conditioning: float = 1e3

    def validate(self):
        n, r, k = self.n, self.core_rank, self.nilpotency_index
        if n < 1:
            raise InfeasibleSpec(f"n must be positive, got {n}")
        if not 0 <= r <= n:
            raise InfeasibleSpec(f"core rank {r} outside [0, {n}]")
        if k < 0:
            raise InfeasibleSpec(f"nilpotency index must be >= 0, got {k}")
        if k == 0 and r != n:
            raise InfeasibleSpec("index 0 requires core rank n")
        if k >= 1 and n - r < k:
            raise InfeasibleSpec(f"a nilpotent block of index {k} needs n - r >= {k}, have {n - r}")
        if not self.conditioning >= 1.0:
            raise InfeasibleSpec("conditioning must be >= 1")
        return self


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _gauss(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_unitary(n: int, seed=None) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre sample with phase fix."""
    if n < 1:
        raise InfeasibleSpec("n must be positive")
    rng = _rng(seed)
    q, r = np.linalg.qr(_gauss(rng, (n, n)))
    d = np.diag(r)
    return q * (d / np.abs(d))


def _unitary(rng, n):
    if n == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    return random_unitary(n, rng)


def random_nonsingular(rng, n, conditioning):
    """``W diag(s) V*`` with singular values spread over ``[1, conditioning]``."""
    if n == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    s = np.exp(rng.uniform(0.0, np.log(conditioning), n))
    if n >= 2:
        s[0], s[-1] = 1.0, conditioning
    return _unitary(rng, n) @ np.diag(s) @ ctranspose(_unitary(rng, n))


def _shift(rng, size, weighted=True):
    """Strictly upper-triangular block with a nonzero superdiagonal.

    Such a block has nilpotency index exactly ``size``, and the property
    survives storage in floating point: the stored entries form an exact
    matrix whose ``size``-th power is exactly zero.
    """
    j = np.zeros((size, size), dtype=np.complex128)
    if size > 1:
        w = rng.uniform(0.5, 2.0, size - 1) if weighted else np.ones(size - 1)
        j[np.arange(size - 1), np.arange(1, size)] = w
        if weighted:
            iu = np.triu_indices(size, 2)
            j[iu] = 0.5 * _gauss(rng, len(iu[0]))
    return j


def _block_diag(*blocks):
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=np.complex128)
    i = 0
    for b in blocks:
        m = b.shape[0]
        out[i : i + m, i : i + m] = b
        i += m
    return out


def _partition(rng, total, largest):
    """Random block sizes, each in [1, largest], summing to ``total``."""
    parts = []
    while total > 0:
        p = int(rng.integers(1, min(largest, total) + 1))
        parts.append(p)
        total -= p
    return parts


def _permute(rng, m):
    p = rng.permutation(m.shape[0])
    return m[np.ix_(p, p)]


def random_nilpotent(rng, size, index, *, permute=True):
    """A nilpotent ``size x size`` matrix of nilpotency index exactly ``index``.

    A direct sum of strictly upper-triangular blocks, one of size
    ``index`` and the rest no larger, optionally under a random
    permutation similarity.  The index is exact for the stored floating
    point matrix.  ``index = 1`` gives the zero matrix.
    """
    if size == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    if not 1 <= index <= size:
        raise InfeasibleSpec(f"no {size}x{size} nilpotent matrix has index {index}")
    blocks = [_shift(rng, index)] + [_shift(rng, p) for p in _partition(rng, size - index, index)]
    n = _block_diag(*blocks)
    return _permute(rng, n) if permute else n


def _assemble(u, blocks):
    return u @ blocks @ ctranspose(u)


def matrix_with_structure(spec: GenSpec) -> tuple[np.ndarray, CanonicalForm]:
    """``A = U [[T, S], [0, N]] U*`` together with its ground-truth canonical form.

    ``Ind(A) = spec.nilpotency_index`` and ``rk(A^k) = spec.core_rank``.
    """
    spec.validate()
    rng = _rng(spec.seed)
    n, r, k = spec.n, spec.core_rank, spec.nilpotency_index
    m = n - r
    t = random_nonsingular(rng, r, spec.conditioning)
    s = _gauss(rng, (r, m))
    nil = random_nilpotent(rng, m, max(k, 1)) if m else np.zeros((0, 0), dtype=np.complex128)
    u = random_unitary(n, rng)
    mid = np.zeros((n, n), dtype=np.complex128)
    mid[:r, :r] = t
    mid[:r, r:] = s
    mid[r:, r:] = nil
    cf = CanonicalForm(u=u, t=t, s=s, nil=nil, core_rank=r, index=k)
    return _assemble(u, mid), cf


def _nil_pair(rng, size, index, family):
    """Nilpotent ``(N1, N2)`` with ``N1 <= N2`` in the minus order and Ind(N2) = index."""
    if size == 0:
        z = np.zeros((0, 0), dtype=np.complex128)
        return z, z
    index = max(index, 1)
    if family == "zero":
        n2 = random_nilpotent(rng, size, index)
        return np.zeros_like(n2), n2
    if family == "equal":
        n2 = random_nilpotent(rng, size, index)
        return n2.copy(), n2
    if family == "embedded":
        first = _shift(rng, index)
        rest = [_shift(rng, p) for p in _partition(rng, size - index, index)]
        n2 = _block_diag(first, *rest)
        # keep a random nonempty subset of the blocks in N1
        keep = rng.random(1 + len(rest)) < 0.5
        blocks = [first] + rest
        n1 = _block_diag(*[b if kp else np.zeros_like(b) for b, kp in zip(blocks, keep)])
        p = rng.permutation(size)
        return n1[np.ix_(p, p)], n2[np.ix_(p, p)]
    raise ValueError(f"unknown nilpotent family {family!r}")


def _split_rank(rng, r, need_first=True):
    lo = 1 if need_first and r >= 1 else 0
    r1 = int(rng.integers(lo, r + 1)) if r >= lo else 0
    return r1, r - r1


def _perturb_first(block, amount=1.0):
    block = block.copy()
    block[0, 0] += amount
    return block


def _three_block(sizes, rows):
    n = sum(sizes)
    out = np.zeros((n, n), dtype=np.complex128)
    offs = np.cumsum([0] + list(sizes))
    for i, row in enumerate(rows):
        for j, blk in enumerate(row):
            if blk is not None and blk.size:
                out[offs[i] : offs[i + 1], offs[j] : offs[j + 1]] = blk
    return out


def _similarity(rng, n, conditioning=2.0):
    p = random_nonsingular(rng, n, conditioning)
    return p, np.linalg.inv(p)


def order_pair(spec: GenSpec, relation, *, positive: bool = True, family: str | None = None):
    """A pair ``(A, B)`` that satisfies ``A <= B`` under ``relation`` by construction.

    ``spec`` describes ``B``: ``core_rank`` is ``rk(B^k)`` and
    ``nilpotency_index`` the index of B's nilpotent block.  With
    ``positive=False`` one shared block of ``B`` is perturbed by 1 in one
    entry (or, for the minus order, the shared summand is doubled) so the
    relation fails.  ``family`` picks the minus-dominated nilpotent pair
    for ``core_minus`` and ``cn`` (default: random).
    """
    spec.validate()
    relation = Relation(relation)
    rng = _rng(spec.seed)
    n, r, k = spec.n, spec.core_rank, spec.nilpotency_index
    m = n - r
    cond = spec.conditioning
    if not positive and r == 0:
        raise InfeasibleSpec("negative pairs need a nonzero shared core block")
    if family is None:
        family = NIL_FAMILIES[int(rng.integers(len(NIL_FAMILIES)))]

    if relation in (Relation.CORE_EP, Relation.CORE_MINUS):
        r1, r2 = _split_rank(rng, r)
        t1 = random_nonsingular(rng, r1, cond)
        t3 = random_nonsingular(rng, r2, cond)
        t2 = _gauss(rng, (r1, r2))
        s1 = _gauss(rng, (r1, m))
        s2 = _gauss(rng, (r2, m))
        if relation is Relation.CORE_EP:
            n2 = random_nilpotent(rng, m, max(k, 1)) if m else np.zeros((0, 0), complex)
            na_size = r2 + m
            na = random_nilpotent(rng, na_size, int(rng.integers(1, na_size + 1))) if na_size else None
            a_mid = np.zeros((n, n), dtype=np.complex128)
            a_mid[:r1, :r1] = t1
            a_mid[:r1, r1 : r1 + r2] = t2
            a_mid[:r1, r1 + r2 :] = s1
            if na_size:
                a_mid[r1:, r1:] = na
        else:
            n1, n2 = _nil_pair(rng, m, k, family)
            a_mid = _three_block((r1, r2, m), [[t1, t2, s1], [None, None, None], [None, None, n1]])
        t1b = t1 if positive else _perturb_first(t1)
        b_mid = _three_block((r1, r2, m), [[t1b, t2, s1], [None, t3, s2], [None, None, n2]])
        u = random_unitary(n, rng)
        return _assemble(u, a_mid), _assemble(u, b_mid)

    if relation is Relation.CORE:
        if k > 1:
            raise InfeasibleSpec("core order pairs need index <= 1")
        r1, r2 = _split_rank(rng, r)
        t = random_nonsingular(rng, r1, cond)
        s = _gauss(rng, (r1, n - r1))
        # Z of index <= 1 in the trailing block: its own unitary core form
        zt = random_nonsingular(rng, r2, cond)
        zs = _gauss(rng, (r2, n - r1 - r2))
        v = _unitary(rng, n - r1)
        z = v @ _three_block((r2, n - r1 - r2), [[zt, zs], [None, None]]) @ ctranspose(v)
        tb = t if positive else _perturb_first(t)
        a_mid = _three_block((r1, n - r1), [[t, s], [None, None]])
        b_mid = _three_block((r1, n - r1), [[tb, s], [None, z]])
        u = random_unitary(n, rng)
        return _assemble(u, a_mid), _assemble(u, b_mid)

    if relation is Relation.SHARP:
        if k > 1:
            raise InfeasibleSpec("sharp order pairs need index <= 1")
        r1, r2 = _split_rank(rng, r)
        t1 = random_nonsingular(rng, r1, cond)
        t2 = random_nonsingular(rng, r2, cond)
        p, pinv = _similarity(rng, n)
        z = np.zeros((m, m), dtype=np.complex128)
        t1b = t1 if positive else _perturb_first(t1)
        return p @ _block_diag(t1, np.zeros((r2, r2)), z) @ pinv, p @ _block_diag(t1b, t2, z) @ pinv

    if relation is Relation.DRAZIN:
        t = random_nonsingular(rng, r, cond)
        nil = random_nilpotent(rng, m, max(k, 1)) if m else np.zeros((0, 0), complex)
        y = _gauss(rng, (m, m))
        p, pinv = _similarity(rng, n)
        tb = t if positive else _perturb_first(t)
        return p @ _block_diag(t, nil) @ pinv, p @ _block_diag(tb, y) @ pinv

    if relation is Relation.CN:
        r1, r2 = _split_rank(rng, r)
        t1 = random_nonsingular(rng, r1, cond)
        t2 = random_nonsingular(rng, r2, cond)
        n1, n2 = _nil_pair(rng, m, k, family)
        p, pinv = _similarity(rng, n)
        t1b = t1 if positive else _perturb_first(t1)
        a = p @ _block_diag(t1, np.zeros((r2, r2)), n1) @ pinv
        b = p @ _block_diag(t1b, t2, n2) @ pinv
        return a, b

    if relation is Relation.MINUS:
        # rk(B) = r; A takes r1 of those rank-one directions
        r1, r2 = _split_rank(rng, r)
        f = _gauss(rng, (n, r))
        g = _gauss(rng, (r, n))
        a = f[:, :r1] @ g[:r1]
        rest = f[:, r1:] @ g[r1:]
        b = a + rest if positive else 2 * a + rest
        return a, b

    raise ValueError(f"unsupported relation {relation}")


def core_ep_triple(spec: GenSpec):
    """``(A, B, C)`` with ``A <= B <= C`` in the core-EP order, by nesting the block form twice.

    ``spec`` describes ``C``; its core rank is split into three diagonal
    blocks, the first shared by all three matrices, the first two by B and C.
    """
    spec.validate()
    rng = _rng(spec.seed)
    n, r, k = spec.n, spec.core_rank, spec.nilpotency_index
    m = n - r
    r1 = int(rng.integers(1, r + 1)) if r else 0
    r2 = int(rng.integers(0, r - r1 + 1))
    r3 = r - r1 - r2
    sizes = (r1, r2, r3, m)
    c_mid = np.zeros((n, n), dtype=np.complex128)
    offs = np.cumsum((0,) + sizes)
    for i, sz in enumerate(sizes):
        lo, hi = offs[i], offs[i + 1]
        if i < 3:
            c_mid[lo:hi, lo:hi] = random_nonsingular(rng, sz, spec.conditioning)
        elif sz:
            c_mid[lo:hi, lo:hi] = random_nilpotent(rng, sz, max(k, 1))
        c_mid[lo:hi, hi:] = _gauss(rng, (sz, n - hi))
    b_mid = c_mid.copy()
    tail = r1 + r2
    b_mid[tail:, :] = 0
    if n - tail:
        b_mid[tail:, tail:] = random_nilpotent(rng, n - tail, int(rng.integers(1, n - tail + 1)))
    a_mid = b_mid.copy()
    a_mid[r1:, :] = 0
    if n - r1:
        a_mid[r1:, r1:] = random_nilpotent(rng, n - r1, int(rng.integers(1, n - r1 + 1)))
    u = random_unitary(n, rng)
    return _assemble(u, a_mid), _assemble(u, b_mid), _assemble(u, c_mid)


BIDIRECTIONAL_FAMILIES = ("free", "zero", "embedded", "equal", "twin")


def bidirectional_pair(spec: GenSpec, family: str | None = None):
    """``(A, B)`` with ``A <= B`` and ``B <= A`` in the core-EP order.

    Both share ``U``, ``T`` and ``S`` and differ only in the nilpotent
    block, so core-EP comparability holds in both directions.  ``family``
    picks the nilpotent blocks: ``free`` (independent), ``zero`` or
    ``embedded`` (minus-comparable but distinct), ``equal`` (``A = B``)
    or ``twin`` (``B`` is ``A`` plus a perturbation of relative size 1e-14).
    """
    spec.validate()
    rng = _rng(spec.seed)
    n, r, k = spec.n, spec.core_rank, spec.nilpotency_index
    m = n - r
    if family is None:
        family = BIDIRECTIONAL_FAMILIES[int(rng.integers(len(BIDIRECTIONAL_FAMILIES)))]
    t = random_nonsingular(rng, r, spec.conditioning)
    s = _gauss(rng, (r, m))
    if family == "free":
        nb = random_nilpotent(rng, m, max(k, 1)) if m else np.zeros((0, 0), complex)
        na = random_nilpotent(rng, m, int(rng.integers(1, m + 1))) if m else nb
    elif family == "twin":
        na, nb = _nil_pair(rng, m, k, "equal")
    else:
        na, nb = _nil_pair(rng, m, k, family)
    u = random_unitary(n, rng)
    a = _assemble(u, _three_block((r, m), [[t, s], [None, na]]))
    b = _assemble(u, _three_block((r, m), [[t, s], [None, nb]]))
    if family == "twin":
        g = _gauss(rng, (n, n))
        b = a + 1e-14 * np.linalg.norm(a) * g / np.linalg.norm(g)
    return a, b


def corpus(count: int, *, n_max: int = 8, index_max: int = 4, conditioning: float = 1e3, seed: int = 0):
    """``count`` GenSpecs covering sizes 1..n_max and indices 0..index_max."""
    rng = np.random.default_rng(seed)
    specs = []
    while len(specs) < count:
        n = int(rng.integers(1, n_max + 1))
        k = int(rng.integers(0, min(index_max, n) + 1))
        r = n if k == 0 else int(rng.integers(0, n - k + 1))
        specs.append(
            GenSpec(n=n, core_rank=r, nilpotency_index=k, seed=int(rng.integers(2**31)), conditioning=conditioning)
        )
    return specs


def with_seed(spec: GenSpec, seed: int) -> GenSpec:
    return replace(spec, seed=seed)
