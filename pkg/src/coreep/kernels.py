"""Hot-loop kernels, compiled when available.

``BACKEND`` is ``"cython"`` if the extension imported, else ``"python"``.
The compiled matmul loop is only used for small matrices; above
``_COMPILED_MAX_N`` BLAS wins and the numpy path is taken regardless
(crossover measured with benchmarks/bench_kernels.py).
"""

import math

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

_COMPILED_MAX_N = 12


def _c(a):
    return np.ascontiguousarray(a, dtype=np.complex128)


if _compiled is not None:

    def frob(a):
        return _compiled.frob(_c(a))

    def frob_diff(a, b):
        return _compiled.frob_diff(_c(a), _c(b))

    def frob_prod_diff(a, b, c):
        if a.shape[0] > _COMPILED_MAX_N or b.shape[1] > _COMPILED_MAX_N:
            return _kernels_py.frob_prod_diff(a, b, c)
        return _compiled.frob_prod_diff(_c(a), _c(b), _c(c))

    def _power(a, p):
        if a.shape[0] > _COMPILED_MAX_N:
            return _kernels_py.scaled_power(a, p)
        return _compiled.scaled_power(a, p)

else:
    frob = _kernels_py.frob
    frob_diff = _kernels_py.frob_diff
    frob_prod_diff = _kernels_py.frob_prod_diff
    _power = _kernels_py.scaled_power


def scaled_power(a, p):
    """``(m, e)`` with ``m * 2**e == a**p``; see ``_kernels_py.scaled_power``.

    ``a`` is first brought to unit magnitude by an exact power of two so
    that the first product cannot overflow or underflow.
    """
    a = _c(a)
    amax = float(np.max(np.abs(a))) if a.size else 0.0
    if amax == 0.0:
        return np.zeros(a.shape, dtype=np.complex128), 0
    ka = math.frexp(amax)[1] - 1  # max entry in [1, 2)
    if ka:
        a = a * math.ldexp(1.0, -ka)
    m, e = _power(a, int(p))
    if not m.any():
        return m, 0
    return m, e + int(p) * ka
