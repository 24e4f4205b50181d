"""Pure numpy implementations of the hot kernels.

Mirrors the signatures in ``_kernels.pyx`` exactly; ``coreep.kernels``
picks one of the two at import time.
"""

import math

import numpy as np


def frob(a):
    """Frobenius norm of a 2-D complex array."""
    return float(np.sqrt(np.vdot(a, a).real))


def frob_diff(a, b):
    d = a - b
    return float(np.sqrt(np.vdot(d, d).real))


def frob_prod_diff(a, b, c):
    """Return ||a @ b - c||_F."""
    d = a @ b - c
    return float(np.sqrt(np.vdot(d, d).real))


def scaled_power(a, p):
    """Return ``(m, e)`` with ``m * 2**e == a**p`` and ``||m||_F`` in [1/2, 2].

    Rescaling uses exact powers of two, so ``m`` carries no rounding beyond
    that of the products themselves.  A zero power returns ``(0, 0)``.
    """
    n = a.shape[0]
    m = np.eye(n, dtype=np.complex128)
    e = 0
    for _ in range(p):
        m = a @ m
        nrm = frob(m)
        if nrm == 0.0:
            return np.zeros((n, n), dtype=np.complex128), 0
        if nrm < 0.5 or nrm > 2.0:
            _, k = math.frexp(nrm)
            m *= math.ldexp(1.0, -k)
            e += k
    return m, e
