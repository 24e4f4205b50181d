import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coreep import _kernels_py, kernels

compiled = pytest.importorskip("coreep._kernels")


def _cplx(n, m, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**31 - 1))
def test_norm_kernels_agree(n, seed):
    a, b, c = (_cplx(n, n, seed + i) for i in range(3))
    assert compiled.frob(a) == pytest.approx(_kernels_py.frob(a), rel=1e-14)
    assert compiled.frob_diff(a, b) == pytest.approx(_kernels_py.frob_diff(a, b), rel=1e-14)
    assert compiled.frob_prod_diff(a, b, c) == pytest.approx(_kernels_py.frob_prod_diff(a, b, c), rel=1e-13)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10), st.integers(1, 12), st.integers(0, 2**31 - 1))
def test_scaled_power_kernels_agree(n, p, seed):
    a = _cplx(n, n, seed)
    m1, e1 = compiled.scaled_power(a, p)
    m2, e2 = _kernels_py.scaled_power(a, p)
    assert e1 == e2
    np.testing.assert_allclose(m1, m2, rtol=1e-11, atol=1e-13)


def test_rectangular_product_kernel():
    a, b = _cplx(3, 5, 1), _cplx(5, 2, 2)
    c = a @ b
    assert compiled.frob_prod_diff(a, b, c) < 1e-14
    with pytest.raises(ValueError):
        compiled.frob_prod_diff(a, a, c)


def test_dispatch_handles_large_and_noncontiguous():
    a = _cplx(30, 30, 3)
    m, e = kernels.scaled_power(a, 3)
    np.testing.assert_allclose(m * 2.0**e, np.linalg.matrix_power(a, 3), rtol=1e-12)
    t = _cplx(6, 6, 4).T  # Fortran-ordered view
    assert kernels.frob(t) == pytest.approx(np.linalg.norm(t), rel=1e-14)


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "python")
