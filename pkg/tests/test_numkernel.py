import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import A_EX, B_EX, SHIFT2
from coreep import gen
from coreep.errors import NonFiniteMatrix, NonOrthonormalInput, ShapeMismatch
from coreep.numkernel import (
    EPS,
    ToleranceContext,
    approx_eq,
    as_matrix,
    power_chain,
    range_basis,
    rank,
    scaled_power,
    unitary_complete,
)


def _random(n, seed, m=None):
    rng = np.random.default_rng(seed)
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


# -- validation and tolerance ----------------------------------------------


def test_as_matrix_rejects_nan_and_bad_ndim():
    with pytest.raises(NonFiniteMatrix):
        as_matrix([[1.0, np.nan]])
    with pytest.raises(NonFiniteMatrix):
        as_matrix([[np.inf]])
    with pytest.raises(ShapeMismatch):
        as_matrix([1.0, 2.0])


@pytest.mark.parametrize("atol,rtol", [(-1.0, 0.0), (0.0, -1e-3), (0.0, 0.0), (math.nan, 1e-10)])
def test_tolerance_validation(atol, rtol):
    with pytest.raises(ValueError):
        ToleranceContext(atol=atol, rtol=rtol)


def test_machine_tolerance_scales_with_n():
    assert ToleranceContext.machine(10).rtol == pytest.approx(10 * EPS)


# -- rank ------------------------------------------------------------------


@pytest.mark.parametrize(
    "a,expected",
    [(np.eye(3), 3), (A_EX, 1), (B_EX, 2), (np.zeros((3, 3)), 0), (SHIFT2, 1)],
)
def test_rank_examples(a, expected):
    assert rank(a) == expected


def test_rank_rectangular():
    assert rank(np.array([[1, 2, 3], [2, 4, 6]])) == 1


def test_rank_uses_atol():
    a = np.diag([1.0, 1e-3])
    assert rank(a, ToleranceContext(atol=1e-2, rtol=0.0)) == 1
    assert rank(a, ToleranceContext(atol=1e-4, rtol=0.0)) == 2


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 8), st.integers(0, 2**31 - 1))
def test_rank_unitary_invariance(n, r, seed):
    r = min(r, n)
    rng = np.random.default_rng(seed)
    a = _random(n, seed, r) @ _random(r, seed + 1, n) if r else np.zeros((n, n))
    u = gen.random_unitary(n, rng)
    v = gen.random_unitary(n, rng)
    assert rank(u @ a @ v) == rank(a) == r


# -- range basis and completion ----------------------------------------------


def test_range_basis_of_example_a_is_e1():
    q = range_basis(A_EX)
    np.testing.assert_allclose(q, [[1], [0], [0]], atol=1e-15)


def test_range_basis_of_identity_and_zero():
    q = range_basis(np.eye(4))
    np.testing.assert_allclose(q @ q.conj().T, np.eye(4), atol=1e-14)
    assert range_basis(np.zeros((3, 3))).shape == (3, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 2**31 - 1))
def test_range_basis_properties(n, r, seed):
    r = min(r, n)
    a = _random(n, seed, r) @ _random(r, seed + 1, n)
    q = range_basis(a)
    assert q.shape == (n, r)
    assert np.linalg.norm(q.conj().T @ q - np.eye(r)) < 1e-12
    na = np.linalg.norm(a)
    assert np.linalg.norm(a - q @ (q.conj().T @ a)) <= 1e-10 * na
    # idempotence: basis of Q Q* A spans the same space
    q2 = range_basis(q @ (q.conj().T @ a))
    assert np.linalg.norm((np.eye(n) - q @ q.conj().T) @ (q2 @ q2.conj().T)) < 1e-10


def test_unitary_complete_examples():
    e1 = np.array([[1.0], [0.0], [0.0]])
    np.testing.assert_allclose(unitary_complete(e1), np.eye(3), atol=1e-15)
    np.testing.assert_array_equal(unitary_complete(np.zeros((3, 0))), np.eye(3))
    q = np.array([[1.0], [1.0]]) / math.sqrt(2)
    u = unitary_complete(q)
    np.testing.assert_allclose(u[:, :1], q, atol=1e-15)
    # second column is (1, -1)/sqrt(2) up to a unit phase
    second = u[:, 1]
    phase = second[0] / abs(second[0])
    np.testing.assert_allclose(second / phase, [1 / math.sqrt(2), -1 / math.sqrt(2)], atol=1e-15)


def test_unitary_complete_rejects_non_orthonormal():
    with pytest.raises(NonOrthonormalInput):
        unitary_complete(np.array([[1.0], [1.0]]))
    with pytest.raises(ShapeMismatch):
        unitary_complete(np.eye(3, 4))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 8), st.integers(0, 2**31 - 1))
def test_unitary_complete_is_unitary(n, r, seed):
    r = min(r, n)
    q = gen.random_unitary(n, seed)[:, :r]
    u = unitary_complete(q)
    assert np.linalg.norm(u.conj().T @ u - np.eye(n)) <= 10 * n * EPS * 10
    np.testing.assert_array_equal(u[:, :r], q)


# -- approx_eq ---------------------------------------------------------------


def test_approx_eq_examples():
    assert approx_eq(A_EX, A_EX)
    assert approx_eq(np.zeros((2, 2)), np.zeros((2, 2)))
    atol = 1e-6
    tol = ToleranceContext(atol=atol, rtol=0.0)
    e11 = np.zeros((3, 3))
    e11[0, 0] = 1
    assert not approx_eq(A_EX, A_EX + 10 * atol * e11, tol)
    assert approx_eq(A_EX, A_EX + 0.5 * atol * e11, tol)
    assert not approx_eq(A_EX, B_EX)
    with pytest.raises(ShapeMismatch):
        approx_eq(A_EX, np.eye(2))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**31 - 1), st.floats(0, 1e-6))
def test_approx_eq_symmetric_and_reflexive(n, seed, eps):
    a = _random(n, seed)
    b = a + eps * _random(n, seed + 1)
    assert approx_eq(a, a)
    assert approx_eq(a, b) == approx_eq(b, a)


# -- scaled powers -------------------------------------------------------------


def test_scaled_power_examples():
    m, s = scaled_power(np.eye(3), 5)
    np.testing.assert_array_equal(m, np.eye(3))
    assert s == 1.0
    m, s = scaled_power(SHIFT2, 2)
    assert s == 0.0 and not m.any()
    m, s = scaled_power(2 * np.eye(2), 3)
    np.testing.assert_allclose(m * s, 8 * np.eye(2), rtol=0, atol=0)


def test_scaled_power_norm_window_and_extremes():
    m, s = scaled_power(1e200 * np.eye(2), 4)
    assert 0.5 <= np.linalg.norm(m) <= 2
    assert s == math.inf  # 1e800 is not representable; m is still usable
    m, s = scaled_power(1e-200 * np.eye(2), 4)
    assert 0.5 <= np.linalg.norm(m) <= 2 and m.any()


def test_scaled_power_rejects_nonpositive():
    with pytest.raises(ValueError):
        scaled_power(np.eye(2), 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**31 - 1), st.data())
def test_scaled_power_rank_matches_normalised_product(n, seed, data):
    k = data.draw(st.integers(0, min(n, 4)))
    r = n if k == 0 else data.draw(st.integers(0, n - k))
    a, _ = gen.matrix_with_structure(gen.GenSpec(n, r, k, seed=seed, conditioning=2.0))
    p = data.draw(st.integers(1, 2 * n))
    m, s = scaled_power(a, p)
    ref = np.eye(n, dtype=complex)
    log_scale = 0.0
    for _ in range(p):
        ref = ref @ a
        nr = np.linalg.norm(ref)
        if nr:
            ref /= nr
            log_scale += math.log(nr)
    if m.any():
        assert 0.5 <= np.linalg.norm(m) <= 2
    # judge both against ||A||_2^p, translated into each matrix's own scale
    big = p * math.log(np.linalg.norm(a, 2)) if a.any() else 0.0
    got = rank(m, scale=math.exp(big - math.log(s))) if m.any() else 0
    want = rank(ref, scale=math.exp(big - log_scale)) if ref.any() else 0
    assert got == want
    if p >= k:
        assert got == r


# -- power chain -------------------------------------------------------------


def test_power_chain_ranks():
    bases, ranks, settled = power_chain(B_EX)
    assert ranks == [3, 2, 1, 1] and settled
    np.testing.assert_allclose(bases[2], [[1], [0], [0]], atol=1e-15)
