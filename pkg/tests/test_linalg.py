import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from locdisc import sampling
from locdisc.linalg import (
    PreconditionError, complete_basis, diagonalize_normal, hermitian_eig, is_normal, is_unitary,
    joint_jacobi, svd, zero_diagonal_unitary,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 9))
def test_hermitian_eig_matches_numpy(seed, n):
    rng = np.random.default_rng(seed)
    h = random_hermitian(rng, n)
    eig = hermitian_eig(h)
    v = eig.eigenvectors
    assert is_unitary(v)
    assert np.all(np.diff(eig.eigenvalues) <= 1e-12)
    np.testing.assert_allclose(v @ np.diag(eig.eigenvalues) @ v.conj().T, h, atol=1e-11)
    np.testing.assert_allclose(np.sort(eig.eigenvalues), np.linalg.eigvalsh(h), atol=1e-11)


def test_hermitian_eig_degenerate(rng):
    u = sampling.haar_unitary(rng, 6)
    h = u @ np.diag([2, 2, 2, -1, -1, 0.5]) @ u.conj().T
    eig = hermitian_eig(h)
    np.testing.assert_allclose(eig.eigenvalues, [2, 2, 2, 0.5, -1, -1], atol=1e-12)


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(PreconditionError):
        hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))


def test_joint_jacobi_commuting_pair(rng):
    u = sampling.haar_unitary(rng, 5)
    a = u @ np.diag([1, 1, 2, 3, 3]) @ u.conj().T
    b = u @ np.diag([0, 4, 5, 5, 6]) @ u.conj().T
    v, diags = joint_jacobi([a, b])
    for m, d in zip((a, b), diags):
        np.testing.assert_allclose(v.conj().T @ m @ v, np.diag(d), atol=1e-11)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 8])
def test_zero_diagonal_unitary(rng, n):
    h = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h -= np.trace(h) / n * np.eye(n)
    u = zero_diagonal_unitary(h)
    assert is_unitary(u)
    assert np.max(np.abs(np.diag(u @ h @ u.conj().T))) < 1e-12


def test_zero_diagonal_handles_hermitian_and_zero():
    h = np.diag([1.0, -1.0]).astype(complex)
    u = zero_diagonal_unitary(h)
    assert np.max(np.abs(np.diag(u @ h @ u.conj().T))) < 1e-14
    assert is_unitary(zero_diagonal_unitary(np.zeros((3, 3))))


def test_zero_diagonal_requires_traceless():
    with pytest.raises(PreconditionError):
        zero_diagonal_unitary(np.eye(2))


@pytest.mark.parametrize("n", [2, 3, 5])
def test_diagonalize_normal(rng, n):
    u = sampling.haar_unitary(rng, n)
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    z[0] = z[-1]
    m = u @ np.diag(z) @ u.conj().T
    assert is_normal(m)
    w = diagonalize_normal(m)
    d = w @ m @ w.conj().T
    np.testing.assert_allclose(d - np.diag(np.diag(d)), 0, atol=1e-11)


def test_is_normal_rejects_jordan_block():
    assert not is_normal(np.array([[1, 1], [0, 1]], dtype=complex))


def test_complete_basis_and_svd(rng):
    v = sampling.haar_vector(rng, 4)
    b = complete_basis(v)
    assert is_unitary(b)
    np.testing.assert_allclose(b[:, 0], v)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    dec = svd(a)
    np.testing.assert_allclose(dec.u @ np.diag(dec.s) @ dec.v.conj().T, a, atol=1e-12)
