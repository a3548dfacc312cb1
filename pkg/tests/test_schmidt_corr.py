import numpy as np
import pytest

from locdisc import sampling
from locdisc.linalg import PreconditionError, is_unitary
from locdisc.schmidt_corr import (
    FG_COMMUTATOR, GF_COMMUTATOR, any_figure_of_merit_check, cat_coefficients, cat_vector,
    correlate_maximally_entangled, is_maximally_entangled, is_schmidt_correlatable, recreation_protocol,
    schmidt_correlate,
)
from locdisc.states import PureState

BELL = {
    "phi+": np.array([[1, 0], [0, 1]]) / np.sqrt(2),
    "phi-": np.array([[1, 0], [0, -1]]) / np.sqrt(2),
    "psi+": np.array([[0, 1], [1, 0]]) / np.sqrt(2),
    "psi-": np.array([[0, 1], [-1, 0]]) / np.sqrt(2),
}


def offdiag(m):
    return np.linalg.norm(m - np.diag(np.diag(m)))


def rotated_pair(rng, d1, d2):
    u, v = sampling.haar_unitary(rng, len(d1)), sampling.haar_unitary(rng, len(d1))
    return u @ np.diag(d1) @ v.T, u @ np.diag(d2) @ v.T


def test_already_diagonal_pair():
    f = np.diag([0.8, 0.6]).astype(complex)
    g = np.diag([0.28, 0.96]).astype(complex)
    cert = schmidt_correlate(f, g)
    assert cert.correlatable
    for m in (f, g):
        assert offdiag(cert.u @ m @ cert.v.T) < 1e-14
    np.testing.assert_allclose(np.abs(cert.u), np.eye(2), atol=1e-14)
    np.testing.assert_allclose(np.abs(cert.v), np.eye(2), atol=1e-14)


def test_bell_pair_hadamard_type():
    cert = schmidt_correlate(BELL["phi+"], BELL["psi+"])
    assert cert.correlatable
    np.testing.assert_allclose(np.abs(cert.u), np.full((2, 2), 1 / np.sqrt(2)), atol=1e-12)
    for m in (BELL["phi+"], BELL["psi+"]):
        assert offdiag(cert.u @ m @ cert.v.T) < 1e-12


@pytest.mark.parametrize("degenerate", [False, True])
def test_round_trip(rng, degenerate):
    for d in (2, 3, 4, 5):
        mags = np.abs(rng.normal(size=d)) + 0.1
        if degenerate:
            mags[: d // 2 + 1] = mags[0]
        mags /= np.linalg.norm(mags)
        d1 = mags * np.exp(2j * np.pi * rng.uniform(size=d))
        d2 = sampling.haar_vector(rng, d)
        f, g = rotated_pair(rng, d1, d2)
        cert = schmidt_correlate(f, g)
        assert cert.correlatable and is_unitary(cert.u) and is_unitary(cert.v)
        for m in (f, g):
            assert offdiag(cert.u @ m @ cert.v.T) < 1e-10
        np.testing.assert_allclose(cert.u @ f @ cert.v.T, np.diag(cert.x), atol=1e-10)


def test_zero_singular_values(rng):
    d1 = np.array([0.8, 0.6, 0, 0])
    d2 = sampling.haar_vector(rng, 4)
    f, g = rotated_pair(rng, d1, d2)
    cert = schmidt_correlate(f, g)
    assert cert.correlatable
    for m in (f, g):
        assert offdiag(cert.u @ m @ cert.v.T) < 1e-10


def test_rectangular_padding(rng):
    f = np.zeros((2, 3), dtype=complex)
    g = np.zeros((2, 3), dtype=complex)
    f[0, 0], f[1, 1] = 0.6, 0.8
    g[0, 0], g[1, 1] = 0.8, -0.6
    assert schmidt_correlate(f, g).correlatable


def test_random_pair_rejected_with_named_commutator(rng):
    f = sampling.haar_state(rng, (3, 3)).amplitudes.reshape(3, 3)
    g = sampling.haar_state(rng, (3, 3)).amplitudes.reshape(3, 3)
    cert = is_schmidt_correlatable(f, g)
    assert not cert.correlatable
    assert cert.violated in (FG_COMMUTATOR, GF_COMMUTATOR)
    assert cert.commutator_norm > 1e-7
    assert schmidt_correlate(f, g).u is None


@pytest.mark.parametrize("d", [2, 3, 4])
def test_maximally_entangled(rng, d):
    for _ in range(10):
        f = sampling.random_maximally_entangled_matrix(rng, d)
        g = sampling.random_maximally_entangled_matrix(rng, d)
        assert is_maximally_entangled(f)
        cert = correlate_maximally_entangled(f, g)
        assert cert.correlatable
        for m in (f, g):
            assert offdiag(cert.u @ m @ cert.v.T) < 1e-10
        np.testing.assert_allclose(np.abs(cert.x), 1 / np.sqrt(d), atol=1e-12)


def test_maximally_entangled_precondition(rng):
    f = sampling.haar_state(rng, (2, 2)).amplitudes.reshape(2, 2)
    with pytest.raises(PreconditionError):
        correlate_maximally_entangled(f, BELL["phi+"])


@pytest.mark.parametrize("n_parties", [2, 3])
def test_recreation_fidelity(rng, n_parties):
    x, y = sampling.haar_vector(rng, 3), sampling.haar_vector(rng, 3)
    records = recreation_protocol(x, y, n_parties)
    assert len(records) == 2 * 3 ** (n_parties - 1)
    for hyp in (1, 2):
        total = sum(r.probability for r in records if r.hypothesis == hyp)
        assert abs(total - 1) < 1e-12
    assert min(r.fidelity for r in records) > 1 - 1e-12


def test_cat_coefficients_round_trip(rng):
    c = sampling.haar_vector(rng, 3)
    state = PureState((3, 3, 3), cat_vector(c, 3))
    np.testing.assert_allclose(cat_coefficients(state), c)


@pytest.mark.parametrize("figure", ["min-error", "conclusive"])
def test_any_figure_of_merit(rng, figure):
    d1 = sampling.haar_vector(rng, 3)
    d2 = sampling.haar_vector(rng, 3)
    f, g = rotated_pair(rng, d1, d2)
    for p1 in (0.5, 0.2, 0.8):
        local, global_ = any_figure_of_merit_check(f, g, p1, 1 - p1, figure)
        assert abs(local - global_) < 1e-10


def test_any_figure_rejects_uncorrelatable(rng):
    f = sampling.haar_state(rng, (3, 3)).amplitudes.reshape(3, 3)
    g = sampling.haar_state(rng, (3, 3)).amplitudes.reshape(3, 3)
    with pytest.raises(PreconditionError):
        any_figure_of_merit_check(f, g, 0.5, 0.5)
