import numpy as np
import pytest

from locdisc import sampling
from locdisc.helstrom import helstrom
from locdisc.linalg import PreconditionError
from locdisc.states import Ensemble, PureState
from locdisc.walgate import (
    decompositions, local_protocol_2dspan, local_protocol_optimal, local_protocol_orthogonal,
    protocol_error, walgate_decompose,
)

STRUCTURES = [(2, 2), (2, 3), (3, 2), (3, 3), (2, 2, 2), (2, 3, 2)]


@pytest.mark.parametrize("dims", STRUCTURES)
def test_decomposition_conditions(rng, dims):
    plus, minus = sampling.random_orthogonal_pair(rng, dims)
    dec = walgate_decompose(plus, minus)
    assert np.max(dec.orthogonality()) < 1e-12
    rp, rm = dec.reconstruct()
    np.testing.assert_allclose(rp, plus.amplitudes, atol=1e-12)
    np.testing.assert_allclose(rm, minus.amplitudes, atol=1e-12)


def test_decomposition_other_subset(rng):
    plus, minus = sampling.random_orthogonal_pair(rng, (2, 3, 2))
    dec = walgate_decompose(plus, minus, subset=(1,))
    assert np.max(dec.orthogonality()) < 1e-12
    np.testing.assert_allclose(dec.reconstruct()[0], plus.amplitudes, atol=1e-12)


def test_rejects_nonorthogonal(rng):
    a, b = sampling.haar_state(rng, (2, 2)), sampling.haar_state(rng, (2, 2))
    with pytest.raises(PreconditionError):
        walgate_decompose(a, b)


@pytest.mark.parametrize("dims", STRUCTURES)
def test_orthogonal_pairs_perfect(rng, dims):
    for _ in range(10):
        plus, minus = sampling.random_orthogonal_pair(rng, dims)
        protocol = local_protocol_orthogonal(plus, minus)
        protocol.validate()
        assert protocol.depth() <= len(dims)
        assert protocol_error(protocol, Ensemble(plus, minus, 0.5, 0.5)) < 1e-12
        for dec in decompositions((plus, minus), dims):
            reach = (dec.alpha > 1e-6) & (dec.beta > 1e-6)
            assert np.all(dec.orthogonality()[reach] < 1e-10)


def test_product_basis_pair_prunes():
    # |00> vs |11>: Alice's outcome already decides
    a = PureState((2, 2), np.array([1, 0, 0, 0]))
    b = PureState((2, 2), np.array([0, 0, 0, 1]))
    protocol = local_protocol_orthogonal(a, b)
    assert protocol_error(protocol, Ensemble(a, b, 0.5, 0.5)) < 1e-15


@pytest.mark.parametrize("dims", STRUCTURES)
def test_local_equals_helstrom(rng, dims):
    for _ in range(15):
        e = sampling.random_pure_ensemble(rng, dims)
        protocol, err = local_protocol_optimal(e)
        assert abs(err - helstrom(e).error_probability) < 1e-10
        probs = protocol.label_probabilities(e.state1)
        assert abs(sum(probs.values()) - 1) < 1e-12
        # sequential collapse agrees with the flattened POVM
        err_seq = e.p1 * (1 - probs.get(1, 0.0)) + e.p2 * (1 - protocol.label_probabilities(e.state2).get(2, 0.0))
        assert abs(err_seq - err) < 1e-12


def test_identical_states_local():
    s = PureState((2, 2), np.array([0.6, 0, 0, 0.8]))
    _, err = local_protocol_optimal(Ensemble(s, s, 0.4, 0.6))
    assert abs(err - 0.4) < 1e-12


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (2, 2, 2)])
def test_2d_span_mixed(rng, dims):
    for _ in range(10):
        e = sampling.random_2d_span_ensemble(rng, dims)
        _, err = local_protocol_2dspan(e)
        assert abs(err - helstrom(e).error_probability) < 1e-10


def test_2d_span_rejects_large_support(rng):
    from locdisc.states import DensityOperator
    rho = DensityOperator((2, 2), np.eye(4) / 4)
    with pytest.raises(PreconditionError):
        local_protocol_2dspan(Ensemble(rho, rho, 0.5, 0.5))
