import numpy as np
import pytest

from locdisc import sampling
from locdisc.protocol import Leaf, LoccProtocol, Round, from_text, to_text
from locdisc.walgate import local_protocol_optimal


def test_text_round_trip(rng):
    e = sampling.random_pure_ensemble(rng, (2, 3, 2))
    protocol, _ = local_protocol_optimal(e)
    back = from_text(to_text(protocol))
    assert back.dims == protocol.dims
    for (E1, l1), (E2, l2) in zip(protocol.povm(), back.povm()):
        assert l1 == l2
        np.testing.assert_array_equal(E1, E2)


def test_leaf_only_protocol():
    p = LoccProtocol((2, 2), Leaf(1))
    assert from_text(to_text(p)).root == Leaf(1)
    assert p.depth() == 0


def test_validate_catches_bad_basis():
    p = LoccProtocol((2, 2), Round(0, np.array([[1, 1], [0, 1]], dtype=complex), (Leaf(1), Leaf(2))))
    with pytest.raises(ValueError):
        p.validate()
    q = LoccProtocol((2, 2), Round(1, np.eye(2), (Round(0, np.eye(2), (Leaf(1), Leaf(2))), Leaf(2))))
    with pytest.raises(ValueError):
        q.validate()


def test_povm_completeness(rng):
    e = sampling.random_pure_ensemble(rng, (3, 3))
    protocol, _ = local_protocol_optimal(e)
    total = sum(E for E, _ in protocol.povm())
    np.testing.assert_allclose(total, np.eye(9), atol=1e-12)
