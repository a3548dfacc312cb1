import numpy as np
import pytest

from locdisc import sampling
from locdisc.conclusive import (
    IDP, ORTHOGONAL, RegimeError, conclusive_global, conclusive_local_orthogonal_regime,
    conclusive_local_product, conclusive_local_search, conclusive_povm, local_success_at, outcome_stats,
    simulate_alice_then_bob,
)
from locdisc.helstrom import check_povm
from locdisc.linalg import PreconditionError
from locdisc.states import Ensemble, PureState, to_state_matrix


def brute_force_unambiguous(e, grid=801):
    """Best unambiguous two-element POVM on the span, by scanning the PSD boundary."""
    a, b = e.state1.amplitudes, e.state2.amplitudes
    u = a
    w = b - np.vdot(u, b) * u
    w /= np.linalg.norm(w)
    basis = np.column_stack([u, w])
    a2, b2 = basis.conj().T @ a, basis.conj().T @ b
    a_perp = np.array([-np.conj(a2[1]), np.conj(a2[0])])  # orthogonal to a2
    b_perp = np.array([-np.conj(b2[1]), np.conj(b2[0])])
    g1 = abs(np.vdot(b_perp, a2)) ** 2
    g2 = abs(np.vdot(a_perp, b2)) ** 2
    P1, P2 = np.outer(b_perp, b_perp.conj()), np.outer(a_perp, a_perp.conj())

    def feasible(w1, w2):
        return np.linalg.eigvalsh(np.eye(2) - w1 * P1 - w2 * P2)[0] >= -1e-13

    best = 0.0
    for w1 in np.linspace(0, 1, grid):
        lo, hi = 0.0, 1.0
        if not feasible(w1, 0.0):
            continue
        for _ in range(50):
            mid = (lo + hi) / 2
            lo, hi = (mid, hi) if feasible(w1, mid) else (lo, mid)
        best = max(best, e.p1 * w1 * g1 + e.p2 * lo * g2)
    return best


def pair_with_overlap(rng, s, p1, dims=(2, 2)):
    n = int(np.prod(dims))
    a = sampling.haar_vector(rng, n)
    perp = sampling.haar_vector(rng, n)
    perp -= np.vdot(a, perp) * a
    perp /= np.linalg.norm(perp)
    b = s * a + np.sqrt(1 - s * s) * perp
    return Ensemble(PureState(dims, a), PureState(dims, b), p1, 1 - p1)


@pytest.mark.parametrize("p1,s", [(0.5, 0.3), (0.3, 0.2), (0.3, 0.8), (0.9, 0.5), (0.1, 0.9)])
def test_global_matches_brute_force(rng, p1, s):
    e = pair_with_overlap(rng, s, p1)
    g = conclusive_global(e)
    assert abs(g.success_probability - brute_force_unambiguous(e)) < 2e-3
    povm = conclusive_povm(e)
    check_povm(povm, 4)
    stats = outcome_stats(e, povm)
    assert abs(stats.success - g.success_probability) < 1e-12
    assert stats.mislabel < 1e-14


def test_regime_values():
    # p1 = 0.1, p2 = 0.9: threshold 1/3
    rng = np.random.default_rng(0)
    e = pair_with_overlap(rng, 0.5, 0.1)
    g = conclusive_global(e)
    assert g.regime == ORTHOGONAL and g.larger == 2
    assert abs(g.success_probability - 0.9 * 0.75) < 1e-12
    e = pair_with_overlap(rng, 0.2, 0.1)
    g = conclusive_global(e)
    assert g.regime == IDP
    assert abs(g.success_probability - (1 - 2 * 0.3 * 0.2)) < 1e-12
    assert not g.locally_supported


def test_projective_regime_simulated_value(rng):
    # p = (0.1, 0.9), s = 0.6: only the common state is ever announced
    e = pair_with_overlap(rng, 0.6, 0.1)
    _, stats = conclusive_local_orthogonal_regime(e)
    assert abs(stats.success - 0.9 * 0.64) < 1e-9
    assert abs(brute_force_unambiguous(e) - 0.576) < 2e-3


def test_equal_priors_always_idp(rng):
    for s in (0.0, 0.4, 0.99):
        g = conclusive_global(pair_with_overlap(rng, s, 0.5))
        assert g.regime == IDP and abs(g.success_probability - (1 - s)) < 1e-12


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (2, 2, 2)])
def test_orthogonal_regime_local(rng, dims):
    for p1 in (0.1, 0.85):
        e = pair_with_overlap(rng, 0.8, p1, dims)
        protocol, stats = conclusive_local_orthogonal_regime(e)
        protocol.validate()
        assert abs(stats.success - conclusive_global(e).success_probability) < 1e-10
        assert stats.mislabel < 1e-14


def test_orthogonal_regime_rejects_idp(rng):
    with pytest.raises(RegimeError):
        conclusive_local_orthogonal_regime(pair_with_overlap(rng, 0.1, 0.5))


def test_product_protocol(rng):
    for dims in ((2, 2), (3, 2), (2, 2, 2)):
        a, b = sampling.random_product_state(rng, dims), sampling.random_product_state(rng, dims)
        e = Ensemble(a, b, 0.5, 0.5)
        stats = conclusive_local_product(e)
        s = abs(np.vdot(a.amplitudes, b.amplitudes))
        assert abs(stats.success - (1 - s)) < 1e-10
        assert stats.min_posterior > 1 - 1e-10


def test_product_protocol_needs_products(rng):
    e = sampling.random_pure_ensemble(rng, (2, 2))
    with pytest.raises(PreconditionError):
        conclusive_local_product(Ensemble(e.state1, e.state2, 0.5, 0.5))


def test_schmidt_correlated_search():
    al, be, ga, de = 0.8, 0.6, 0.28, 0.96
    e = Ensemble(PureState((2, 2), np.array([al, 0, 0, be])), PureState((2, 2), np.array([ga, 0, 0, de])), 0.5, 0.5)
    strat = conclusive_local_search(e)
    assert strat.found
    assert abs(strat.local_success - (1 - abs(al * ga + be * de))) < 1e-10
    plus = np.array([1, 1]) / np.sqrt(2)
    m1, m2 = to_state_matrix(e.state1), to_state_matrix(e.state2)
    minus = np.array([1, -1]) / np.sqrt(2)
    assert abs(local_success_at(m1, m2, plus, minus) - strat.local_success) < 1e-10


def test_search_results_verified_by_simulation(rng):
    found = 0
    for _ in range(40):
        e = sampling.random_pure_ensemble(rng, (2, 2))
        e = Ensemble(e.state1, e.state2, 0.5, 0.5)
        strat = conclusive_local_search(e, samples=1024)
        sim = simulate_alice_then_bob(e, strat.chi, strat.chi_perp)
        assert sim.mislabel < 1e-12
        assert strat.local_success <= strat.global_success + 1e-12
        if strat.found:
            found += 1
            assert abs(sim.success - strat.global_success) < 1e-8
    assert found > 0


def test_search_preconditions(rng):
    e = sampling.random_pure_ensemble(rng, (2, 3))
    with pytest.raises(PreconditionError):
        conclusive_local_search(Ensemble(e.state1, e.state2, 0.5, 0.5))
    e = sampling.random_pure_ensemble(rng, (2, 2))
    with pytest.raises(PreconditionError):
        conclusive_local_search(Ensemble(e.state1, e.state2, 0.4, 0.6))
