"""Conclusive (unambiguous) discrimination of two pure states.

Answers are never wrong; label 0 is the "don't know" outcome. The global
optimum has two regimes. With ``s = |<psi1|psi2>|`` and ``p_small <= p_large``,
if ``s >= sqrt(p_small / p_large)`` the optimal measurement is projective:
project onto the smaller-prior state and its orthogonal complement,
identifying only the larger-prior state, with success ``p_large (1 - s^2)``.
Otherwise the three-outcome IDP measurement gives ``1 - 2 sqrt(p1 p2) s``.
"""
from dataclasses import dataclass
import itertools

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .helstrom import FIRST, SECOND
from .linalg import PreconditionError, complete_basis
from .protocol import LoccProtocol
from .states import Ensemble, PureState, overlap, product_factors, to_state_matrix
from .walgate import local_protocol_orthogonal

INCONCLUSIVE = 0
ORTHOGONAL, IDP = "orthogonal", "idp"

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class RegimeError(ValueError):
    pass


@dataclass(frozen=True)
class ConclusiveGlobal:
    regime: str
    success_probability: float
    overlap: float
    threshold: float
    larger: int  # label of the larger-prior state (1 on ties)
    locally_supported: bool


@dataclass(frozen=True)
class ConclusiveStats:
    success: float
    mislabel: float  # probability of a wrong conclusive answer
    min_posterior: float  # over conclusive outcomes that can occur


@dataclass(frozen=True)
class ConclusiveLocalStrategy:
    chi: np.ndarray
    chi_perp: np.ndarray
    bob_states: tuple  # ((b1, b2) after chi, (b1, b2) after chi_perp), normalized
    local_success: float
    global_success: float
    constraint_residual: float
    found: bool


def _equal_priors(e: Ensemble) -> bool:
    return abs(e.p1 - e.p2) <= 1e-12


def conclusive_global(e: Ensemble) -> ConclusiveGlobal:
    if not e.is_pure:
        raise PreconditionError("conclusive discrimination needs two pure states")
    s = min(abs(overlap(e.state1, e.state2)), 1.0)
    larger = FIRST if e.p1 >= e.p2 else SECOND
    p_large, p_small = max(e.p1, e.p2), min(e.p1, e.p2)
    threshold = float(np.sqrt(p_small / p_large))
    if s >= threshold:
        return ConclusiveGlobal(ORTHOGONAL, p_large * (1 - s * s), s, threshold, larger, True)
    value = 1 - 2 * np.sqrt(e.p1 * e.p2) * s
    return ConclusiveGlobal(IDP, float(value), s, threshold, larger, _equal_priors(e))


def _perp(v, ref):
    """Normalized component of ``v`` orthogonal to ``ref``, or None."""
    w = v - np.vdot(ref, v) * ref
    n = np.linalg.norm(w)
    return None if n <= 1e-12 else w / n


def conclusive_povm(e: Ensemble):
    """Globally optimal unambiguous POVM ``[(E, label), ...]`` with labels 0/1/2."""
    g = conclusive_global(e)
    psi1, psi2 = e.state1.amplitudes, e.state2.amplitudes
    dim = psi1.size
    elems = []
    if g.regime == ORTHOGONAL:
        big, small = (psi1, psi2) if g.larger == FIRST else (psi2, psi1)
        v = _perp(big, small)
        if v is not None:
            elems.append((np.outer(v, v.conj()), g.larger))
    else:
        s = g.overlap
        q1 = np.sqrt(e.p2 / e.p1) * s
        q2 = np.sqrt(e.p1 / e.p2) * s
        for vec, ref, q, label in ((psi1, psi2, q1, FIRST), (psi2, psi1, q2, SECOND)):
            v = _perp(vec, ref)
            if v is not None and q < 1:
                elems.append(((1 - q) / (1 - s * s) * np.outer(v, v.conj()), label))
    rest = np.eye(dim) - sum((E for E, _ in elems), np.zeros((dim, dim), dtype=complex))
    return elems + [(rest, INCONCLUSIVE)]


def outcome_stats(e: Ensemble, povm, min_weight=1e-12) -> ConclusiveStats:
    rho = {FIRST: e.state1.density(), SECOND: e.state2.density()}
    prior = {FIRST: e.p1, SECOND: e.p2}
    success = mislabel = 0.0
    min_post = 1.0
    for elem, label in povm:
        if label == INCONCLUSIVE:
            continue
        joint = {h: prior[h] * float(np.real(np.trace(rho[h] @ elem))) for h in (FIRST, SECOND)}
        other = SECOND if label == FIRST else FIRST
        success += joint[label]
        mislabel += joint[other]
        total = joint[FIRST] + joint[SECOND]
        if total > min_weight:
            min_post = min(min_post, joint[label] / total)
    return ConclusiveStats(success, mislabel, min_post)


def conclusive_local_orthogonal_regime(e: Ensemble):
    """LOCC protocol for the projective regime; returns ``(protocol, stats)``."""
    g = conclusive_global(e)
    if g.regime != ORTHOGONAL:
        raise RegimeError("ensemble is in the three-outcome (IDP) regime")
    psi1, psi2 = e.state1.amplitudes, e.state2.amplitudes
    big, small = (psi1, psi2) if g.larger == FIRST else (psi2, psi1)
    v = _perp(big, small)
    if v is None:
        v = complete_basis(small)[:, 1]
    protocol = local_protocol_orthogonal(PureState(e.dims, v), PureState(e.dims, small),
                                         labels=(g.larger, INCONCLUSIVE), pruned_label=INCONCLUSIVE)
    return protocol, outcome_stats(e, protocol.povm())


def _single_party(vec):
    return PureState((vec.size,), vec)


def conclusive_local_product(e: Ensemble) -> ConclusiveStats:
    """Each party runs equal-prior IDP on its own factor; first conclusive answer wins."""
    if not _equal_priors(e):
        raise PreconditionError("product protocol needs equal priors")
    f1 = product_factors(e.state1)
    f2 = product_factors(e.state2)
    if f1 is None or f2 is None:
        raise PreconditionError("both states must be product states")
    local = [conclusive_povm(Ensemble(_single_party(a), _single_party(b), 0.5, 0.5))
             for a, b in zip(f1, f2)]
    povm = []
    for combo in itertools.product(*local):
        elem = np.ones((1, 1), dtype=complex)
        label = INCONCLUSIVE
        for E, lab in combo:
            elem = np.kron(elem, E)
            if label == INCONCLUSIVE:
                label = lab
        povm.append((elem, label))
    return outcome_stats(e, povm)


def _chi_from_bloch(n):
    n = np.asarray(n, dtype=float)
    n = n / np.linalg.norm(n)
    theta = np.arccos(np.clip(n[2], -1, 1))
    phi = np.arctan2(n[1], n[0])
    chi = np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
    chi_perp = np.array([-np.exp(-1j * phi) * np.sin(theta / 2), np.cos(theta / 2)])
    return chi, chi_perp


def local_success_at(psi1_m, psi2_m, chi, chi_perp) -> float:
    """Success of "Alice projects, Bob runs IDP" from the two matrix elements."""
    k = psi2_m @ psi1_m.conj().T
    return float(1 - abs(np.vdot(chi, k @ chi)) - abs(np.vdot(chi_perp, k @ chi_perp)))


def _bob_states(psi1_m, psi2_m, chi):
    out = []
    for m in (psi1_m, psi2_m):
        b = m.T @ chi.conj()
        out.append(b / np.linalg.norm(b) if np.linalg.norm(b) > 1e-15 else b)
    return tuple(out)


def conclusive_local_search(e: Ensemble, samples=4096) -> ConclusiveLocalStrategy:
    """Best Alice basis that leaves Bob's two residual states equally likely.

    ``found`` is True when the local success matches the global optimum to
    1e-8. A False result records a search outcome, not an impossibility.
    """
    if e.dims != (2, 2):
        raise PreconditionError(f"search is defined for two qubits, got dims {e.dims}")
    if not (e.is_pure and _equal_priors(e)):
        raise PreconditionError("search needs two pure states with equal priors")
    m1, m2 = to_state_matrix(e.state1), to_state_matrix(e.state2)
    d = m1 @ m1.conj().T - m2 @ m2.conj().T
    dvec = np.array([np.real(np.trace(d @ p)) / 2 for p in PAULI])
    k = m2 @ m1.conj().T
    kvec = np.array([np.trace(k @ p) / 2 for p in PAULI])
    k0 = np.trace(k) / 2
    global_success = float(1 - abs(np.trace(k)))

    # <chi|K|chi> = k0 + kvec . n  and  <chi_perp|K|chi_perp> = k0 - kvec . n
    def value(n):
        kn = n @ kvec
        return 1 - np.abs(k0 + kn) - np.abs(k0 - kn)

    if np.linalg.norm(dvec) <= 1e-12:
        side = int(np.sqrt(samples))
        th, ph = np.meshgrid(np.linspace(0, np.pi, side), np.linspace(0, 2 * np.pi, side, endpoint=False))

        def bloch(t, p):
            return np.stack([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)], axis=-1)

        vals = value(bloch(th, ph).reshape(-1, 3))
        i = int(np.argmax(vals))
        x0 = np.array([th.reshape(-1)[i], ph.reshape(-1)[i]])
        res = minimize(lambda x: -value(bloch(x[0], x[1])[None])[0], x0, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-15})
        best_x = res.x if -res.fun >= vals[i] else x0
        n = bloch(best_x[0], best_x[1])
    else:
        dhat = dvec / np.linalg.norm(dvec)
        e1 = np.cross(dhat, [1.0, 0, 0])
        if np.linalg.norm(e1) < 0.5:
            e1 = np.cross(dhat, [0, 1.0, 0])
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(dhat, e1)
        ts = np.linspace(0, np.pi, samples, endpoint=False)
        circle = np.cos(ts)[:, None] * e1 + np.sin(ts)[:, None] * e2
        vals = value(circle)
        i = int(np.argmax(vals))
        step = np.pi / samples
        res = minimize_scalar(lambda t: -value((np.cos(t) * e1 + np.sin(t) * e2)[None])[0],
                              bounds=(ts[i] - step, ts[i] + step), method="bounded",
                              options={"xatol": 1e-12})
        t = res.x if -res.fun >= vals[i] else ts[i]
        n = np.cos(t) * e1 + np.sin(t) * e2

    chi, chi_perp = _chi_from_bloch(n)
    residual = float(abs(np.vdot(chi, d @ chi)))
    local = local_success_at(m1, m2, chi, chi_perp)
    found = residual <= 1e-9 and abs(local - global_success) <= 1e-8
    return ConclusiveLocalStrategy(chi, chi_perp, (_bob_states(m1, m2, chi), _bob_states(m1, m2, chi_perp)),
                                   local, global_success, residual, found)


def simulate_alice_then_bob(e: Ensemble, chi, chi_perp=None) -> ConclusiveStats:
    """Full statevector run of the two-round strategy at a given Alice basis.

    Alice projects onto ``chi``/``chi_perp``; Bob applies the optimal
    unambiguous measurement for his residual pair with the posterior priors.
    """
    chi = np.asarray(chi, dtype=complex)
    if chi_perp is None:
        chi_perp = complete_basis(chi / np.linalg.norm(chi))[:, 1]
    t1 = e.state1.tensor()
    t2 = e.state2.tensor()
    povm = []
    for a in (chi, chi_perp):
        alice = np.outer(a, a.conj())
        b1 = np.tensordot(a.conj(), t1, axes=([0], [0]))
        b2 = np.tensordot(a.conj(), t2, axes=([0], [0]))
        q1, q2 = e.p1 * np.vdot(b1, b1).real, e.p2 * np.vdot(b2, b2).real
        dim_b = b1.size
        if q1 + q2 <= 1e-15:
            povm.append((np.kron(alice, np.eye(dim_b)), INCONCLUSIVE))
            continue
        if q1 <= 1e-15 or q2 <= 1e-15:
            label = FIRST if q2 <= 1e-15 else SECOND
            povm.append((np.kron(alice, np.eye(dim_b)), label))
            continue
        residual = Ensemble(_single_party(b1 / np.linalg.norm(b1)), _single_party(b2 / np.linalg.norm(b2)),
                            q1 / (q1 + q2), q2 / (q1 + q2))
        for E, label in conclusive_povm(residual):
            povm.append((np.kron(alice, E), label))
    return outcome_stats(e, povm)


def protocol_conclusive_stats(protocol: LoccProtocol, e: Ensemble) -> ConclusiveStats:
    return outcome_stats(e, protocol.povm())
