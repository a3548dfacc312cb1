"""Local discrimination of two orthogonal states and its use for optimal
minimum-error discrimination.

For orthogonal ``|+>``, ``|->`` with state matrices ``M+``, ``M-`` the matrix
``H = M+ M-^H`` is traceless. Choosing the first party's basis so that ``H``
has zero diagonal makes every pair of conditional states on the remaining
parties orthogonal, so the remaining parties can finish the job recursively.
"""
from dataclasses import dataclass

import numpy as np

from . import _tol
from .helstrom import FIRST, SECOND, error_of_measurement, helstrom
from .linalg import PreconditionError, complete_basis, hermitian_eig, zero_diagonal_unitary
from .protocol import Leaf, LoccProtocol, Round
from .states import Ensemble, PureState, overlap, to_state_matrix

VANISHING = 1e-11


@dataclass(frozen=True)
class WalgateDecomposition:
    alice_basis: np.ndarray  # columns |i>
    alpha: np.ndarray
    beta: np.ndarray
    eta: np.ndarray  # rows: conditional states given |i>
    mu: np.ndarray
    rows: tuple
    cols: tuple
    dims: tuple

    def orthogonality(self) -> np.ndarray:
        """|<mu_i|eta_i>| for every branch."""
        return np.abs(np.einsum("ij,ij->i", self.mu.conj(), self.eta))

    def reconstruct(self):
        """Amplitude vectors of ``|+>`` and ``|->`` rebuilt from the decomposition."""
        a = self.alice_basis
        m_plus = a @ (self.alpha[:, None] * self.eta)
        m_minus = a @ (self.beta[:, None] * self.mu)
        shape = [self.dims[p] for p in self.rows + self.cols]
        inv = np.argsort(self.rows + self.cols)
        return tuple(m.reshape(shape).transpose(inv).reshape(-1) for m in (m_plus, m_minus))


def _unit_orthogonal_to(v):
    return complete_basis(v / np.linalg.norm(v))[:, 1]


def walgate_decompose(plus: PureState, minus: PureState, subset=(0,)) -> WalgateDecomposition:
    ov = overlap(plus, minus)
    if abs(ov) > 1e-10:
        raise PreconditionError(f"states are not orthogonal (|<+|->| = {abs(ov):.3e})")
    m_plus = to_state_matrix(plus, subset)
    m_minus = to_state_matrix(minus, subset)
    u = zero_diagonal_unitary(m_plus @ m_minus.conj().T)
    r_plus, r_minus = u @ m_plus, u @ m_minus
    alpha = np.linalg.norm(r_plus, axis=1)
    beta = np.linalg.norm(r_minus, axis=1)
    d_b = m_plus.shape[1]
    eta = np.zeros_like(r_plus)
    mu = np.zeros_like(r_minus)
    for i in range(len(alpha)):
        a_ok, b_ok = alpha[i] > VANISHING, beta[i] > VANISHING
        if a_ok and b_ok:
            e, m = r_plus[i] / alpha[i], r_minus[i] / beta[i]
            # exact orthogonality; adjust the lighter branch
            if alpha[i] <= beta[i]:
                e = e - np.vdot(m, e) * m
                e /= np.linalg.norm(e)
            else:
                m = m - np.vdot(e, m) * e
                m /= np.linalg.norm(m)
        elif a_ok:
            e = r_plus[i] / alpha[i]
            m = _unit_orthogonal_to(e)
        elif b_ok:
            m = r_minus[i] / beta[i]
            e = _unit_orthogonal_to(m)
        else:
            e, m = np.eye(d_b, dtype=complex)[:2]
        eta[i], mu[i] = e, m
    rows = tuple(sorted(subset))
    cols = tuple(p for p in range(len(plus.dims)) if p not in rows)
    return WalgateDecomposition(u.conj().T, alpha, beta, eta, mu, rows, cols, plus.dims)


def _build(plus_vec, minus_vec, dims, offset, labels, pruned):
    l_plus, l_minus = labels
    if len(dims) == 1:
        basis = complete_basis(np.column_stack([plus_vec, minus_vec]))
        kids = (Leaf(l_plus), Leaf(l_minus)) + (Leaf(l_plus),) * (dims[0] - 2)
        return Round(offset, basis, kids)
    dec = walgate_decompose(PureState(dims, plus_vec), PureState(dims, minus_vec))
    kids = []
    for i in range(dims[0]):
        reach_plus = dec.alpha[i] ** 2 >= _tol.UNREACHABLE
        reach_minus = dec.beta[i] ** 2 >= _tol.UNREACHABLE
        if reach_plus and reach_minus:
            kids.append(_build(dec.eta[i], dec.mu[i], dims[1:], offset + 1, labels, pruned))
        elif reach_plus:
            kids.append(Leaf(l_plus))
        elif reach_minus:
            kids.append(Leaf(l_minus))
        else:
            kids.append(Leaf(pruned))
    return Round(offset, dec.alice_basis, tuple(kids))


def local_protocol_orthogonal(plus: PureState, minus: PureState, labels=(FIRST, SECOND),
                              pruned_label=None) -> LoccProtocol:
    """Perfect LOCC discrimination of two orthogonal multipartite states.

    Parties measure once each in declared order. Leaves reached through the
    ``|+>`` family carry ``labels[0]``, the ``|->`` family ``labels[1]``.
    Branches unreachable under both states get ``pruned_label``
    (default ``labels[0]``).
    """
    if plus.dims != minus.dims:
        raise PreconditionError("states live on different structures")
    if len(plus.dims) < 2:
        raise PreconditionError("need at least two parties")
    if abs(overlap(plus, minus)) > 1e-10:
        raise PreconditionError("states are not orthogonal")
    pruned = labels[0] if pruned_label is None else pruned_label
    root = _build(plus.amplitudes, minus.amplitudes, plus.dims, 0, labels, pruned)
    return LoccProtocol(plus.dims, root)


def protocol_error(protocol: LoccProtocol, e: Ensemble) -> float:
    return error_of_measurement(e, protocol.povm())


def local_protocol_optimal(e: Ensemble):
    """LOCC protocol reaching the Helstrom error for two pure states.

    Returns ``(protocol, achieved_error)``.
    """
    if not e.is_pure:
        raise PreconditionError("ensemble must contain two pure states")
    res = helstrom(e)
    plus = PureState(e.dims, res.plus)
    minus = PureState(e.dims, res.minus)
    protocol = local_protocol_orthogonal(plus, minus)
    return protocol, protocol_error(protocol, e)


def span_basis(e: Ensemble, tol=1e-10) -> np.ndarray:
    """Orthonormal basis (columns) of the joint support of both states."""
    eig = hermitian_eig(e.state1.density() + e.state2.density())
    return eig.eigenvectors[:, eig.eigenvalues > tol]


def local_protocol_2dspan(e: Ensemble):
    """Optimal LOCC minimum-error protocol for two states with a 2-D joint support."""
    basis = span_basis(e)
    if basis.shape[1] != 2:
        raise PreconditionError(f"joint support has dimension {basis.shape[1]}, not 2")
    delta = e.p1 * e.state1.density() - e.p2 * e.state2.density()
    small = hermitian_eig(basis.conj().T @ delta @ basis)
    vecs = basis @ small.eigenvectors
    labels = tuple(SECOND if lam < -_tol.EIG_ZERO else FIRST for lam in small.eigenvalues)
    protocol = local_protocol_orthogonal(PureState(e.dims, vecs[:, 0]), PureState(e.dims, vecs[:, 1]), labels)
    return protocol, protocol_error(protocol, e)


def decompositions(protocol_states, dims):
    """All Walgate decompositions used along a recursive construction.

    ``protocol_states`` is the orthogonal ``(plus, minus)`` pair.
    """
    out = []

    def walk(p, m, dims):
        if len(dims) == 1:
            return
        dec = walgate_decompose(PureState(dims, p), PureState(dims, m))
        out.append(dec)
        for i in range(dims[0]):
            if dec.alpha[i] ** 2 >= _tol.UNREACHABLE and dec.beta[i] ** 2 >= _tol.UNREACHABLE:
                walk(dec.eta[i], dec.mu[i], dims[1:])

    plus, minus = protocol_states
    walk(plus.amplitudes, minus.amplitudes, tuple(dims))
    return out

