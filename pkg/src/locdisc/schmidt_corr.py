"""Schmidt-correlated form of two bipartite pure states, and local recreation.

Two state matrices ``F`` and ``G`` can be made diagonal by the same local
unitaries, ``U F V^T`` and ``U G V^T``, exactly when ``F G^H`` and ``G^H F``
are both normal. Once diagonal, the pair can be handed entirely to Bob
(Alice measures in the Fourier basis, Bob corrects phases, copies his index
into an ancilla), so any global discrimination figure of merit is reachable
locally.
"""
from dataclasses import dataclass
import itertools
from typing import Optional

import numpy as np

from . import _tol
from .conclusive import INCONCLUSIVE, conclusive_global, conclusive_povm
from .helstrom import FIRST, SECOND, helstrom
from .linalg import PreconditionError, diagonalize_normal, fro, is_normal, svd
from .states import Ensemble, PureState, degeneracy_blocks, from_state_matrix

FG_COMMUTATOR = "[F G^H, G F^H]"
GF_COMMUTATOR = "[G^H F, F^H G]"


class InconsistencyError(RuntimeError):
    """Verdict and construction disagree beyond tolerance."""


@dataclass(frozen=True)
class BlockStructure:
    levels: np.ndarray
    degeneracies: tuple
    ranges: tuple


@dataclass(frozen=True)
class CorrelationCertificate:
    correlatable: bool
    commutator_norms: tuple  # (||[F G^H, G F^H]||, ||[G^H F, F^H G]||)
    tolerance: float
    violated: Optional[str] = None
    u: Optional[np.ndarray] = None
    v: Optional[np.ndarray] = None
    x: Optional[np.ndarray] = None
    y: Optional[np.ndarray] = None
    blocks: Optional[BlockStructure] = None
    borderline: bool = False

    @property
    def commutator_norm(self) -> float:
        return max(self.commutator_norms)


def _pad(f, g):
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    if f.ndim != 2 or f.shape != g.shape:
        raise PreconditionError(f"state matrices must have equal 2-D shapes, got {f.shape} and {g.shape}")
    n = max(f.shape)
    out = []
    for m in (f, g):
        p = np.zeros((n, n), dtype=complex)
        p[:m.shape[0], :m.shape[1]] = m
        out.append(p)
    return out


def commutators(f, g):
    fg = f @ g.conj().T
    gf = g.conj().T @ f
    return fg @ fg.conj().T - fg.conj().T @ fg, gf @ gf.conj().T - gf.conj().T @ gf


def is_schmidt_correlatable(f, g) -> CorrelationCertificate:
    f, g = _pad(f, g)
    c1, c2 = (fro(c) for c in commutators(f, g))
    tol = _tol.rel(1e-8, fro(f) ** 2 * fro(g) ** 2)
    ok = c1 <= tol and c2 <= tol
    violated = None
    if not ok:
        violated = FG_COMMUTATOR if c1 >= c2 else GF_COMMUTATOR
    return CorrelationCertificate(ok, (c1, c2), tol, violated=violated)


def _offdiag(m) -> float:
    return fro(m - np.diag(np.diag(m)))


def _finish(cert, f, g, u, v, blocks=None, borderline=False):
    fd = u @ f @ v.T
    gd = u @ g @ v.T
    limit = _tol.rel(1e-9, max(fro(f), fro(g)))
    if _offdiag(fd) > limit or _offdiag(gd) > limit:
        raise InconsistencyError(
            f"correlatable verdict but residual off-diagonal mass {max(_offdiag(fd), _offdiag(gd)):.3e}")
    return CorrelationCertificate(True, cert.commutator_norms, cert.tolerance, u=u, v=v,
                                  x=np.diag(fd).copy(), y=np.diag(gd).copy(),
                                  blocks=blocks, borderline=borderline)


def schmidt_correlate(f, g) -> CorrelationCertificate:
    """Certificate with explicit ``U``, ``V``; failure certificates are returned as is."""
    cert = is_schmidt_correlatable(f, g)
    if not cert.correlatable:
        return cert
    f, g = _pad(f, g)
    n = f.shape[0]
    dec = svd(f)
    levels = dec.s
    u_f, v_f = dec.u, dec.v
    g_rot = u_f.conj().T @ g @ v_f
    ranges = degeneracy_blocks(levels, _tol.DEGENERACY)
    gaps = np.abs(np.diff(levels))
    borderline = bool(np.any((gaps >= _tol.DEGENERACY) & (gaps < _tol.BORDERLINE)))

    mask = np.zeros((n, n), dtype=bool)
    for r in ranges:
        mask[r.start:r.stop, r.start:r.stop] = True
    off_block = fro(g_rot[~mask])
    if off_block > _tol.rel(1e-7, fro(g)):
        raise InconsistencyError(f"G is not block diagonal in F's Schmidt bases (mass {off_block:.3e})")

    left = np.zeros((n, n), dtype=complex)
    right_t = np.zeros((n, n), dtype=complex)
    for r in ranges:
        sl = slice(r.start, r.stop)
        block = g_rot[sl, sl]
        if levels[r.start] < _tol.DEGENERACY:
            # F vanishes here: any SVD of the block keeps F zero
            bd = svd(block)
            left[sl, sl] = bd.u.conj().T
            right_t[sl, sl] = bd.v
            continue
        if not is_normal(block):
            raise InconsistencyError("a degenerate block of G is not normal")
        w = diagonalize_normal(block)
        left[sl, sl] = w
        right_t[sl, sl] = w.conj().T
    u = left @ u_f.conj().T
    v = (v_f @ right_t).T
    blocks = BlockStructure(np.array([levels[r.start] for r in ranges]),
                            tuple(len(r) for r in ranges), tuple((r.start, r.stop) for r in ranges))
    return _finish(cert, f, g, u, v, blocks, borderline)


def is_maximally_entangled(m, tol=1e-9) -> bool:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    d = m.shape[0]
    return fro(m @ m.conj().T - np.eye(d) / d) <= _tol.rel(tol)


def correlate_maximally_entangled(f, g) -> CorrelationCertificate:
    """Schmidt-correlated form of two maximally entangled states via ``sigma (x) sigma*``."""
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    if not (is_maximally_entangled(f) and is_maximally_entangled(g)):
        raise PreconditionError("both state matrices must be proportional to unitaries")
    d = f.shape[0]
    cert = is_schmidt_correlatable(f, g)
    # F V^T = I/sqrt(d) with V^T = sqrt(d) F^H, then G -> G V^T = (unitary)/sqrt(d)
    vt = np.sqrt(d) * f.conj().T
    sigma = diagonalize_normal(np.sqrt(d) * g @ vt)
    u = sigma
    v = (vt @ sigma.conj().T).T
    return _finish(cert, f, g, u, v)


@dataclass(frozen=True)
class RecreationRecord:
    hypothesis: int
    outcome: tuple  # Alice's (and other senders') Fourier outcomes
    probability: float
    correction: np.ndarray  # diagonal phases Bob applies
    fidelity: float
    final_state: np.ndarray  # Bob's systems (his own + ancillas)


def _coefficients(c):
    c = np.asarray(c, dtype=complex)
    if c.ndim == 2:
        if c.shape[0] != c.shape[1] or _offdiag(c) > 1e-9:
            raise PreconditionError("state matrix is not diagonal")
        c = np.diag(c)
    if abs(np.linalg.norm(c) - 1) > 1e-9:
        raise PreconditionError("coefficients are not normalized")
    return c


def cat_vector(c, n_parties=2) -> np.ndarray:
    d = len(c)
    vec = np.zeros(d ** n_parties, dtype=complex)
    step = sum(d ** k for k in range(n_parties))
    vec[np.arange(d) * step] = c
    return vec


def cat_coefficients(state: PureState) -> np.ndarray:
    d = state.dims[0]
    if any(x != d for x in state.dims):
        raise PreconditionError("cat form needs equal party dimensions")
    c = state.amplitudes[np.arange(d) * sum(d ** k for k in range(len(state.dims)))]
    if np.linalg.norm(c) < 1 - 1e-9:
        raise PreconditionError("state is not in cat form")
    return c


def _shift(d, n_systems):
    """Control-shift from system 0 onto every other system: |j,a..> -> |j,a+j..>."""
    dim = d ** n_systems
    perm = np.zeros(dim, dtype=int)
    for idx in itertools.product(range(d), repeat=n_systems):
        j = idx[0]
        out = (j,) + tuple((a + j) % d for a in idx[1:])
        perm[np.ravel_multi_index(out, (d,) * n_systems)] = np.ravel_multi_index(idx, (d,) * n_systems)
    return perm  # new[k] = old[perm[k]]


def recreation_protocol(x, y, n_parties=2):
    """Simulate local recreation of a cat-form pair in the last party's hands.

    ``x``/``y`` are the common-basis coefficients (vectors or diagonal state
    matrices). Every party but the last measures in the Fourier basis and
    announces; the last applies ``diag(w^{j K})`` with ``K`` the outcome sum,
    then control-shifts into ``n_parties - 1`` fresh ancillas.
    Returns the list of :class:`RecreationRecord` for both hypotheses.
    """
    coeffs = (_coefficients(x), _coefficients(y))
    d = len(coeffs[0])
    if len(coeffs[1]) != d:
        raise PreconditionError("coefficient vectors differ in length")
    omega = np.exp(2j * np.pi / d)
    fourier = np.array([[omega ** (j * k) for k in range(d)] for j in range(d)]) / np.sqrt(d)
    perm = _shift(d, n_parties)
    records = []
    for hyp, c in zip((FIRST, SECOND), coeffs):
        tensor = cat_vector(c, n_parties).reshape((d,) * n_parties)
        target = cat_vector(c, n_parties)
        for outcome in itertools.product(range(d), repeat=n_parties - 1):
            bob = tensor
            for k in outcome:
                bob = np.tensordot(fourier[:, k].conj(), bob, axes=([0], [0]))
            prob = float(np.real(np.vdot(bob, bob)))
            bob = bob / np.sqrt(prob)
            correction = omega ** (np.arange(d) * sum(outcome))
            bob = correction * bob
            joint = np.zeros(d ** n_parties, dtype=complex)
            joint[np.arange(d) * d ** (n_parties - 1)] = bob
            final = joint[perm]
            fid = float(abs(np.vdot(target, final)) ** 2)
            records.append(RecreationRecord(hyp, outcome, prob, correction, fid, final))
    return records


def any_figure_of_merit_check(f, g, p1, p2, figure="min-error", certificate=None):
    """``(local, global)`` value for a Schmidt-correlatable pair.

    Local: recreate the pair at Bob and apply the global optimum there.
    Global: the optimum computed on the original states.
    """
    cert = certificate if certificate is not None else schmidt_correlate(f, g)
    if not cert.correlatable:
        raise PreconditionError(f"pair is not Schmidt-correlatable ({cert.violated})")
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    dims = f.shape
    original = Ensemble(from_state_matrix(f, dims), from_state_matrix(g, dims), p1, p2)
    d = len(cert.x)
    held = Ensemble(PureState((d, d), cat_vector(cert.x)), PureState((d, d), cat_vector(cert.y)), p1, p2)
    records = recreation_protocol(cert.x, cert.y)
    prior = {FIRST: p1, SECOND: p2}
    if figure == "min-error":
        povm = helstrom(held).povm()
        global_value = helstrom(original).error_probability
    elif figure == "conclusive":
        povm = conclusive_povm(held)
        global_value = conclusive_global(original).success_probability
    else:
        raise ValueError(f"unknown figure of merit {figure!r}")
    local_value = 0.0
    for rec in records:
        for elem, label in povm:
            weight = prior[rec.hypothesis] * rec.probability * float(np.real(np.vdot(rec.final_state, elem @ rec.final_state)))
            if figure == "min-error" and label != rec.hypothesis:
                local_value += weight
            elif figure == "conclusive" and label == rec.hypothesis and label != INCONCLUSIVE:
                local_value += weight
    return local_value, global_value
