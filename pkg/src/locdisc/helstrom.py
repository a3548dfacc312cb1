"""Global minimum-error discrimination of two states."""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _tol
from .linalg import PreconditionError, complete_basis, hermitian_eig
from .states import Ensemble

FIRST, SECOND = 1, 2


@dataclass(frozen=True)
class HelstromResult:
    delta: np.ndarray
    positive: np.ndarray  # columns, eigenvalue > +EIG_ZERO
    negative: np.ndarray  # columns, eigenvalue < -EIG_ZERO
    zero: np.ndarray  # columns, everything else
    error_probability: float
    plus: Optional[np.ndarray] = None
    minus: Optional[np.ndarray] = None
    coefficients: Optional[tuple] = None  # (a, b, c, d)

    def povm(self):
        """Optimal projective measurement as ``[(projector, label), ...]``.

        Zero-eigenvalue directions are answered as the first state.
        """
        out = []
        for cols, label in ((self.positive, FIRST), (self.zero, FIRST), (self.negative, SECOND)):
            for k in range(cols.shape[1]):
                v = cols[:, k]
                out.append((np.outer(v, v.conj()), label))
        return out


def _fix_phase(v, *refs):
    for ref in refs:
        ov = np.vdot(ref, v)
        if abs(ov) > 1e-12:
            return v * np.exp(-1j * np.angle(ov))
    return v


def _error(e: Ensemble, answer_first, answer_second):
    rho1, rho2 = e.state1.density(), e.state2.density()
    err = 0.0
    for v in answer_first.T:
        err += e.p2 * np.real(np.vdot(v, rho2 @ v))
    for v in answer_second.T:
        err += e.p1 * np.real(np.vdot(v, rho1 @ v))
    return float(err)


def _split(vals, vecs):
    zero_tol = _tol.EIG_ZERO
    pos = vecs[:, vals > zero_tol]
    neg = vecs[:, vals < -zero_tol]
    zero = vecs[:, np.abs(vals) <= zero_tol]
    return pos, neg, zero


def helstrom(e: Ensemble) -> HelstromResult:
    delta = e.p1 * e.state1.density() - e.p2 * e.state2.density()
    if not e.is_pure:
        eig = hermitian_eig(delta)
        pos, neg, zero = _split(eig.eigenvalues, eig.eigenvectors)
        return HelstromResult(delta, pos, neg, zero, _error(e, np.hstack([pos, zero]), neg))

    psi1, psi2 = e.state1.amplitudes, e.state2.amplitudes
    resid = psi2 - np.vdot(psi1, psi2) * psi1
    if np.linalg.norm(resid) > 1e-12:
        e2 = resid / np.linalg.norm(resid)
    else:
        e2 = complete_basis(psi1)[:, 1]
    span = np.column_stack([psi1, e2])
    eig = hermitian_eig(span.conj().T @ delta @ span)
    plus = _fix_phase(span @ eig.eigenvectors[:, 0], psi1, psi2)
    minus = _fix_phase(span @ eig.eigenvectors[:, 1], psi1, psi2)
    pair = np.column_stack([plus, minus])
    pos, neg, zero = _split(eig.eigenvalues, pair)
    rest = complete_basis(pair)[:, 2:]
    zero = np.hstack([zero, rest])
    coeffs = (np.vdot(plus, psi1), np.vdot(minus, psi1), np.vdot(plus, psi2), np.vdot(minus, psi2))
    return HelstromResult(delta, pos, neg, zero, _error(e, np.hstack([pos, zero]), neg),
                          plus=plus, minus=minus, coefficients=coeffs)


def check_povm(povm, dim, tol=1e-9):
    total = np.zeros((dim, dim), dtype=complex)
    for elem, _ in povm:
        elem = np.asarray(elem)
        if elem.shape != (dim, dim):
            raise PreconditionError(f"POVM element has shape {elem.shape}, expected {(dim, dim)}")
        herm = (elem + elem.conj().T) / 2
        if np.linalg.norm(elem - herm) > tol or np.linalg.eigvalsh(herm)[0] < -tol:
            raise PreconditionError("POVM element is not positive semidefinite")
        total = total + elem
    if np.linalg.norm(total - np.eye(dim)) > _tol.rel(tol):
        raise PreconditionError("POVM elements do not sum to the identity")


def error_of_measurement(e: Ensemble, povm) -> float:
    """Average error of a labelled POVM; labels are 1 (first state) or 2."""
    rho1, rho2 = e.state1.density(), e.state2.density()
    check_povm(povm, rho1.shape[0])
    err = 0.0
    for elem, label in povm:
        if label == FIRST:
            err += e.p2 * np.real(np.trace(rho2 @ elem))
        elif label == SECOND:
            err += e.p1 * np.real(np.trace(rho1 @ elem))
        else:
            raise PreconditionError(f"minimum-error POVM labels must be 1 or 2, got {label!r}")
    return float(err)
