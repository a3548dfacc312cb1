"""Small dense complex linear algebra.

Everything here works on plain ``numpy`` arrays. The eigensolvers are cyclic
Jacobi sweeps (single matrix, or a commuting Hermitian pair for normal
matrices), which is plenty at the dimensions used in this package (n <= 64).
"""
from dataclasses import dataclass
import itertools

import numpy as np

from . import _tol

MAX_SWEEPS = 100
JACOBI_TOL = 1e-12


class PreconditionError(ValueError):
    """Input violates a documented precondition."""


@dataclass(frozen=True)
class HermitianEigen:
    eigenvalues: np.ndarray  # real, descending
    eigenvectors: np.ndarray  # columns


@dataclass(frozen=True)
class Svd:
    """``A = u @ diag(s) @ v.conj().T`` with full unitaries ``u`` and ``v``."""
    u: np.ndarray
    s: np.ndarray
    v: np.ndarray


def fro(a) -> float:
    return float(np.linalg.norm(a))


def dagger(a):
    return np.conj(np.swapaxes(a, -1, -2))


def is_unitary(u, tol=1e-10) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return fro(u.conj().T @ u - np.eye(u.shape[0])) <= _tol.rel(tol)


def _as_square(a, name="matrix"):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise PreconditionError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise PreconditionError(f"{name} has non-finite entries")
    return a


def _off_mass(mats) -> float:
    total = 0.0
    for m in mats:
        total += fro(m - np.diag(np.diag(m))) ** 2
    return total ** 0.5


def joint_jacobi(mats, tol=JACOBI_TOL, max_sweeps=MAX_SWEEPS):
    """Jointly diagonalize commuting Hermitian matrices by Jacobi rotations.

    Uses the Cardoso-Souloumiac rotation for each index pair, which for a
    single matrix reduces to the classical complex Jacobi rotation.

    Returns ``(V, diagonals)`` with ``V^H A_k V`` diagonal for every ``k``;
    ``diagonals`` has shape ``(K, n)``.
    """
    a = np.array([np.asarray(m, dtype=complex) for m in mats])
    k, n, _ = a.shape
    v = np.eye(n, dtype=complex)
    scale_norm = max(fro(a), _tol.ABS_FLOOR)
    threshold = max(tol * scale_norm, _tol.ABS_FLOOR)
    for _ in range(max_sweeps):
        if _off_mass(a) <= threshold:
            break
        rotated = False
        for p, q in itertools.combinations(range(n), 2):
            g = np.array([
                a[:, p, p] - a[:, q, q],
                a[:, p, q] + a[:, q, p],
                1j * (a[:, q, p] - a[:, p, q]),
            ])
            gram = np.real(g @ g.conj().T)
            if np.max(np.abs(gram)) <= 1e-300:
                continue
            _, vecs = np.linalg.eigh(gram)
            x, y, z = vecs[:, -1]
            if x < 0:
                x, y, z = -x, -y, -z
            c = np.sqrt(0.5 + x / 2)
            s = 0.5 * (y - 1j * z) / c
            if abs(s) <= 1e-17:
                continue
            rotated = True
            rot = np.array([[c, -np.conj(s)], [s, c]])
            idx = [p, q]
            a[:, :, idx] = a[:, :, idx] @ rot
            a[:, idx, :] = rot.conj().T @ a[:, idx, :]
            v[:, idx] = v[:, idx] @ rot
        if not rotated:
            break
    return v, np.real(np.array([np.diag(m) for m in a]))


def hermitian_eig(a) -> HermitianEigen:
    a = _as_square(a)
    norm = fro(a)
    if fro(a - a.conj().T) > _tol.rel(1e-10, norm):
        raise PreconditionError("matrix is not Hermitian")
    a = (a + a.conj().T) / 2
    v, diags = joint_jacobi([a])
    vals = diags[0]
    order = np.argsort(-vals, kind="stable")
    return HermitianEigen(vals[order], v[:, order])


def svd(a) -> Svd:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or not np.all(np.isfinite(a)):
        raise PreconditionError("svd needs a finite 2-D array")
    u, s, vh = np.linalg.svd(a, full_matrices=True)
    return Svd(u, s, vh.conj().T)


def complete_basis(vectors) -> np.ndarray:
    """Unitary whose leading columns are the given orthonormal vectors."""
    q0 = np.asarray(vectors, dtype=complex)
    if q0.ndim == 1:
        q0 = q0[:, None]
    n, k = q0.shape
    q, _ = np.linalg.qr(np.hstack([q0, np.eye(n, dtype=complex)]))
    out = q[:, :n].copy()
    out[:, :k] = q0
    # re-orthogonalize the complement against the fixed columns
    rest = out[:, k:] - q0 @ (q0.conj().T @ out[:, k:])
    if n > k:
        rest, _ = np.linalg.qr(rest)
        out[:, k:] = rest
    return out


def _segment_vector(h, x, y, weight):
    """Unit v in span{x, y} (x orthogonal to y) with
    ``v^H h v = weight * x^H h x + (1 - weight) * y^H h y``.
    """
    hxx = np.vdot(x, h @ x)
    hyy = np.vdot(y, h @ y)
    d = hxx - hyy
    weight = min(max(float(weight), 0.0), 1.0)
    if abs(d) <= 1e-300 or weight == 1.0:
        return x
    if weight == 0.0:
        return y
    hxy = np.vdot(x, h @ y)
    hyx = np.vdot(y, h @ x)
    r_phase = np.conj(d) * hxy - np.conj(np.conj(d) * hyx)
    phi = -np.angle(r_phase) if abs(r_phase) > 0 else 0.0
    f = np.exp(1j * phi) * hxy + np.exp(-1j * phi) * hyx
    r = float(np.real(np.conj(d) * f) / abs(d) ** 2)
    # cos(u) + r sin(u) = 2 weight - 1 on u in [0, pi]
    amp = np.hypot(1.0, r)
    psi = np.arctan2(r, 1.0)
    arg = np.clip((2 * weight - 1) / amp, -1.0, 1.0)
    best = None
    for u in (psi + np.arccos(arg), psi - np.arccos(arg)):
        u = min(max(u, 0.0), np.pi)
        err = abs(np.cos(u) + r * np.sin(u) - (2 * weight - 1))
        if best is None or err < best[0]:
            best = (err, u)
    t = best[1] / 2
    return np.cos(t) * x + np.exp(1j * phi) * np.sin(t) * y


def _zero_quadratic_form(h):
    """Unit vector v with v^H h v = 0 for a traceless square ``h``."""
    n = h.shape[0]
    eye = np.eye(n, dtype=complex)
    d = np.diag(h).copy()
    k = int(np.argmax(np.abs(d)))
    dk = abs(d[k])
    if dk <= 1e-300 or n == 1:
        return eye[:, 0]
    ray = -d[k] / dk
    along = np.real(np.conj(ray) * d)
    perp = np.imag(np.conj(ray) * d)
    others = [m for m in range(n) if m != k]
    tiny = 1e-13 * dk
    best = None  # (distance along ray, i, j, weight on i)
    for m in others:
        if abs(perp[m]) <= tiny and (best is None or along[m] > best[0]):
            best = (along[m], m, m, 1.0)
    for i, j in itertools.combinations(others, 2):
        if perp[i] * perp[j] < 0:
            lam = perp[i] / (perp[i] - perp[j])  # weight on j
            dist = along[i] + lam * (along[j] - along[i])
            if best is None or dist > best[0]:
                best = (dist, i, j, 1.0 - lam)
    if best is None:
        m = max(others, key=lambda idx: along[idx])
        best = (along[m], m, m, 1.0)
    dist, i, j, w_i = best
    if i == j:
        u = eye[:, i]
    else:
        u = _segment_vector(h, eye[:, i], eye[:, j], w_i)
    hu = np.real(np.conj(ray) * np.vdot(u, h @ u))
    if hu <= tiny:
        return u
    # 0 = w + lam (d_k - w) along the ray
    lam = hu / (hu + dk)
    return _segment_vector(h, eye[:, k], u, lam)


def zero_diagonal_unitary(h) -> np.ndarray:
    """Unitary ``U`` such that ``U @ h @ U^H`` has (numerically) zero diagonal.

    ``h`` must be traceless. Each step finds a unit vector with vanishing
    quadratic form from at most two 2-D compressions, then deflates.
    """
    h = _as_square(h, "H")
    n = h.shape[0]
    norm = fro(h)
    if abs(np.trace(h)) > _tol.rel(1e-10, norm):
        raise PreconditionError(f"H is not traceless (|Tr H| = {abs(np.trace(h)):.3e})")
    if norm <= _tol.ABS_FLOOR:
        return np.eye(n, dtype=complex)
    basis = np.eye(n, dtype=complex)
    current = h - np.trace(h) / n * np.eye(n)
    for step in range(n - 1):
        v = _zero_quadratic_form(current)
        q = complete_basis(v / np.linalg.norm(v))
        basis[:, step:] = basis[:, step:] @ q
        current = (q.conj().T @ current @ q)[1:, 1:]
        current = current - np.trace(current) / current.shape[0] * np.eye(current.shape[0])
    return basis.conj().T


def is_normal(n, tol=1e-9) -> bool:
    n = np.asarray(n, dtype=complex)
    norm = fro(n)
    return fro(n @ n.conj().T - n.conj().T @ n) <= _tol.rel(tol, norm ** 2)


def diagonalize_normal(n) -> np.ndarray:
    """Unitary ``U`` with ``U @ n @ U^H`` diagonal, for normal ``n``."""
    n = _as_square(n, "N")
    if not is_normal(n):
        raise PreconditionError("matrix is not normal")
    re_part = (n + n.conj().T) / 2
    im_part = (n - n.conj().T) / 2j
    v, _ = joint_jacobi([re_part, im_part])
    return v.conj().T
