"""Pure states, density operators and two-state ensembles.

Amplitudes are indexed lexicographically over the parties with party 0 the
slowest index. A bipartite *state matrix* ``M`` satisfies
``|psi> = sum_ij M[i, j] |i>_A |j>_B`` where rows run over the chosen subset of
parties (kept in declared order) and columns over the complement.
"""
from dataclasses import dataclass, field
from math import prod
from typing import Sequence, Union

import numpy as np

from . import _tol
from .linalg import PreconditionError, is_unitary, svd


class StructureError(ValueError):
    """States live on different tensor structures or a bipartition is invalid."""


def _check_dims(dims) -> tuple:
    dims = tuple(int(d) for d in dims)
    if len(dims) < 1 or any(d < 2 for d in dims):
        raise StructureError(f"party dimensions must be >= 2, got {dims}")
    return dims


@dataclass(frozen=True)
class PureState:
    dims: tuple
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = _check_dims(self.dims)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != prod(dims):
            raise StructureError(f"expected {prod(dims)} amplitudes for dims {dims}, got {amps.size}")
        if not np.all(np.isfinite(amps)):
            raise PreconditionError("amplitudes must be finite")
        if abs(np.linalg.norm(amps) - 1) > 1e-10:
            raise PreconditionError(f"state is not normalized (norm {np.linalg.norm(amps):.12g})")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, vec, dims, normalize=True):
        vec = np.asarray(vec, dtype=complex).reshape(-1)
        if normalize:
            norm = np.linalg.norm(vec)
            if norm == 0:
                raise PreconditionError("cannot normalize the zero vector")
            vec = vec / norm
        return cls(tuple(dims), vec)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return prod(self.dims)

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)


@dataclass(frozen=True)
class DensityOperator:
    dims: tuple
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = _check_dims(self.dims)
        rho = np.asarray(self.matrix, dtype=complex)
        n = prod(dims)
        if rho.shape != (n, n):
            raise StructureError(f"density matrix must be {n}x{n}, got {rho.shape}")
        if np.linalg.norm(rho - rho.conj().T) > 1e-10:
            raise PreconditionError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1) > 1e-10:
            raise PreconditionError("density matrix does not have unit trace")
        if np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0] < -1e-10:
            raise PreconditionError("density matrix is not positive semidefinite")
        rho = (rho + rho.conj().T) / 2
        rho.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", rho)

    @classmethod
    def mixture(cls, weights, states: Sequence[PureState]):
        dims = states[0].dims
        rho = sum(w * s.density() for w, s in zip(weights, states))
        return cls(dims, rho)

    @property
    def dim(self) -> int:
        return prod(self.dims)

    def density(self) -> np.ndarray:
        return self.matrix


State = Union[PureState, DensityOperator]


@dataclass(frozen=True)
class Ensemble:
    state1: State
    state2: State
    p1: float
    p2: float

    def __post_init__(self):
        if self.state1.dims != self.state2.dims:
            raise StructureError(f"states have different structures {self.state1.dims} vs {self.state2.dims}")
        p1, p2 = float(self.p1), float(self.p2)
        if p1 < 0 or p2 < 0 or abs(p1 + p2 - 1) > 1e-12:
            raise PreconditionError(f"priors must be non-negative and sum to 1, got {p1}, {p2}")
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p2", p2)

    @property
    def dims(self) -> tuple:
        return self.state1.dims

    @property
    def is_pure(self) -> bool:
        return isinstance(self.state1, PureState) and isinstance(self.state2, PureState)

    def swapped(self) -> "Ensemble":
        return Ensemble(self.state2, self.state1, self.p2, self.p1)


@dataclass(frozen=True)
class SchmidtDecomposition:
    coefficients: np.ndarray  # non-negative, descending
    left: np.ndarray  # columns
    right: np.ndarray  # columns

    def blocks(self, tol=_tol.DEGENERACY):
        """Index ranges of degenerate coefficient groups (chain grouping)."""
        return degeneracy_blocks(self.coefficients, tol)


def degeneracy_blocks(values, tol=_tol.DEGENERACY):
    values = np.asarray(values)
    if values.size == 0:
        return []
    blocks = []
    start = 0
    for i in range(1, values.size):
        if abs(values[i - 1] - values[i]) >= tol:
            blocks.append(range(start, i))
            start = i
    blocks.append(range(start, values.size))
    return blocks


def _bipartition(dims, subset):
    subset = sorted(set(int(p) for p in subset))
    if not subset or len(subset) >= len(dims) or subset[0] < 0 or subset[-1] >= len(dims):
        raise StructureError(f"bipartition must be a nonempty proper subset of parties, got {subset}")
    rest = [p for p in range(len(dims)) if p not in subset]
    return subset, rest


def to_state_matrix(state: PureState, subset=(0,)) -> np.ndarray:
    rows, cols = _bipartition(state.dims, subset)
    t = state.tensor().transpose(rows + cols)
    d_a = prod(state.dims[p] for p in rows)
    return t.reshape(d_a, -1).copy()


def from_state_matrix(matrix, dims, subset=(0,)) -> PureState:
    dims = _check_dims(dims)
    rows, cols = _bipartition(dims, subset)
    order = rows + cols
    m = np.asarray(matrix, dtype=complex)
    t = m.reshape([dims[p] for p in order])
    inverse = np.argsort(order)
    return PureState(dims, t.transpose(inverse).reshape(-1))


def schmidt(matrix) -> SchmidtDecomposition:
    m = np.asarray(matrix, dtype=complex)
    if abs(np.linalg.norm(m) - 1) > 1e-10:
        raise PreconditionError("state matrix is not normalized")
    res = svd(m)
    r = len(res.s)
    # M = sum_k s_k u_k v_k^H  ->  right Schmidt vectors are conj(v_k)
    return SchmidtDecomposition(res.s.copy(), res.u[:, :r], res.v[:, :r].conj())


def apply_local_unitaries(matrix, u, v) -> np.ndarray:
    """State matrix after ``U (x) V``: ``U @ M @ V.T``."""
    m = np.asarray(matrix, dtype=complex)
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != (m.shape[0],) * 2 or v.shape != (m.shape[1],) * 2:
        raise StructureError("local unitaries do not match the state matrix shape")
    if not (is_unitary(u) and is_unitary(v)):
        raise PreconditionError("local factors must be unitary")
    return u @ m @ v.T


def reduced_density(matrix, side="A") -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if side == "A":
        return m @ m.conj().T
    if side == "B":
        return (m.conj().T @ m).T
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def overlap(s1: PureState, s2: PureState) -> complex:
    """<s1|s2>."""
    if s1.dims != s2.dims:
        raise StructureError(f"structure mismatch {s1.dims} vs {s2.dims}")
    return complex(np.vdot(s1.amplitudes, s2.amplitudes))


def product_factors(state: PureState, tol=1e-9):
    """Per-party factors of a fully product state, or ``None`` if entangled."""
    factors = []
    current = state.amplitudes
    dims = state.dims
    for p in range(len(dims) - 1):
        m = current.reshape(dims[p], -1)
        res = svd(m)
        if res.s[1:].size and np.sum(res.s[1:] ** 2) > tol:
            return None
        factors.append(res.u[:, 0] * res.s[0])
        current = res.v[:, 0].conj()
    factors.append(current)
    return [f / np.linalg.norm(f) for f in factors]
