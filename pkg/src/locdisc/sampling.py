"""Seeded random generators for states, unitaries and ensembles.

All functions take a ``numpy.random.Generator`` (PCG64 via
``numpy.random.default_rng(seed)``) so every run is reproducible.
"""
from math import prod

import numpy as np

from .states import DensityOperator, Ensemble, PureState


def haar_vector(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def haar_state(rng, dims) -> PureState:
    return PureState(tuple(dims), haar_vector(rng, prod(dims)))


def haar_unitary(rng, n) -> np.ndarray:
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_priors(rng):
    p1 = float(rng.uniform())
    return p1, 1.0 - p1


def random_pure_ensemble(rng, dims) -> Ensemble:
    p1, p2 = random_priors(rng)
    return Ensemble(haar_state(rng, dims), haar_state(rng, dims), p1, p2)


def random_orthogonal_pair(rng, dims):
    a = haar_vector(rng, prod(dims))
    b = haar_vector(rng, prod(dims))
    b = b - np.vdot(a, b) * a
    b = b / np.linalg.norm(b)
    return PureState(tuple(dims), a), PureState(tuple(dims), b)


def random_2d_span_ensemble(rng, dims) -> Ensemble:
    """Two mixed states of rank <= 2 supported on one random 2-D subspace."""
    e1, e2 = random_orthogonal_pair(rng, dims)
    basis = np.column_stack([e1.amplitudes, e2.amplitudes])

    def rho():
        g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        small = g @ g.conj().T
        small /= np.trace(small)
        return basis @ small @ basis.conj().T

    p1, p2 = random_priors(rng)
    return Ensemble(DensityOperator(dims, rho()), DensityOperator(dims, rho()), p1, p2)


def random_product_state(rng, dims) -> PureState:
    vec = np.ones(1, dtype=complex)
    for d in dims:
        vec = np.kron(vec, haar_vector(rng, d))
    return PureState(tuple(dims), vec)


def random_maximally_entangled_matrix(rng, d) -> np.ndarray:
    return haar_unitary(rng, d) / np.sqrt(d)
