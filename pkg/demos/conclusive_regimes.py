"""Conclusive (never-wrong) discrimination and its two regimes.

The optimal error-free measurement depends on the overlap s and the priors.
With very unequal priors it pays to give up on the rare state and only ever
announce the common one. We sweep s, compare with the local protocols, and
run the two-qubit local basis search.
"""
import numpy as np

from locdisc import sampling
from locdisc.conclusive import (
    conclusive_global, conclusive_local_orthogonal_regime, conclusive_local_product, conclusive_local_search,
)
from locdisc.states import Ensemble, PureState

rng = np.random.default_rng(11)


def pair(s, p1):
    a = sampling.haar_vector(rng, 4)
    perp = sampling.haar_vector(rng, 4)
    perp -= np.vdot(a, perp) * a
    perp /= np.linalg.norm(perp)
    b = s * a + np.sqrt(1 - s * s) * perp
    return Ensemble(PureState((2, 2), a), PureState((2, 2), b), p1, 1 - p1)


p1 = 0.2
print(f"priors {p1} / {1 - p1}, threshold s = {np.sqrt(p1 / (1 - p1)):.3f}")
for s in np.linspace(0.1, 0.9, 9):
    e = pair(s, p1)
    g = conclusive_global(e)
    line = f"s={s:.1f}  {g.regime:10s} global={g.success_probability:.6f}"
    if g.locally_supported:
        _, stats = conclusive_local_orthogonal_regime(e)
        line += f"  local={stats.success:.6f}"
    else:
        line += "  local: no construction known"
    print(line)

# Product states at equal priors: each party runs its own measurement.
a, b = sampling.random_product_state(rng, (2, 2)), sampling.random_product_state(rng, (2, 2))
stats = conclusive_local_product(Ensemble(a, b, 0.5, 0.5))
print(f"\nproduct pair: local {stats.success:.6f}, 1 - s = {1 - abs(np.vdot(a.amplitudes, b.amplitudes)):.6f}")

# Entangled two-qubit pairs at equal priors: search Alice's basis.
found = 0
for _ in range(50):
    e = sampling.random_pure_ensemble(rng, (2, 2))
    strat = conclusive_local_search(Ensemble(e.state1, e.state2, 0.5, 0.5))
    found += strat.found
print(f"search reached the global value on {found} of 50 random pairs")
