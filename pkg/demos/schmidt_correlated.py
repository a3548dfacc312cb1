"""Schmidt-correlated pairs: hand both states to one party.

If two bipartite states can be diagonalized by the same local unitaries,
Alice can measure in the Fourier basis and Bob ends up holding the whole
pair. Then any global measurement can be run by Bob alone.
"""
import numpy as np

from locdisc import sampling
from locdisc.schmidt_corr import (
    any_figure_of_merit_check, correlate_maximally_entangled, is_schmidt_correlatable, recreation_protocol,
    schmidt_correlate,
)

rng = np.random.default_rng(5)

# Two random maximally entangled qutrit states are always correlatable.
f = sampling.random_maximally_entangled_matrix(rng, 3)
g = sampling.random_maximally_entangled_matrix(rng, 3)
cert = correlate_maximally_entangled(f, g)
print("common-basis coefficients x:", np.round(cert.x, 4))
print("common-basis coefficients y:", np.round(cert.y, 4))

records = recreation_protocol(cert.x, cert.y, n_parties=3)
print(f"{len(records)} branches, worst fidelity {min(r.fidelity for r in records):.15f}")

for figure in ("min-error", "conclusive"):
    local, global_ = any_figure_of_merit_check(f, g, 0.3, 0.7, figure, certificate=cert)
    print(f"{figure:10s} local {local:.12f} global {global_:.12f}")

# A generic pair fails the commutator test.
f = sampling.haar_state(rng, (3, 3)).amplitudes.reshape(3, 3)
g = sampling.haar_state(rng, (3, 3)).amplitudes.reshape(3, 3)
cert = is_schmidt_correlatable(f, g)
print(f"\nrandom pair correlatable? {cert.correlatable}: {cert.violated} = {cert.commutator_norm:.3e}")
print("certificate returned by schmidt_correlate has U:", schmidt_correlate(f, g).u is not None)
