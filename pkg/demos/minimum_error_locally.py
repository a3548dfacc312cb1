"""Minimum-error discrimination of two entangled states, done locally.

Two random three-party states with unequal priors. We compute the best
global measurement, then build a one-way LOCC protocol (each party measures
once, in order) and check that it does exactly as well.
"""
import numpy as np

from locdisc import sampling
from locdisc.helstrom import helstrom
from locdisc.protocol import to_text
from locdisc.walgate import local_protocol_optimal, walgate_decompose
from locdisc.states import PureState

rng = np.random.default_rng(7)
e = sampling.random_pure_ensemble(rng, (2, 3, 2))
print(f"priors {e.p1:.3f} / {e.p2:.3f}, overlap {abs(np.vdot(e.state1.amplitudes, e.state2.amplitudes)):.3f}")

# The global optimum projects onto the positive and negative parts of
# p1 rho1 - p2 rho2. For pure states this is a pair of orthogonal vectors.
res = helstrom(e)
print(f"global error {res.error_probability:.15f}")

# The trick: |+> and |-> are orthogonal, so some sequence of local
# measurements tells them apart perfectly. Here is the first party's step.
dec = walgate_decompose(PureState(e.dims, res.plus), PureState(e.dims, res.minus))
print("first party's outcome weights under |+>:", np.round(dec.alpha ** 2, 4))
print("remaining states stay orthogonal:", np.max(dec.orthogonality()))

protocol, local_error = local_protocol_optimal(e)
print(f"local error  {local_error:.15f}  (gap {abs(local_error - res.error_probability):.1e})")

# Rounds are listed party by party. Basis rows are outcome vectors.
print(to_text(protocol)[:400], "...")
