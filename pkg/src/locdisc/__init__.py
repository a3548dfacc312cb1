"""Optimal local (LOCC) discrimination of two multipartite pure states."""
from .conclusive import conclusive_global, conclusive_local_search
from .helstrom import helstrom
from .schmidt_corr import correlate_maximally_entangled, is_schmidt_correlatable, schmidt_correlate
from .states import Ensemble, PureState
from .walgate import local_protocol_optimal, local_protocol_orthogonal, walgate_decompose

__all__ = [
    "Ensemble", "PureState", "helstrom", "local_protocol_optimal", "local_protocol_orthogonal",
    "walgate_decompose", "conclusive_global", "conclusive_local_search", "schmidt_correlate",
    "is_schmidt_correlatable", "correlate_maximally_entangled",
]
