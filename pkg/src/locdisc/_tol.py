"""Shared numerical tolerances.

Relative tolerances are multiplied by the ``LOCDISC_TOL_SCALE`` environment
variable (default 1), read at call time so tests can override it.
"""
import os

ABS_FLOOR = 1e-14
DEGENERACY = 1e-8
BORDERLINE = 1e-6
EIG_ZERO = 1e-11
UNREACHABLE = 1e-12


def scale() -> float:
    raw = os.environ.get("LOCDISC_TOL_SCALE", "1")
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"LOCDISC_TOL_SCALE must be a number, got {raw!r}")
    if not value > 0:
        raise ValueError("LOCDISC_TOL_SCALE must be positive")
    return value


def rel(tol: float, norm: float = 1.0) -> float:
    """Scaled relative tolerance ``tol * norm`` with an absolute floor."""
    return max(tol * scale() * norm, ABS_FLOOR)
