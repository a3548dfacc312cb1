"""Line-oriented text formats for states, ensembles and certificates.

State block::

    dims: 2 2
    amp 0 0.7071067811865476 0
    amp 3 0.7071067811865476 0

Omitted amplitudes are zero. A block may instead list density-matrix
entries ``rho <row> <col> <re> <im>`` (all nonzero entries, both triangles).
An ensemble file is two blocks separated by ``---`` and a final
``priors: p1 p2`` line. ``#`` starts a comment.
"""
from math import prod

import numpy as np

from .linalg import PreconditionError
from .states import DensityOperator, Ensemble, PureState, StructureError


class ParseError(ValueError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class InvariantError(ValueError):
    """Input parsed but violates a state invariant."""


def _num(tok, lineno):
    try:
        return float(tok)
    except ValueError:
        raise ParseError(lineno, f"not a number: {tok!r}") from None


def _parse_block(lines):
    """``lines`` is a list of ``(lineno, text)``."""
    if not lines:
        raise ParseError(0, "empty state block")
    lineno, head = lines[0]
    if not head.startswith("dims:"):
        raise ParseError(lineno, "state block must start with 'dims:'")
    try:
        dims = tuple(int(t) for t in head[5:].split())
    except ValueError:
        raise ParseError(lineno, "dims: expects integers") from None
    if not dims or any(d < 2 for d in dims):
        raise ParseError(lineno, "dims: needs at least one party of dimension >= 2")
    n = prod(dims)
    amps = {}
    rho = {}
    for lineno, text in lines[1:]:
        parts = text.split()
        if parts[0] == "amp" and len(parts) == 4:
            idx = int(_num(parts[1], lineno))
            if not 0 <= idx < n:
                raise ParseError(lineno, f"amp index {idx} out of range for dims {dims}")
            amps[idx] = complex(_num(parts[2], lineno), _num(parts[3], lineno))
        elif parts[0] == "rho" and len(parts) == 5:
            i, j = int(_num(parts[1], lineno)), int(_num(parts[2], lineno))
            if not (0 <= i < n and 0 <= j < n):
                raise ParseError(lineno, f"rho index out of range for dims {dims}")
            rho[(i, j)] = complex(_num(parts[3], lineno), _num(parts[4], lineno))
        else:
            raise ParseError(lineno, f"expected 'amp <index> <re> <im>', got {text!r}")
    if amps and rho:
        raise ParseError(lines[0][0], "a block cannot mix amp and rho lines")
    try:
        if rho:
            m = np.zeros((n, n), dtype=complex)
            for (i, j), z in rho.items():
                m[i, j] = z
            return DensityOperator(dims, m)
        vec = np.zeros(n, dtype=complex)
        for i, z in amps.items():
            vec[i] = z
        return PureState(dims, vec)
    except (PreconditionError, StructureError) as exc:
        raise InvariantError(f"state starting at line {lines[0][0]}: {exc}") from None


def _clean(text):
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line))
    return out


def parse_state(text: str):
    return _parse_block(_clean(text))


def parse_ensemble(text: str) -> Ensemble:
    lines = _clean(text)
    seps = [k for k, (_, t) in enumerate(lines) if t == "---"]
    if len(seps) != 1:
        raise ParseError(lines[-1][0] if lines else 0, "ensemble needs exactly one '---' separator")
    priors = [k for k, (_, t) in enumerate(lines) if t.startswith("priors:")]
    if len(priors) != 1 or priors[0] != len(lines) - 1:
        raise ParseError(lines[-1][0] if lines else 0, "ensemble must end with a 'priors: p1 p2' line")
    lineno, ptext = lines[-1]
    toks = ptext[len("priors:"):].split()
    if len(toks) != 2:
        raise ParseError(lineno, "priors: expects two numbers")
    p1, p2 = (_num(t, lineno) for t in toks)
    s1 = _parse_block(lines[:seps[0]])
    s2 = _parse_block(lines[seps[0] + 1:-1])
    try:
        return Ensemble(s1, s2, p1, p2)
    except (PreconditionError, StructureError) as exc:
        raise InvariantError(str(exc)) from None


def _g(x) -> str:
    return format(float(x), ".17g")


def format_state(state) -> str:
    lines = ["dims: " + " ".join(str(d) for d in state.dims)]
    if isinstance(state, PureState):
        for i, z in enumerate(state.amplitudes):
            if z != 0:
                lines.append(f"amp {i} {_g(z.real)} {_g(z.imag)}")
    else:
        for (i, j), z in np.ndenumerate(state.matrix):
            if z != 0:
                lines.append(f"rho {i} {j} {_g(z.real)} {_g(z.imag)}")
    return "\n".join(lines) + "\n"


def format_ensemble(e: Ensemble) -> str:
    return format_state(e.state1) + "---\n" + format_state(e.state2) + f"priors: {_g(e.p1)} {_g(e.p2)}\n"


def _matrix_lines(tag, m):
    rows = [" ".join(f"{_g(z.real)},{_g(z.imag)}" for z in row) for row in np.asarray(m)]
    return [f"{tag}: {m.shape[0]} {m.shape[1]}"] + rows


def format_certificate(cert) -> str:
    lines = [f"verdict: {'correlatable' if cert.correlatable else 'not-correlatable'}"]
    if cert.correlatable:
        lines += _matrix_lines("U", cert.u)
        lines += _matrix_lines("V", cert.v)
        lines.append("x: " + " ".join(f"{_g(z.real)},{_g(z.imag)}" for z in cert.x))
        lines.append("y: " + " ".join(f"{_g(z.real)},{_g(z.imag)}" for z in cert.y))
        lines.append(f"borderline: {str(cert.borderline).lower()}")
    else:
        lines.append(f"violated: {cert.violated}")
        lines.append(f"commutator_norm: {_g(cert.commutator_norm)}")
    return "\n".join(lines) + "\n"


def _pairs(tokens):
    return np.array([complex(*map(float, t.split(","))) for t in tokens])


def parse_certificate(text: str) -> dict:
    """Certificate fields as a dict (matrices/vectors as arrays)."""
    lines = _clean(text)
    out = {}
    k = 0
    while k < len(lines):
        _, line = lines[k]
        key, _, rest = line.partition(":")
        rest = rest.strip()
        if key in ("U", "V"):
            r, _c = (int(t) for t in rest.split())
            out[key] = np.array([_pairs(lines[k + 1 + i][1].split()) for i in range(r)])
            k += r + 1
            continue
        if key in ("x", "y"):
            out[key] = _pairs(rest.split())
        elif key == "commutator_norm":
            out[key] = float(rest)
        else:
            out[key] = rest
        k += 1
    return out
