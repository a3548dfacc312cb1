"""LOCC measurement trees: simulation, flattening to a POVM, text format.

A protocol is a tree of rounds. Each round names the acting party and an
orthonormal basis of that party's space (columns of ``basis``); child ``k``
is followed after outcome ``k``. Leaves carry an answer label: 1 and 2 name
the hypotheses and 0 means "don't know".
"""
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .linalg import is_unitary


@dataclass(frozen=True)
class Leaf:
    label: int


@dataclass(frozen=True)
class Round:
    party: int
    basis: np.ndarray
    children: Tuple[Union["Round", Leaf], ...]


Node = Union[Round, Leaf]


@dataclass(frozen=True)
class LoccProtocol:
    dims: tuple
    root: Node

    def validate(self, tol=1e-10):
        def walk(node, last_party):
            if isinstance(node, Leaf):
                return
            if node.party <= last_party or node.party >= len(self.dims):
                raise ValueError(f"party {node.party} measured out of order")
            d = self.dims[node.party]
            if node.basis.shape != (d, d) or not is_unitary(node.basis, tol):
                raise ValueError(f"round on party {node.party} is not an orthonormal basis")
            if len(node.children) != d:
                raise ValueError("one child per outcome is required")
            for child in node.children:
                walk(child, node.party)

        walk(self.root, -1)

    def depth(self) -> int:
        def walk(node):
            if isinstance(node, Leaf):
                return 0
            return 1 + max(walk(c) for c in node.children)

        return walk(self.root)

    def leaves(self):
        """Yield ``(path, label)`` where path is a tuple of ``(party, vector)``."""
        def walk(node, path):
            if isinstance(node, Leaf):
                yield path, node.label
                return
            for k, child in enumerate(node.children):
                yield from walk(child, path + ((node.party, node.basis[:, k]),))

        yield from walk(self.root, ())

    def povm(self):
        """Flattened leaf elements ``[(E, label), ...]`` on the full space."""
        out = []
        for path, label in self.leaves():
            factors = {party: np.outer(v, v.conj()) for party, v in path}
            elem = np.ones((1, 1), dtype=complex)
            for p, d in enumerate(self.dims):
                elem = np.kron(elem, factors.get(p, np.eye(d)))
            out.append((elem, label))
        return out

    def label_probabilities(self, state) -> dict:
        """Outcome-label distribution for a pure state, by sequential collapse."""
        probs: dict = {}

        def walk(node, tensor, parties):
            norm2 = float(np.real(np.vdot(tensor, tensor)))
            if norm2 <= 0:
                return
            if isinstance(node, Leaf):
                probs[node.label] = probs.get(node.label, 0.0) + norm2
                return
            axis = parties.index(node.party)
            rest = parties[:axis] + parties[axis + 1:]
            for k, child in enumerate(node.children):
                branch = np.tensordot(node.basis[:, k].conj(), tensor, axes=([0], [axis]))
                walk(child, branch, rest)

        walk(self.root, state.amplitudes.reshape(self.dims), list(range(len(self.dims))))
        return probs


def _fmt(x: float) -> str:
    return repr(float(x))


def to_text(protocol: LoccProtocol) -> str:
    rounds = []

    def number(node):
        if isinstance(node, Leaf):
            return f"L{node.label}"
        idx = len(rounds)
        rounds.append(None)
        refs = [number(c) for c in node.children]
        rows = "/".join(";".join(f"{_fmt(z.real)},{_fmt(z.imag)}" for z in node.basis[:, k])
                        for k in range(node.basis.shape[1]))
        rounds[idx] = f"round {node.party} basis={rows} outcomes={','.join(refs)}"
        return f"#{idx}"

    head = "dims: " + " ".join(str(d) for d in protocol.dims)
    root = number(protocol.root)
    lines = [head] + ([f"root {root}"] if root.startswith("L") else rounds)
    return "\n".join(lines) + "\n"


def from_text(text: str) -> LoccProtocol:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("dims:"):
        raise ValueError("protocol text must start with 'dims:'")
    dims = tuple(int(t) for t in lines[0][5:].split())
    body = lines[1:]
    if len(body) == 1 and body[0].startswith("root "):
        return LoccProtocol(dims, Leaf(int(body[0][6:])))
    parsed = []
    for ln in body:
        parts = ln.split()
        if len(parts) != 4 or parts[0] != "round":
            raise ValueError(f"bad protocol line: {ln!r}")
        party = int(parts[1])
        rows = parts[2][len("basis="):].split("/")
        mat = np.array([[complex(float(a), float(b)) for a, b in (e.split(",") for e in r.split(";"))]
                        for r in rows])
        parsed.append((party, mat.T, parts[3][len("outcomes="):].split(",")))

    def build(idx):
        party, basis, refs = parsed[idx]
        kids = tuple(Leaf(int(r[1:])) if r.startswith("L") else build(int(r[1:])) for r in refs)
        return Round(party, basis, kids)

    return LoccProtocol(dims, build(0))

