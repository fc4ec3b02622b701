"""Unbounded fan-in monotone circuits stored as topologically ordered gate lists.

Size counts every gate including inputs; depth is the longest input-to-output
path with inputs (and constants) at depth 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ..errors import ShapeError
from .formula import Formula, Var


class Gate(NamedTuple):
    kind: str  # "INPUT" | "CONST" | "AND" | "OR"
    arg: object  # variable index, constant bit, or tuple of child gate ids


class CircuitMetrics(NamedTuple):
    size: int
    depth: int
    max_fanin: int


@dataclass(frozen=True)
class Circuit:
    num_vars: int
    gates: tuple
    output: int

    def __post_init__(self):
        gates = tuple(Gate(*g) for g in self.gates)
        for i, g in enumerate(gates):
            if g.kind == "INPUT":
                if not 0 <= g.arg < self.num_vars:
                    raise ShapeError(f"gate {i} reads x{g.arg} outside {self.num_vars} variables")
            elif g.kind in ("AND", "OR"):
                if any(not 0 <= c < i for c in g.arg):
                    raise ShapeError(f"gate {i} is not topologically ordered")
            elif g.kind != "CONST":
                raise ShapeError(f"unknown gate kind {g.kind!r}")
        if not 0 <= self.output < len(gates):
            raise ShapeError("output gate out of range")
        object.__setattr__(self, "gates", gates)

    def evaluate(self, x) -> int:
        bits = [int(c) for c in x]
        if len(bits) != self.num_vars:
            raise ShapeError(f"assignment has length {len(bits)}, expected {self.num_vars}")
        vals = []
        for g in self.gates:
            if g.kind == "INPUT":
                vals.append(bits[g.arg])
            elif g.kind == "CONST":
                vals.append(int(g.arg))
            elif g.kind == "AND":
                vals.append(int(all(vals[c] for c in g.arg)))
            else:
                vals.append(int(any(vals[c] for c in g.arg)))
        return vals[self.output]

    def evaluate_columns(self, cols) -> np.ndarray:
        vals: list[np.ndarray] = []
        for g in self.gates:
            if g.kind == "INPUT":
                vals.append(cols[g.arg])
            elif g.kind == "CONST":
                vals.append(np.full(cols.size, bool(g.arg)))
            else:
                kids = [vals[c] for c in g.arg]
                vals.append(np.logical_and.reduce(kids) if g.kind == "AND" else np.logical_or.reduce(kids))
        return vals[self.output]

    def metrics(self) -> CircuitMetrics:
        depth = []
        for g in self.gates:
            depth.append(0 if g.kind in ("INPUT", "CONST") else 1 + max(depth[c] for c in g.arg))
        fanin = max((len(g.arg) for g in self.gates if g.kind in ("AND", "OR")), default=0)
        return CircuitMetrics(len(self.gates), depth[self.output], fanin)

    @property
    def size(self) -> int:
        return len(self.gates)

    @property
    def depth(self) -> int:
        return self.metrics().depth

    def substitute(self, mapping: Sequence, num_vars: int) -> "Circuit":
        """Replace input x_i by ``mapping[i]``: an int bit or ``("var", j)``.

        Constants are propagated; a gate that becomes constant disappears.
        """
        b = CircuitBuilder(num_vars)
        ids: list = []
        for g in self.gates:
            if g.kind == "INPUT":
                m = mapping[g.arg]
                ids.append(int(m) if isinstance(m, (int, np.integer)) else b.input(m[1]))
            elif g.kind == "CONST":
                ids.append(int(g.arg))
            else:
                kids = [ids[c] for c in g.arg]
                ids.append(b.and_(kids) if g.kind == "AND" else b.or_(kids))
        return b.build(ids[self.output])

    def to_json(self) -> dict:
        return {
            "num_vars": self.num_vars,
            "output": self.output,
            "gates": [[g.kind, list(g.arg) if isinstance(g.arg, tuple) else g.arg] for g in self.gates],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Circuit":
        gates = []
        for kind, arg in obj["gates"]:
            gates.append(Gate(kind, tuple(arg) if isinstance(arg, list) else arg))
        return cls(int(obj["num_vars"]), tuple(gates), int(obj["output"]))


def circuit_metrics(C: Circuit) -> CircuitMetrics:
    return C.metrics()


class CircuitBuilder:
    """Hash-consing builder. ``and_``/``or_`` accept gate ids or constant bits.

    Constant children are folded away; an AND with a 0 child returns the bit 0.
    Unary gates are kept so layered constructions keep their depth.
    """

    def __init__(self, num_vars: int):
        self.num_vars = num_vars
        self._gates: list[Gate] = []
        self._index: dict = {}

    def _add(self, gate: Gate) -> int:
        gid = self._index.get(gate)
        if gid is None:
            gid = len(self._gates)
            self._gates.append(gate)
            self._index[gate] = gid
        return gid

    def input(self, var: int) -> "Ref":
        return Ref(self._add(Gate("INPUT", int(var))))

    def _combine(self, kind: str, children):
        absorbing, neutral = (0, 1) if kind == "AND" else (1, 0)
        kids = []
        for c in children:
            if isinstance(c, bool):
                c = int(c)
            if isinstance(c, int) and not isinstance(c, Ref):
                if c == absorbing:
                    return absorbing
                continue
            kids.append(int(c))
        if not kids:
            return neutral
        return Ref(self._add(Gate(kind, tuple(dict.fromkeys(kids)))))

    def and_(self, children):
        return self._combine("AND", children)

    def or_(self, children):
        return self._combine("OR", children)

    def build(self, output) -> Circuit:
        """Finish the circuit, keeping only gates reachable from ``output``."""
        if not isinstance(output, Ref) and isinstance(output, int):
            return Circuit(self.num_vars, (Gate("CONST", int(output)),), 0)
        keep = set()
        stack = [int(output)]
        while stack:
            g = stack.pop()
            if g in keep:
                continue
            keep.add(g)
            if self._gates[g].kind in ("AND", "OR"):
                stack.extend(self._gates[g].arg)
        order = sorted(keep)
        new_id = {old: i for i, old in enumerate(order)}
        gates = []
        for old in order:
            g = self._gates[old]
            if g.kind in ("AND", "OR"):
                g = Gate(g.kind, tuple(new_id[c] for c in g.arg))
            gates.append(g)
        return Circuit(self.num_vars, tuple(gates), new_id[int(output)])


class Ref(int):
    """A gate id, kept distinct from the constant bits 0 and 1."""


def formula_to_circuit(f: Formula) -> Circuit:
    b = CircuitBuilder(f.num_vars)

    def go(node):
        if isinstance(node, Var):
            return b.input(node.index)
        kids = [go(c) for c in node.children]
        return b.and_(kids) if node.op == "AND" else b.or_(kids)
    return b.build(go(f.root))


def dnf_to_circuit(F) -> Circuit:
    """Depth-2 OR-of-ANDs circuit of a DNF; negative literals are not monotone and rejected."""
    b = CircuitBuilder(F.num_vars)
    terms = []
    for t in F.terms:
        if any(not lit.positive for lit in t):
            raise ShapeError("monotone circuits cannot hold negative literals")
        terms.append(b.and_([b.input(lit.var) for lit in t]))
    return b.build(b.or_(terms))
