"""Read-once monotone formulas as trees of AND/OR gates over variable leaves."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

import numpy as np

from ..errors import ShapeError


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Gate:
    op: str  # "AND" | "OR"
    children: tuple

    def __post_init__(self):
        if self.op not in ("AND", "OR"):
            raise ShapeError(f"unknown gate {self.op!r}")
        if not self.children:
            raise ShapeError("gates need at least one child")


Node = Union[Var, Gate]


def AND(*children: Node) -> Gate:
    return Gate("AND", tuple(children))


def OR(*children: Node) -> Gate:
    return Gate("OR", tuple(children))


@dataclass(frozen=True)
class Formula:
    num_vars: int
    root: Node
    header: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for v in self.leaves():
            if not 0 <= v < self.num_vars:
                raise ShapeError(f"leaf x{v} outside {self.num_vars} variables")

    def leaves(self) -> Iterator[int]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Var):
                yield node.index
            else:
                stack.extend(reversed(node.children))

    def is_read_once(self) -> bool:
        seen = list(self.leaves())
        return len(seen) == len(set(seen))

    @property
    def depth(self) -> int:
        def go(node):
            if isinstance(node, Var):
                return 0
            return 1 + max(go(c) for c in node.children)
        return go(self.root)

    def evaluate(self, x) -> int:
        bits = [int(c) for c in x]
        if len(bits) != self.num_vars:
            raise ShapeError(f"assignment has length {len(bits)}, expected {self.num_vars}")

        def go(node):
            if isinstance(node, Var):
                return bits[node.index]
            vals = (go(c) for c in node.children)
            return int(all(vals)) if node.op == "AND" else int(any(vals))
        return go(self.root)

    def evaluate_columns(self, cols) -> np.ndarray:
        def go(node):
            if isinstance(node, Var):
                return cols[node.index]
            vals = [go(c) for c in node.children]
            out = vals[0].copy()
            for v in vals[1:]:
                if node.op == "AND":
                    out &= v
                else:
                    out |= v
            return out
        return go(self.root)

    def layer_fanins(self) -> list[tuple[str, int]] | None:
        """(op, fan-in) per layer from the top, or None if layers are not uniform."""
        layers = []
        level = [self.root]
        while level and isinstance(level[0], Gate):
            if not all(isinstance(g, Gate) for g in level):
                return None
            ops = {g.op for g in level}
            fans = {len(g.children) for g in level}
            if len(ops) != 1 or len(fans) != 1:
                return None
            layers.append((ops.pop(), fans.pop()))
            level = [c for g in level for c in g.children]
        if not all(isinstance(v, Var) for v in level):
            return None
        return layers

    def substitute(self, values: str) -> Node | int:
        """Plug in a {0,1,*} restriction and simplify; returns a node or a constant."""
        def go(node):
            if isinstance(node, Var):
                c = values[node.index]
                return node if c == "*" else int(c)
            kids = []
            for c in node.children:
                r = go(c)
                if isinstance(r, int):
                    if node.op == "AND" and r == 0:
                        return 0
                    if node.op == "OR" and r == 1:
                        return 1
                    continue
                kids.append(r)
            if not kids:
                return 1 if node.op == "AND" else 0
            return Gate(node.op, tuple(kids))
        return go(self.root)

    def to_json(self) -> dict:
        def enc(node):
            if isinstance(node, Var):
                return {"var": node.index}
            return {"gate": node.op, "children": [enc(c) for c in node.children]}
        return {"header": dict(self.header, num_vars=self.num_vars), "formula": enc(self.root)}

    @classmethod
    def from_json(cls, obj: dict) -> "Formula":
        def dec(o):
            if "var" in o:
                return Var(int(o["var"]))
            return Gate(o["gate"], tuple(dec(c) for c in o["children"]))
        header = dict(obj.get("header", {}))
        n = int(header.pop("num_vars"))
        return cls(n, dec(obj["formula"]), header)


def relabel(node: Node, mapping) -> Node:
    if isinstance(node, Var):
        return Var(mapping[node.index])
    return Gate(node.op, tuple(relabel(c, mapping) for c in node.children))
