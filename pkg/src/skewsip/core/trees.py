"""Binary decision trees over variable indices."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from ..errors import ShapeError


class Leaf(NamedTuple):
    value: int


class Query(NamedTuple):
    var: int
    zero: "TreeNode"
    one: "TreeNode"
    term: Optional[int] = None  # index of the term that spawned this query, if any


TreeNode = Union[Leaf, Query]


def node_depth(node: TreeNode) -> int:
    if isinstance(node, Leaf):
        return 0
    return 1 + max(node_depth(node.zero), node_depth(node.one))


@dataclass(frozen=True)
class DecisionTree:
    num_vars: int
    root: TreeNode

    @property
    def depth(self) -> int:
        return node_depth(self.root)

    def evaluate(self, x) -> int:
        bits = [int(c) for c in x]
        if len(bits) != self.num_vars:
            raise ShapeError(f"assignment has length {len(bits)}, expected {self.num_vars}")
        node = self.root
        while isinstance(node, Query):
            node = node.one if bits[node.var] else node.zero
        return node.value

    def evaluate_columns(self, cols) -> np.ndarray:
        out = np.zeros(cols.size, dtype=bool)

        def go(node, mask):
            if isinstance(node, Leaf):
                if node.value:
                    out[mask] = True
                return
            col = cols[node.var]
            go(node.zero, mask & ~col)
            go(node.one, mask & col)
        go(self.root, np.ones(cols.size, dtype=bool))
        return out

    def has_repeated_query(self) -> bool:
        def go(node, seen):
            if isinstance(node, Leaf):
                return False
            if node.var in seen:
                return True
            seen = seen | {node.var}
            return go(node.zero, seen) or go(node.one, seen)
        return go(self.root, frozenset())

    def paths(self):
        """Yield (answers, queried vars, leaf value) for every root-to-leaf path, 0-branch first."""
        stack = [(self.root, (), ())]
        while stack:
            node, answers, vars_ = stack.pop()
            if isinstance(node, Leaf):
                yield answers, vars_, node.value
                continue
            stack.append((node.one, answers + (1,), vars_ + (node.var,)))
            stack.append((node.zero, answers + (0,), vars_ + (node.var,)))

    def negated(self) -> "DecisionTree":
        """Tree for NOT f(NOT y): swap every query's children and flip leaves."""
        def go(node):
            if isinstance(node, Leaf):
                return Leaf(1 - node.value)
            return Query(node.var, go(node.one), go(node.zero), node.term)
        return DecisionTree(self.num_vars, go(self.root))
