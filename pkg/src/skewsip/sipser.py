"""SkewedSipser, CNFSipser, the dagger variant, and the address layout.

Variables of SkewedSipser(u, w, w_b, d) are addressed by tuples
``(b0, a1, b1, ..., a_d, b_d)`` with ``a_i < u``, ``b_0..b_{d-1} < w`` and
``b_d < w_b``; the dense index is the mixed-radix (lexicographic) rank of the
tuple, which is also the left-to-right leaf order of the formula.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .core.circuits import Circuit, CircuitBuilder
from .core.formula import AND, OR, Formula, Gate, Var
from .errors import ShapeError


@dataclass(frozen=True)
class SipserParams:
    u: int
    w: int
    w_b: int
    d: int

    def __post_init__(self):
        if self.u < 2 or self.w < 1 or self.w_b < 1 or self.d < 0:
            raise ShapeError(f"invalid parameters {self}")

    @property
    def n(self) -> int:
        return (self.u * self.w) ** self.d * self.w_b

    def lower(self) -> "SipserParams":
        return SipserParams(self.u, self.w, self.w_b, self.d - 1)

    def to_json(self) -> dict:
        return {"u": self.u, "w": self.w, "w_b": self.w_b, "d": self.d}


@dataclass(frozen=True)
class AddressSpace:
    """The layout A(d) = B(d) x A' with blocks of u*w_b variables and sections of w_b."""

    params: SipserParams

    @property
    def u(self) -> int:
        return self.params.u

    @property
    def w_b(self) -> int:
        return self.params.w_b

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def num_blocks(self) -> int:
        p = self.params
        if p.d == 0:
            return 1
        return p.w * (p.u * p.w) ** (p.d - 1)

    @property
    def block_size(self) -> int:
        p = self.params
        return p.w_b if p.d == 0 else p.u * p.w_b

    @cached_property
    def radices(self) -> tuple[int, ...]:
        p = self.params
        if p.d == 0:
            return (p.w_b,)
        return (p.w,) + (p.u, p.w) * (p.d - 1) + (p.u, p.w_b)

    def address_to_index(self, address) -> int:
        address = tuple(address)
        if len(address) != len(self.radices):
            raise ShapeError(f"address needs {len(self.radices)} components")
        idx = 0
        for a, r in zip(address, self.radices):
            if not 0 <= a < r:
                raise ShapeError(f"address component {a} outside [0, {r})")
            idx = idx * r + a
        return idx

    def index_to_address(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.n:
            raise ShapeError(f"index {index} outside [0, {self.n})")
        out = []
        for r in reversed(self.radices):
            index, a = divmod(index, r)
            out.append(a)
        return tuple(reversed(out))

    def block_of(self, var: int) -> int:
        return var // self.block_size

    def section_of(self, var: int) -> int:
        return (var % self.block_size) // self.w_b

    def block_range(self, beta: int) -> range:
        start = beta * self.block_size
        return range(start, start + self.block_size)

    def section_range(self, beta: int, a: int) -> range:
        start = beta * self.block_size + a * self.w_b
        return range(start, start + self.w_b)

    def block_address(self, beta: int) -> tuple[int, ...]:
        """The B(d) address (b0, a1, b1, ..., a_{d-1}, b_{d-1}) of block beta."""
        return self.index_to_address(beta * self.block_size)[:-2]

    @property
    def num_or2_gates(self) -> int:
        """Number of OR gates directly above the AND^(1) (block) gates."""
        return self.num_blocks // self.params.w


def _build(u: int, w: int, w_b: int, d: int, counter) -> Gate:
    if d == 0:
        return OR(*(Var(next(counter)) for _ in range(w_b)))
    return OR(*(AND(*(_build(u, w, w_b, d - 1, counter) for _ in range(u))) for _ in range(w)))


def build_skewed_sipser(p: SipserParams) -> Formula:
    """The read-once OR/AND alternating formula with 2d+1 layers, leaf i = x_i."""
    counter = itertools.count()
    root = _build(p.u, p.w, p.w_b, p.d, counter)
    return Formula(p.n, root, {"kind": "SkewedSipser", **p.to_json(), "n": p.n})


def build_cnf_sipser(u: int, w_b: int) -> Formula:
    if u < 2 or w_b < 1:
        raise ShapeError("CNFSipser needs u >= 2 and w_b >= 1")
    root = AND(*(OR(*(Var(a * w_b + b) for b in range(w_b))) for a in range(u)))
    return Formula(u * w_b, root, {"kind": "CNFSipser", "u": u, "w_b": w_b, "n": u * w_b})


def build_dagger(p: SipserParams) -> Formula:
    """SkewedSipser with leaf x_i replaced by AND(x_{2i}, x_{2i+1})."""
    base = build_skewed_sipser(p)

    def go(node):
        if isinstance(node, Var):
            return AND(Var(2 * node.index), Var(2 * node.index + 1))
        return Gate(node.op, tuple(go(c) for c in node.children))
    return Formula(2 * p.n, go(base.root), {"kind": "SkewedSipserDagger", **p.to_json(), "n": 2 * p.n})


def dagger_pairing_restriction(p: SipserParams) -> str:
    """Sets the second variable of every pair to 1, which recovers SkewedSipser."""
    return "*1" * p.n


def demorgan_convert(p: SipserParams) -> Circuit:
    """Depth-(d+1) circuit for SkewedSipser(p).

    Each AND^(l) gate for l = d, d-2, ... is rewritten from an AND of u ORs into
    an OR over all choices of one child per OR; the resulting OR merges into
    the OR above it and each chosen AND^(l-1) child merges into the new AND.
    Shared subcircuits are hash-consed.
    """
    f = build_skewed_sipser(p)
    b = CircuitBuilder(f.num_vars)
    memo: dict[int, object] = {}

    def convert_or(node: Gate, level: int):
        # node is an OR^(level) gate
        key = id(node)
        if key in memo:
            return memo[key]
        if level == 1:
            out = b.or_([b.input(v.index) for v in node.children])
        else:
            ands = []
            for and_gate in node.children:  # AND^(level-1)
                choices = [or_gate.children for or_gate in and_gate.children]  # OR^(level-1) children
                for pick in itertools.product(*choices):
                    if level == 2:
                        kids = [b.input(v.index) for v in pick]
                    else:
                        kids = [convert_or(grand, level - 2) for g in pick for grand in g.children]
                    ands.append(b.and_(kids))
            out = b.or_(ands)
        memo[key] = out
        return out

    return b.build(convert_or(f.root, p.d + 1))
