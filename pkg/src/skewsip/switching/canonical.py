"""The canonical decision tree for a projected DNF.

State is a flat restriction over the ambient address space. Blocks are
always either entirely free or entirely fixed: support restrictions have
that shape and the recursion only ever fixes whole blocks.
"""
from __future__ import annotations

from typing import NamedTuple

from ..core.normal_forms import Dnf, check_restriction, restrict_term
from ..core.trees import DecisionTree, Leaf, Query
from ..errors import CanonicalDTError, ShapeError
from ..projections import ProjRestriction, enumerate_support
from ..sipser import AddressSpace


class Step(NamedTuple):
    term: int
    live: tuple  # live literals of the chosen term
    eta: tuple  # blocks holding those literals, ascending


def _tautology(terms: list) -> bool:
    """Shannon expansion over (pos_mask, neg_mask) terms."""
    if not terms:
        return False
    for p, n in terms:
        if p == 0 and n == 0:
            return True
    p, n = terms[0]
    bit = (p | n) & -(p | n)
    zero, one = [], []
    for p, n in terms:
        if p & bit:
            one.append((p & ~bit, n))
        elif n & bit:
            zero.append((p, n & ~bit))
        else:
            zero.append((p, n))
            one.append((p, n))
    return _tautology(zero) and _tautology(one)


def supp_satisfiable(live, space: AddressSpace):
    """A per-block support witness satisfying every live literal, or None.

    Returns ``{block: BlockRestriction}`` covering exactly the blocks of
    ``live``. An all-star block cannot satisfy a literal, so each one gets a
    pattern.
    """
    by_block: dict[int, list] = {}
    for lit in live:
        by_block.setdefault(space.block_of(lit.var), []).append(lit)
    witness = {}
    for beta, lits in by_block.items():
        for b in enumerate_support(space.u)[1:]:
            if all(_pattern_value(b, space.section_of(l.var)) == int(l.positive) for l in lits):
                witness[beta] = b
                break
        else:
            return None
    return witness


def _pattern_value(b, section: int) -> int:
    return b.bit if section == b.section else 1 - b.bit


class CanonicalEngine:
    """CanonicalDT for one DNF over one address space, memoised per restriction."""

    def __init__(self, F: Dnf, space: AddressSpace):
        if F.num_vars != space.n:
            raise ShapeError(f"DNF over {F.num_vars} variables, space has {space.n}")
        self.F = F
        self.space = space
        self._steps: dict[str, Step | int] = {}
        self._depth: dict[str, int] = {}
        self._trees: dict[str, object] = {}

    def projected_constant(self, rho: str) -> int | None:
        """0 or 1 if proj_rho(F) is constant, else None."""
        terms = []
        for t in self.F.terms:
            live = restrict_term(t, rho)
            if live is None:
                continue
            p = n = 0
            dead = False
            for lit in live:
                bit = 1 << self.space.block_of(lit.var)
                if lit.positive:
                    if n & bit:
                        dead = True
                        break
                    p |= bit
                else:
                    if p & bit:
                        dead = True
                        break
                    n |= bit
            if dead:
                continue
            if p == 0 and n == 0:
                return 1
            terms.append((p, n))
        if not terms:
            return 0
        return 1 if _tautology(terms) else None

    def step(self, rho: str) -> Step | int:
        """The constant value (step 0) or the chosen term and its query set (steps 1, 2)."""
        hit = self._steps.get(rho)
        if hit is not None:
            return hit
        c = self.projected_constant(rho)
        if c is not None:
            out = c
        else:
            out = None
            for i, t in enumerate(self.F.terms):
                live = restrict_term(t, rho)
                if not live:
                    continue
                if supp_satisfiable(live, self.space) is not None:
                    eta = tuple(sorted({self.space.block_of(l.var) for l in live}))
                    out = Step(i, live, eta)
                    break
            if out is None:
                raise CanonicalDTError(
                    "no term is non-constant and satisfiable by a support element; "
                    "this happens only when the width bound r <= u - 1 is violated")
        self._steps[rho] = out
        return out

    def fix_blocks(self, rho: str, blocks, bits) -> str:
        """rho(eta -> pi): every variable of block beta set to the bit pi_beta."""
        chars = list(rho)
        for beta, v in zip(blocks, bits):
            r = self.space.block_range(beta)
            chars[r.start:r.stop] = str(v) * len(r)
        return "".join(chars)

    def depth(self, rho) -> int:
        rho = _flat(rho)
        hit = self._depth.get(rho)
        if hit is not None:
            return hit
        st = self.step(rho)
        if isinstance(st, int):
            out = 0
        else:
            out = len(st.eta) + max(self.depth(self.fix_blocks(rho, st.eta, pi))
                                    for pi in _assignments(len(st.eta)))
        self._depth[rho] = out
        return out

    def node(self, rho: str):
        hit = self._trees.get(rho)
        if hit is not None:
            return hit
        st = self.step(rho)
        if isinstance(st, int):
            out = Leaf(st)
        else:
            def grow(j, pi):
                if j == len(st.eta):
                    return self.node(self.fix_blocks(rho, st.eta, pi))
                return Query(st.eta[j], grow(j + 1, pi + (0,)), grow(j + 1, pi + (1,)), st.term)
            out = grow(0, ())
        self._trees[rho] = out
        return out

    def tree(self, rho) -> DecisionTree:
        rho = check_restriction(_flat(rho), self.space.n)
        return DecisionTree(self.space.num_blocks, self.node(rho))


def _assignments(k: int):
    for m in range(1 << k):
        yield tuple((m >> (k - 1 - j)) & 1 for j in range(k))


def _flat(rho) -> str:
    return rho.expand() if isinstance(rho, ProjRestriction) else rho


def canonical_dt(F: Dnf, rho, space: AddressSpace | None = None) -> DecisionTree:
    """CanonicalDT(F, rho) as a decision tree over the block variables y_beta.

    Each query node records the index of the term whose tree it belongs to.
    Raises CanonicalDTError if step 1 finds no usable term.
    """
    if space is None:
        space = rho.space
    return CanonicalEngine(F, space).tree(rho)


def canonical_depth(F: Dnf, rho, space: AddressSpace | None = None) -> int:
    if space is None:
        space = rho.space
    return CanonicalEngine(F, space).depth(rho)


