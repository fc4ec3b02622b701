"""Monotone circuits deciding whether s and t are within distance k."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .core.circuits import Circuit, CircuitBuilder, circuit_metrics
from .errors import DomainError, ShapeError

__all__ = ["AdjacencyInput", "bfs_oracle", "build_power_circuit", "build_squaring_circuit",
           "circuit_metrics", "round_budgets"]


@dataclass(frozen=True)
class AdjacencyInput:
    """Variables x_{i,j}, i < j, numbered in combinations order."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ShapeError("need at least two nodes")

    @property
    def num_vars(self) -> int:
        return self.n * (self.n - 1) // 2

    @cached_property
    def _index(self) -> dict:
        return {p: i for i, p in enumerate(itertools.combinations(range(self.n), 2))}

    def var(self, i: int, j: int) -> int:
        if i == j:
            raise ShapeError("x_{i,i} is the constant 1, not a variable")
        return self._index[(min(i, j), max(i, j))]

    def pairs(self):
        return itertools.combinations(range(self.n), 2)

    def bits_from_mask(self, mask: int) -> list[int]:
        return [(mask >> i) & 1 for i in range(self.num_vars)]


def bfs_oracle(bits, n: int, s: int, t: int, k: int) -> int:
    """1 iff the graph with edge bits ``bits`` has an s-t path of length at most k."""
    adj = AdjacencyInput(n)
    bits = [int(b) for b in bits]
    if len(bits) != adj.num_vars:
        raise ShapeError(f"expected {adj.num_vars} edge bits")
    nbrs = [[] for _ in range(n)]
    for (i, j), b in zip(adj.pairs(), bits):
        if b:
            nbrs[i].append(j)
            nbrs[j].append(i)
    dist = {s: 0}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        if v == t:
            return int(dist[v] <= k)
        for x in nbrs[v]:
            if x not in dist:
                dist[x] = dist[v] + 1
                queue.append(x)
    return 0


def _endpoints(n: int, s, t):
    s = 0 if s is None else s
    t = n - 1 if t is None else t
    if s == t or not (0 <= s < n and 0 <= t < n):
        raise ShapeError("s and t must be distinct nodes")
    return s, t


def build_squaring_circuit(n: int, k: int, s: int | None = None, t: int | None = None) -> Circuit:
    """Repeated squaring with exact length thresholds.

    reach(i, j, L) is x_ij for L = 1 and otherwise
    reach(i, j, ceil(L/2)) OR AND(reach(i, m, ceil(L/2)), reach(m, j, floor(L/2))) over m.
    """
    if k < 1:
        raise DomainError("k must be at least 1")
    s, t = _endpoints(n, s, t)
    adj = AdjacencyInput(n)
    b = CircuitBuilder(adj.num_vars)
    memo: dict = {}

    def reach(i, j, L):
        key = (min(i, j), max(i, j), L)
        if key in memo:
            return memo[key]
        if L == 1:
            out = b.input(adj.var(i, j))
        else:
            hi, lo = (L + 1) // 2, L // 2
            kids = [reach(i, j, hi)]
            kids += [b.and_([reach(i, m, hi), reach(m, j, lo)]) for m in range(n) if m not in (i, j)]
            out = b.or_(kids)
        memo[key] = out
        return out
    return b.build(reach(s, t, k))


def round_budgets(k: int, d: int) -> list[int]:
    """Per-round step budgets with product >= k, trimmed from the last round."""
    if k < 1 or d < 1:
        raise DomainError("k and d must be at least 1")
    t = 1
    while t ** d < k:
        t += 1
    budgets = [t] * d
    for i in reversed(range(d)):
        while budgets[i] > 1:
            budgets[i] -= 1
            prod = 1
            for x in budgets:
                prod *= x
            if prod < k:
                budgets[i] += 1
                break
    return budgets


def _allocations(parts: int, cap: int, total: int):
    """Maximal tuples of ``parts`` lengths in [1, cap] with sum <= total."""
    for alloc in itertools.product(range(1, cap + 1), repeat=parts):
        sm = sum(alloc)
        if sm > total:
            continue
        if all(a == cap or sm == total for a in alloc):
            yield alloc


def build_power_circuit(n: int, k: int, d: int, s: int | None = None, t: int | None = None) -> Circuit:
    """d rounds of depth-2 OR-of-ANDs, round i chaining at most t_i paths from round i - 1.

    R_i[u, v, l] holds for l <= t_1 ... t_i; the output is R_d[s, t, k].
    """
    s, t = _endpoints(n, s, t)
    budgets = round_budgets(k, d)
    caps = [1]
    for x in budgets:
        caps.append(caps[-1] * x)
    adj = AdjacencyInput(n)
    b = CircuitBuilder(adj.num_vars)
    memo: dict = {}

    def R(i, u, v, length):
        key = (i, min(u, v), max(u, v), length)
        if key in memo:
            return memo[key]
        if i == 0:
            out = b.input(adj.var(u, v))
        else:
            terms = []
            cap = caps[i - 1]
            others = [m for m in range(n) if m not in (u, v)]
            for j in range(1, budgets[i - 1] + 1):
                if j > length:
                    break
                for mids in itertools.permutations(others, j - 1):
                    seq = (u,) + mids + (v,)
                    for alloc in _allocations(j, cap, length):
                        terms.append(b.and_([R(i - 1, a, c, ell) for a, c, ell in zip(seq, seq[1:], alloc)]))
            out = b.or_(terms)
        memo[key] = out
        return out
    return b.build(R(d, s, t, k))
