"""Series-parallel graphs of read-once monotone formulas.

AND composes children in series and OR in parallel, with one edge per
variable. Vertices are numbered top-down: ``s = 0``, ``t = 1``, and each
series composition creates its internal vertices in order as it is visited.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .core.formula import Formula, Var
from .errors import DomainError, ShapeError


@dataclass(frozen=True)
class SPGraph:
    vertex_count: int
    s: int
    t: int
    edges: tuple  # (a, b, var), a multiset

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        for a, b, _ in self.edges:
            if not (0 <= a < self.vertex_count and 0 <= b < self.vertex_count):
                raise ShapeError(f"edge ({a}, {b}) outside {self.vertex_count} vertices")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def is_simple(self) -> bool:
        pairs = [(min(a, b), max(a, b)) for a, b, _ in self.edges]
        return len(pairs) == len(set(pairs)) and all(a != b for a, b in pairs)

    def to_json(self) -> dict:
        return {"vertices": self.vertex_count, "s": self.s, "t": self.t,
                "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, obj: dict) -> "SPGraph":
        return cls(int(obj["vertices"]), int(obj["s"]), int(obj["t"]), tuple(tuple(e) for e in obj["edges"]))

    def to_edge_list(self) -> str:
        """DIMACS-like text: 1-based vertices, one ``e a b var`` line per edge."""
        lines = [f"c s {self.s + 1} t {self.t + 1}", f"p edge {self.vertex_count} {self.edge_count}"]
        lines += [f"e {a + 1} {b + 1} {v}" for a, b, v in self.edges]
        return "\n".join(lines) + "\n"


def formula_to_graph(f: Formula) -> SPGraph:
    if not f.is_read_once():
        raise DomainError("formula is not read-once")
    counter = itertools.count(2)
    edges = []

    def go(node, s, t):
        if isinstance(node, Var):
            edges.append((s, t, node.index))
        elif node.op == "AND":
            ends = [s] + [next(counter) for _ in node.children[:-1]] + [t]
            for c, a, b in zip(node.children, ends, ends[1:]):
                go(c, a, b)
        else:
            for c in node.children:
                go(c, s, t)
    go(f.root, 0, 1)
    return SPGraph(next(counter), 0, 1, tuple(edges))


def subgraph(G: SPGraph, z) -> SPGraph:
    """Keep edge e exactly when z[var(e)] = 1."""
    bits = [int(c) for c in z]
    if len(bits) != G.edge_count:
        raise ShapeError(f"assignment has length {len(bits)}, graph has {G.edge_count} edges")
    return SPGraph(G.vertex_count, G.s, G.t, tuple(e for e in G.edges if bits[e[2]]))


def shortest_st_path(G: SPGraph) -> int | None:
    adj = [[] for _ in range(G.vertex_count)]
    for a, b, _ in G.edges:
        adj[a].append(b)
        adj[b].append(a)
    dist = {G.s: 0}
    queue = deque([G.s])
    while queue:
        v = queue.popleft()
        if v == G.t:
            return dist[v]
        for x in adj[v]:
            if x not in dist:
                dist[x] = dist[v] + 1
                queue.append(x)
    return None


def minterm_lengths(node) -> tuple[int, int]:
    """(min, max) number of variables in a minterm; these are the s-t path lengths."""
    if isinstance(node, Var):
        return 1, 1
    kids = [minterm_lengths(c) for c in node.children]
    if node.op == "AND":
        return sum(k[0] for k in kids), sum(k[1] for k in kids)
    return min(k[0] for k in kids), max(k[1] for k in kids)


def check_connectivity_equivalence(f: Formula, z, G: SPGraph | None = None) -> bool:
    """[s-t path of length <= alpha in G(f, z)] iff f(z) = 1, alpha the minterm length.

    When every minterm has the same length, also checks that a connected
    subgraph has distance exactly alpha.
    """
    G = G or formula_to_graph(f)
    lo, hi = minterm_lengths(f.root)
    dist = shortest_st_path(subgraph(G, z))
    ok = (dist is not None and dist <= hi) == bool(f.evaluate(z))
    if lo == hi and dist is not None:
        ok = ok and dist == hi
    return ok


# --- parameters of the reduction ----------------------------------------------------

def _iroot_floor(x: int, d: int) -> int:
    """Largest y with y^d <= x."""
    if x < 1:
        return 0
    lo, hi = 0, 1
    while hi ** d <= x:
        hi *= 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if mid ** d <= x:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class ReductionParams:
    n: int
    k: int
    d: int
    u0: int
    k0: int
    n_prime: int
    w0: int
    n0_pow100: int  # (u0 w0)^(100 d) * w0^33, i.e. n0^100
    bottom_fanin: int  # floor(w0^(33/100))
    degenerate: bool

    @property
    def n0_display(self) -> float:
        return float(self.u0 * self.w0) ** self.d * float(self.w0) ** 0.33

    def dagger_params(self) -> dict:
        n_vars = 2 * (self.u0 * self.w0) ** self.d * self.bottom_fanin
        return {"u": self.u0, "w": self.w0, "w_b": self.bottom_fanin, "d": self.d, "dagger_vars": n_vars}

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "d": self.d, "u0": self.u0, "k0": self.k0,
                "n_prime": self.n_prime, "w0": self.w0, "n0_pow100": str(self.n0_pow100),
                "n0_display": float(f"{self.n0_display:.12g}"), "bottom_fanin": self.bottom_fanin,
                "degenerate": self.degenerate, "dagger": self.dagger_params()}


def reduction_params(n: int, k: int, d: int) -> ReductionParams:
    """Exact integer derivation of u0, k0, n', w0 and n0 for given n, k, d.

    u0 is the largest u with u^d <= k/2, and w0 the largest w with
    (u0 w)^d w^(33/100) <= n', compared after raising both sides to the 100th power.
    """
    if n < 1 or k < 1 or d < 1:
        raise DomainError("n, k, d must be positive")
    u0 = _iroot_floor(k // 2, d)  # u^d <= k/2 iff u^d <= floor(k/2)
    k0 = u0 ** d
    n_prime = n // 2
    w0 = 0
    if u0 >= 1:
        target = n_prime ** 100

        def fits(w):
            return (u0 * w) ** (100 * d) * w ** 33 <= target
        lo, hi = 0, 1
        while fits(hi):
            hi *= 2
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if fits(mid):
                lo = mid
            else:
                hi = mid
        w0 = lo
    n0_pow100 = (u0 * w0) ** (100 * d) * w0 ** 33
    bottom = _iroot_floor(w0 ** 33, 100)
    return ReductionParams(n, k, d, u0, k0, n_prime, w0, n0_pow100, bottom, u0 < 2 or d < 2)
