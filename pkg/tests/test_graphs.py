import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewsip.core import AND, OR, Formula, Var
from skewsip.errors import DomainError, ShapeError
from skewsip.graphs import (
    SPGraph,
    check_connectivity_equivalence,
    formula_to_graph,
    minterm_lengths,
    reduction_params,
    shortest_st_path,
    subgraph,
)
from skewsip.rng import generator
from skewsip.sipser import SipserParams, build_dagger, build_skewed_sipser


def layered(fanins):
    """Read-once alternating formula with the given (op, fan-in) layers, top first."""
    counter = itertools.count()

    def go(i):
        if i == len(fanins):
            return Var(next(counter))
        op, m = fanins[i]
        kids = [go(i + 1) for _ in range(m)]
        return AND(*kids) if op == "AND" else OR(*kids)
    root = go(0)
    return Formula(next(counter), root)


def random_read_once(rng, max_vars=12):
    counter = itertools.count()

    def go(depth, op):
        if depth == 0 or rng.random() < 0.3:
            return Var(next(counter))
        kids = [go(depth - 1, "OR" if op == "AND" else "AND") for _ in range(int(rng.integers(2, 4)))]
        return AND(*kids) if op == "AND" else OR(*kids)
    while True:
        counter = itertools.count()
        root = go(3, "OR" if rng.random() < 0.5 else "AND")
        n = next(counter)
        if 1 <= n <= max_vars:
            return Formula(n, root)


def shortest_minterm(f):
    """Fewest ones in a satisfying assignment: for a monotone f, the shortest minterm."""
    best = None
    for r in range(1 << f.num_vars):
        x = "".join(str((r >> i) & 1) for i in range(f.num_vars))
        if f.evaluate(x):
            c = x.count("1")
            best = c if best is None else min(best, c)
    return best


def test_single_variable():
    G = formula_to_graph(Formula(1, Var(0)))
    assert (G.vertex_count, G.edge_count) == (2, 1)
    assert shortest_st_path(G) == 1


def test_series_and_parallel():
    G = formula_to_graph(Formula(2, AND(Var(0), Var(1))))
    assert G.vertex_count == 3 and shortest_st_path(G) == 2
    H = formula_to_graph(Formula(2, OR(Var(0), Var(1))))
    assert H.vertex_count == 2 and not H.is_simple() and shortest_st_path(H) == 1


def test_figure_one_shape():
    f = layered([("OR", 4), ("AND", 3), ("OR", 2), ("AND", 2)])
    assert f.num_vars == 48
    G = formula_to_graph(f)
    assert G.edge_count == 48
    assert shortest_st_path(G) == 6


@pytest.mark.parametrize("u,d", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_sipser_distance(u, d):
    G = formula_to_graph(build_skewed_sipser(SipserParams(u, 2, 2, d)))
    assert shortest_st_path(G) == u ** d


def test_sipser_examples():
    assert shortest_st_path(formula_to_graph(build_skewed_sipser(SipserParams(2, 2, 2, 1)))) == 2
    assert shortest_st_path(formula_to_graph(build_skewed_sipser(SipserParams(3, 1, 1, 2)))) == 9


def test_rejects_non_read_once():
    with pytest.raises(DomainError):
        formula_to_graph(Formula(1, AND(Var(0), Var(0))))


def test_subgraph_examples():
    f = build_skewed_sipser(SipserParams(2, 2, 2, 1))
    G = formula_to_graph(f)
    assert subgraph(G, "1" * 8) == G
    empty = subgraph(G, "0" * 8)
    assert empty.edge_count == 0 and shortest_st_path(empty) is None
    assert subgraph(G, "10110010").edge_count == 4
    with pytest.raises(ShapeError):
        subgraph(G, "1" * 7)


def test_empty_two_vertex_graph():
    assert shortest_st_path(SPGraph(2, 0, 1, ())) is None


@pytest.mark.parametrize("params", [(2, 1, 1, 1), (2, 2, 1, 1), (2, 1, 1, 2), (3, 1, 2, 1)])
def test_dagger_graphs_are_simple(params):
    p = SipserParams(*params)
    G = formula_to_graph(build_dagger(p))
    assert G.is_simple()
    assert shortest_st_path(G) == 2 * p.u ** p.d


def test_plain_sipser_graphs_have_parallel_edges():
    assert not formula_to_graph(build_skewed_sipser(SipserParams(2, 1, 2, 1))).is_simple()


def test_alternating_16_exhaustive():
    f = layered([("OR", 2), ("AND", 2), ("OR", 2), ("AND", 2)])
    G = formula_to_graph(f)
    assert (G.vertex_count, G.edge_count, shortest_st_path(G)) == (12, 16, 4)
    for r in range(1 << 16):
        z = format(r, "016b")
        assert check_connectivity_equivalence(f, z, G)


def test_sipser_equivalence_exhaustive():
    f = build_skewed_sipser(SipserParams(2, 2, 2, 1))
    G = formula_to_graph(f)
    for r in range(1 << 8):
        assert check_connectivity_equivalence(f, format(r, "08b"), G)


def test_equivalence_random_assignments_larger():
    f = build_skewed_sipser(SipserParams(2, 2, 2, 2))
    G = formula_to_graph(f)
    rng = generator(6)
    for row in rng.integers(0, 2, size=(10 ** 4, f.num_vars)):
        assert check_connectivity_equivalence(f, "".join(map(str, row)), G)


def test_random_formulas_distance_is_shortest_minterm():
    rng = generator(12)
    for _ in range(50):
        f = random_read_once(rng)
        G = formula_to_graph(f)
        assert G.edge_count == f.num_vars
        assert shortest_st_path(G) == minterm_lengths(f.root)[0] == shortest_minterm(f)


@settings(max_examples=30)
@given(st.integers(0, 2 ** 32))
def test_equivalence_property(seed):
    rng = generator(seed)
    f = random_read_once(rng, max_vars=10)
    G = formula_to_graph(f)
    for r in rng.integers(0, 1 << f.num_vars, size=20):
        z = "".join(str((int(r) >> i) & 1) for i in range(f.num_vars))
        assert check_connectivity_equivalence(f, z, G)


def test_graph_json_and_edge_list():
    G = formula_to_graph(Formula(2, AND(Var(0), Var(1))))
    assert G.to_json() == {"vertices": 3, "s": 0, "t": 1, "edges": [[0, 2, 0], [2, 1, 1]]}
    assert SPGraph.from_json(G.to_json()) == G
    assert G.to_edge_list().splitlines()[1] == "p edge 3 2"


# --- parameters ------------------------------------------------------------------

def test_reduction_params_example():
    rp = reduction_params(10 ** 6, 16, 2)
    assert (rp.u0, rp.k0, rp.n_prime) == (2, 4, 500000)
    assert rp.w0 == 153
    assert not rp.degenerate
    assert rp.bottom_fanin == 5


def test_w0_against_logarithms():
    # independent float check away from the boundary, exact check at it
    rp = reduction_params(10 ** 6, 16, 2)
    lhs = lambda w: 2 * math.log(2 * w) + 0.33 * math.log(w)
    assert lhs(153) < math.log(500000) < lhs(154)
    assert (2 * 153) ** 200 * 153 ** 33 <= 500000 ** 100 < (2 * 154) ** 200 * 154 ** 33
    assert rp.n0_display == pytest.approx(306 ** 2 * 153 ** 0.33)


def test_degenerate_flags():
    assert reduction_params(10 ** 6, 4, 2).degenerate  # k/2 = 2 < 2^2
    assert reduction_params(10 ** 6, 16, 1).degenerate
    assert not reduction_params(10 ** 6, 8, 2).degenerate


def test_w0_monotone_in_k():
    ws = [reduction_params(10 ** 6, k, 2).w0 for k in range(8, 400)]
    assert all(a >= b for a, b in zip(ws, ws[1:]))
    ws3 = [reduction_params(10 ** 9, k, 3).w0 for k in range(16, 300)]
    assert all(a >= b for a, b in zip(ws3, ws3[1:]))
