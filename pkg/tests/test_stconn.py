import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from skewsip.core import truth_table
from skewsip.errors import ShapeError
from skewsip.stconn import (
    AdjacencyInput,
    bfs_oracle,
    build_power_circuit,
    build_squaring_circuit,
    circuit_metrics,
    round_budgets,
)


def floyd_distance(bits, n, s, t):
    """All-pairs shortest paths by relaxation, independent of the BFS oracle."""
    inf = 10 ** 9
    D = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    for (i, j), b in zip(AdjacencyInput(n).pairs(), bits):
        if b:
            D[i][j] = D[j][i] = 1
    for m in range(n):
        for i in range(n):
            for j in range(n):
                D[i][j] = min(D[i][j], D[i][m] + D[m][j])
    return D[s][t]


N5 = AdjacencyInput(5)


@pytest.fixture(scope="module")
def oracle5():
    dists = np.array([floyd_distance(N5.bits_from_mask(m), 5, 0, 4) for m in range(1 << 10)])
    return {k: dists <= k for k in range(1, 7)}


def test_adjacency_input():
    a = AdjacencyInput(4)
    assert a.num_vars == 6
    assert a.var(0, 1) == 0 and a.var(3, 2) == a.var(2, 3) == 5
    with pytest.raises(ShapeError):
        a.var(1, 1)


def test_bfs_examples():
    n = 5
    assert bfs_oracle([0] * 10, n, 0, 4, 4) == 0
    assert all(bfs_oracle([1] * 10, n, 0, 4, k) == 1 for k in range(1, 5))
    path = [0] * 10
    for i in range(4):
        path[N5.var(i, i + 1)] = 1
    assert [bfs_oracle(path, n, 0, 4, k) for k in range(1, 7)] == [0, 0, 0, 1, 1, 1]


def test_bfs_matches_floyd(oracle5):
    for m in range(0, 1 << 10, 7):
        bits = N5.bits_from_mask(m)
        for k in (1, 2, 3):
            assert bfs_oracle(bits, 5, 0, 4, k) == oracle5[k][m]


def test_squaring_k1_is_edge_variable():
    C = build_squaring_circuit(5, 1)
    assert C.depth == 0 and C.size == 1
    assert truth_table(C).bits.tolist() == [bool((m >> N5.var(0, 4)) & 1) for m in range(1 << 10)]


def test_squaring_k2_n3():
    C = build_squaring_circuit(3, 2)
    # x_{0,2} or (x_{0,1} and x_{1,2}); variables (0,1)=0, (0,2)=1, (1,2)=2
    expected = [int(((r >> 1) & 1) or ((r & 1) and (r >> 2) & 1)) for r in range(8)]
    assert truth_table(C).bits.astype(int).tolist() == expected


@pytest.mark.parametrize("k", [2, 3, 4, 8])
def test_squaring_depth(k):
    assert build_squaring_circuit(5, k).depth == 2 * math.ceil(math.log2(k))


def test_squaring_exhaustive(oracle5):
    for k in range(1, 7):
        assert (truth_table(build_squaring_circuit(5, k)).bits == oracle5[k]).all()


@pytest.mark.parametrize("d", [1, 2, 3])
def test_power_exhaustive_and_depth(oracle5, d):
    for k in range(1, 7):
        C = build_power_circuit(5, k, d)
        assert C.depth == 2 * d
        assert (truth_table(C).bits == oracle5[k]).all()


def test_power_depth_k8():
    for d in (1, 2, 3):
        assert build_power_circuit(5, 8, d).depth == 2 * d


def test_power_n4_all_graphs():
    C = build_power_circuit(4, 4, 2)
    t = truth_table(C)
    for m in range(64):
        bits = AdjacencyInput(4).bits_from_mask(m)
        assert t.bits[m] == bfs_oracle(bits, 4, 0, 3, 4)


def test_power_d1_is_path_dnf():
    C = build_power_circuit(4, 3, 1)
    assert C.depth == 2
    # s-t paths of length <= 3 in K4: 1 direct, 2 of length 2, 2 of length 3
    assert circuit_metrics(C).max_fanin == 5


def test_frozen_sizes():
    assert build_power_circuit(4, 4, 2).size == 30
    assert [build_squaring_circuit(5, k).size for k in range(1, 7)] == [1, 11, 30, 42, 58, 82]


def test_round_budgets():
    for k in range(1, 30):
        for d in (1, 2, 3):
            b = round_budgets(k, d)
            assert len(b) == d and math.prod(b) >= k
            t = 1
            while t ** d < k:
                t += 1
            assert all(x <= t for x in b)


def test_other_endpoints():
    C = build_squaring_circuit(5, 2, s=1, t=3)
    t = truth_table(C)
    for m in range(0, 1 << 10, 3):
        assert t.bits[m] == bfs_oracle(N5.bits_from_mask(m), 5, 1, 3, 2)


@given(st.integers(0, (1 << 10) - 1), st.integers(0, 9), st.integers(1, 6), st.integers(1, 3))
def test_monotone(mask, edge, k, d):
    lo, hi = mask & ~(1 << edge), mask | (1 << edge)
    for C in (build_squaring_circuit(5, k), build_power_circuit(5, k, d)):
        a = C.evaluate(N5.bits_from_mask(lo))
        b = C.evaluate(N5.bits_from_mask(hi))
        assert a <= b
