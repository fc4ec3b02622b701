import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from skewsip.core import Formula, truth_table
from skewsip.core.formula import relabel
from skewsip.errors import ShapeError
from skewsip.sipser import (
    AddressSpace,
    SipserParams,
    build_cnf_sipser,
    build_dagger,
    build_skewed_sipser,
    dagger_pairing_restriction,
    demorgan_convert,
)

SMALL = [(2, 1, 1, 1), (2, 2, 1, 1), (2, 2, 2, 1), (3, 1, 2, 1), (2, 1, 1, 2), (2, 2, 1, 2), (3, 2, 1, 1),
         (2, 3, 2, 1), (2, 2, 2, 0), (3, 1, 1, 2)]


def brute_sipser(p: SipserParams, x) -> int:
    """Direct recursive evaluation from the layer description, independent of the builder."""
    def or_level(d, start):
        if d == 0:
            return int(any(x[start:start + p.w_b])), start + p.w_b
        val, pos_ = 0, start
        for _ in range(p.w):
            ands = 1
            for _ in range(p.u):
                v, pos_ = or_level(d - 1, pos_)
                ands &= v
            val |= ands
        return val, pos_
    return or_level(p.d, 0)[0]


@pytest.mark.parametrize("params", SMALL)
def test_variable_count_and_read_once(params):
    p = SipserParams(*params)
    f = build_skewed_sipser(p)
    assert f.num_vars == (p.u * p.w) ** p.d * p.w_b
    assert f.is_read_once()
    assert list(f.leaves()) == list(range(f.num_vars))
    assert f.depth == 2 * p.d + 1


@pytest.mark.parametrize("params", SMALL)
def test_matches_independent_evaluator(params):
    p = SipserParams(*params)
    t = truth_table(build_skewed_sipser(p))
    for r in range(1 << p.n):
        x = [(r >> i) & 1 for i in range(p.n)]
        assert t.bits[r] == brute_sipser(p, x)


def test_layer_shape():
    f = build_skewed_sipser(SipserParams(3, 2, 4, 2))
    assert f.layer_fanins() == [("OR", 2), ("AND", 3), ("OR", 2), ("AND", 3), ("OR", 4)]


def test_examples_from_definition():
    assert build_skewed_sipser(SipserParams(2, 2, 2, 1)).num_vars == 8
    assert truth_table(build_skewed_sipser(SipserParams(2, 2, 2, 0))).to_string() == "0111"
    assert truth_table(build_skewed_sipser(SipserParams(2, 1, 1, 1))).to_string() == "0001"


def test_invalid_params():
    for bad in [(1, 1, 1, 1), (2, 0, 1, 1), (2, 1, 0, 1), (2, 1, 1, -1)]:
        with pytest.raises(ShapeError):
            SipserParams(*bad)


def test_cnf_sipser():
    assert truth_table(build_cnf_sipser(2, 1)).to_string() == "0001"
    t = truth_table(build_cnf_sipser(2, 2))
    expected = [int((r & 3 != 0) and (r >> 2 != 0)) for r in range(16)]
    assert t.bits.astype(int).tolist() == expected


@pytest.mark.parametrize("params", [(2, 2, 2, 1), (3, 2, 1, 1), (2, 1, 2, 2)])
def test_blocks_compute_cnf_sipser(params):
    p = SipserParams(*params)
    space = AddressSpace(p)
    f = build_skewed_sipser(p)
    # walk to every AND^(1) gate, i.e. the parents of bottom ORs
    found = []

    def walk(node, depth):
        if depth == 2 * p.d - 1:
            found.append(node)
            return
        for c in node.children:
            walk(c, depth + 1)
    walk(f.root, 0)
    assert len(found) == space.num_blocks
    cnf = truth_table(build_cnf_sipser(p.u, p.w_b))
    for beta, gate in enumerate(found):
        start = space.block_range(beta).start
        sub = Formula(p.u * p.w_b, relabel(gate, {v: v - start for v in space.block_range(beta)}))
        assert truth_table(sub) == cnf


@given(st.sampled_from(SMALL + [(3, 3, 2, 2), (2, 4, 3, 3)]), st.data())
def test_address_bijection(params, data):
    space = AddressSpace(SipserParams(*params))
    idx = data.draw(st.integers(0, space.n - 1))
    addr = space.index_to_address(idx)
    assert space.address_to_index(addr) == idx
    if space.params.d >= 1:
        assert space.block_of(idx) == space.address_to_index(addr[:-2] + (0, 0)) // space.block_size
        assert space.section_of(idx) == addr[-2]


def test_address_extremes():
    space = AddressSpace(SipserParams(3, 2, 2, 2))
    assert space.index_to_address(0) == (0,) * 5
    assert space.index_to_address(space.n - 1) == tuple(r - 1 for r in space.radices)
    with pytest.raises(ShapeError):
        space.index_to_address(space.n)
    with pytest.raises(ShapeError):
        space.address_to_index((0, 3, 0, 0, 0))


def test_address_round_trip_many():
    space = AddressSpace(SipserParams(3, 4, 2, 3))
    for idx in range(0, space.n, max(1, space.n // 1000)):
        assert space.address_to_index(space.index_to_address(idx)) == idx


def test_block_counts():
    space = AddressSpace(SipserParams(2, 3, 2, 2))
    assert space.num_blocks == 3 * 6
    assert space.block_size == 4
    assert space.num_or2_gates == 6
    assert AddressSpace(SipserParams(2, 3, 2, 0)).num_blocks == 1


@pytest.mark.parametrize("params", [(2, 1, 1, 1), (2, 2, 1, 1), (2, 1, 1, 2), (3, 1, 2, 1), (2, 3, 1, 1)])
def test_dagger(params):
    p = SipserParams(*params)
    g = build_dagger(p)
    assert g.num_vars == 2 * p.n
    assert g.depth == 2 * p.d + 2
    assert g.is_read_once()
    restricted = truth_table(g).restrict(dagger_pairing_restriction(p))
    assert restricted == truth_table(build_skewed_sipser(p))


def test_dagger_small_count():
    assert build_dagger(SipserParams(2, 1, 1, 1)).num_vars == 4


@pytest.mark.parametrize("params", [(2, 2, 2, 1), (2, 1, 1, 2), (2, 2, 1, 2), (3, 2, 1, 1), (2, 1, 2, 2),
                                    (2, 3, 2, 1), (3, 1, 1, 2)])
def test_demorgan_equivalence_and_depth(params):
    p = SipserParams(*params)
    C = demorgan_convert(p)
    assert C.depth == p.d + 1
    assert truth_table(C) == truth_table(build_skewed_sipser(p))


def test_demorgan_size_frozen():
    # 12 inputs, 3 * (2 * 2) = 12 two-input ANDs, 1 top OR; counted by hand from the construction
    assert demorgan_convert(SipserParams(2, 3, 2, 1)).size == 25
    assert demorgan_convert(SipserParams(2, 2, 2, 1)).size == 17


def test_formula_json_round_trip():
    f = build_skewed_sipser(SipserParams(2, 2, 1, 2))
    g = Formula.from_json(f.to_json())
    assert g.root == f.root and g.header["n"] == 16
    assert list(itertools.islice(g.leaves(), 3)) == [0, 1, 2]
