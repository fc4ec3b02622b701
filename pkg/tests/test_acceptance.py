"""The acceptance criteria, each at its stated scale and tolerance.

Every test records one PASS/FAIL line; conftest prints them after the run.
"""
import functools
import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from skewsip.cli import main
from skewsip.core import AND, OR, Formula, Var, is_subfunction, truth_table
from skewsip.graphs import check_connectivity_equivalence, formula_to_graph, shortest_st_path
from skewsip.projections import (
    CnfSipserOutcome,
    ProjRestriction,
    classify_cnf_sipser_restriction,
    enumerate_product_support,
    enumerate_support,
    preservation_closed_form,
    preservation_probability,
    project_semantic,
    restriction_weight,
    sample_codes,
    survival_certificate,
)
from skewsip.rng import generator
from skewsip.sipser import AddressSpace, SipserParams, build_cnf_sipser, build_dagger, build_skewed_sipser
from skewsip.sipser import demorgan_convert
from skewsip.stconn import AdjacencyInput, bfs_oracle, build_power_circuit, build_squaring_circuit
from skewsip.switching import (
    CanonicalEngine,
    PslParams,
    SupportProfile,
    bad_set,
    expected_ratio,
    project_and_trim,
    random_instance_dnfs,
)

RESULTS = {}

PSL_CONFIGS = [((2, 2, 2, 1), 1), ((3, 2, 3, 1), 1), ((3, 2, 3, 1), 2)]
QS = [Fraction(1, 20), Fraction(1, 10), Fraction(1, 5)]
SS = [1, 2, 3]


def criterion(num, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
            except BaseException:
                RESULTS[num] = f"criterion {num:2d}: FAIL  {title}"
                raise
            extra = f" ({detail})" if detail else ""
            RESULTS[num] = f"criterion {num:2d}: PASS  {title}{extra} [{time.perf_counter() - t0:.1f}s]"
        return run
    return wrap


@pytest.fixture(scope="module")
def psl_reports():
    """Every (config, r, DNF, q, s) bad-set report of the switching-lemma sweep."""
    reports = []
    for params, r in PSL_CONFIGS:
        space = AddressSpace(SipserParams(*params))
        for F in random_instance_dnfs(space, r, 500, seed=1000 * space.u + r):
            prof = SupportProfile(F, space)
            for q in QS:
                for s in SS:
                    reports.append(bad_set(F, PslParams(space, r, s, q), profile=prof))
    return reports


@criterion(1, "exact bad-set probability within the switching-lemma bound")
def test_criterion_1_bound(psl_reports):
    assert len(psl_reports) == 3 * 500 * 9
    assert all(rep.params.applicable for rep in psl_reports)
    sizes = [len(list(enumerate_product_support(AddressSpace(SipserParams(*c))))) for c, _ in PSL_CONFIGS]
    assert sizes == [25, 49, 49]
    failures = [rep for rep in psl_reports if not rep.bound_holds]
    assert not failures
    worst = max(rep.exact_prob / rep.bound for rep in psl_reports)
    return f"{len(psl_reports)} reports, worst exact/bound = {float(worst):.4f}"


@criterion(2, "theta injective and decode(encode) the identity on every bad set")
def test_criterion_2_injection(psl_reports):
    checked = [rep for rep in psl_reports if rep.bad]
    assert all(rep.codec_checked for rep in checked)
    assert all(rep.injective and rep.round_trip for rep in psl_reports)
    assert all(rep.max_group_weight <= 1 for rep in checked)
    return f"{sum(len(rep.bad) for rep in psl_reports)} bad restrictions"


@criterion(3, "weight ratio exactly ((1-q)/(2qu))^s on every bad restriction")
def test_criterion_3_weight_ratio(psl_reports):
    assert all(rep.ratio_exact for rep in psl_reports)
    assert not any(f[0] == "ratio" for rep in psl_reports for f in rep.failures)
    assert expected_ratio(Fraction(1, 10), 2, 2) == Fraction(81, 16)


@criterion(4, "canonical tree computes the projected function")
def test_criterion_4_canonical_dt():
    compared = 0
    for params, r in PSL_CONFIGS:
        space = AddressSpace(SipserParams(*params))
        support = list(enumerate_product_support(space))
        for F in random_instance_dnfs(space, r, 500, seed=1000 * space.u + r)[:200]:
            t = truth_table(F)
            eng = CanonicalEngine(F, space)
            for rho in support:
                assert truth_table(eng.tree(rho.expand())) == project_semantic(t, rho)
                compared += 1
    return f"{compared} (DNF, restriction) pairs"


@criterion(5, "CNFSipser identity/zero dichotomy and section-kill")
def test_criterion_5_dichotomy():
    q = Fraction(1, 10)
    for u in (2, 3):
        for w_b in (1, 2, 3):
            t = truth_table(build_cnf_sipser(u, w_b))
            space = AddressSpace(SipserParams(u, 1, w_b, 1))
            ident = zero = Fraction(0)
            for b in enumerate_support(u):
                rho = ProjRestriction(space, (b,))
                proj = project_semantic(t, rho)
                wt = restriction_weight(rho, q)
                if classify_cnf_sipser_restriction(b, u, w_b) is CnfSipserOutcome.IDENTITY:
                    assert proj.to_string() == "01"
                    ident += wt
                else:
                    assert proj.is_constant() == 0
                    zero += wt
            assert ident == q and zero == 1 - q
            n = u * w_b
            for a in range(u):
                others = [i for i in range(n) if not a * w_b <= i < (a + 1) * w_b]
                for rest in itertools.product("01*", repeat=len(others)):
                    rho = ["0"] * n
                    for i, c in zip(others, rest):
                        rho[i] = c
                    assert t.restrict("".join(rho)).is_constant() == 0


@criterion(6, "survival certificate implies subfunction; preservation exact and MC")
def test_criterion_6_preservation():
    p = SipserParams(2, 3, 1, 1)
    space = AddressSpace(p)
    tt = truth_table(build_skewed_sipser(p))
    target = truth_table(build_skewed_sipser(p.lower()))
    certified = 0
    for codes in sample_codes(space.num_blocks, 2, Fraction(1, 2), generator(11), 500):
        rho = ProjRestriction.from_codes(space, codes)
        if survival_certificate(rho):
            certified += 1
            assert is_subfunction(target, project_semantic(tt, rho))
    for q in (Fraction(1, 10), Fraction(1, 2)):
        exact = preservation_probability(p, q)
        assert exact == preservation_closed_form(p, q)
        # the closed form is (1 - (1 - q)^w) for one level
        assert exact == 1 - (1 - q) ** 3
        est = preservation_probability(p, q, mode="monte_carlo", trials=10 ** 5, seed=3)
        assert est.within(exact, 3)
    return f"{certified}/500 certified, 0 counterexamples"


def _alternating(fanins):
    counter = itertools.count()

    def go(i):
        if i == len(fanins):
            return Var(next(counter))
        op, m = fanins[i]
        return (AND if op == "AND" else OR)(*(go(i + 1) for _ in range(m)))
    root = go(0)
    return Formula(next(counter), root)


@criterion(7, "graph reduction: connectivity iff formula, distances, simple dagger graphs")
def test_criterion_7_reduction():
    t0 = time.perf_counter()
    f = _alternating([("OR", 2), ("AND", 2), ("OR", 2), ("AND", 2)])
    G = formula_to_graph(f)
    assert all(check_connectivity_equivalence(f, format(m, "016b"), G) for m in range(1 << 16))
    f2 = build_skewed_sipser(SipserParams(2, 2, 2, 1))
    G2 = formula_to_graph(f2)
    assert all(check_connectivity_equivalence(f2, format(m, "08b"), G2) for m in range(1 << 8))
    for u, d in [(2, 1), (2, 2), (3, 1), (3, 2)]:
        for w, w_b in [(1, 1), (2, 2), (2, 1)]:
            p = SipserParams(u, w, w_b, d)
            assert shortest_st_path(formula_to_graph(build_skewed_sipser(p))) == u ** d
            assert formula_to_graph(build_dagger(p)).is_simple()
    assert time.perf_counter() - t0 < 60


@criterion(8, "st-connectivity circuits agree with BFS on all 5-node graphs")
def test_criterion_8_stconn():
    t0 = time.perf_counter()
    adj = AdjacencyInput(5)
    masks = range(1 << adj.num_vars)
    for k in range(1, 7):
        oracle = np.array([bfs_oracle(adj.bits_from_mask(m), 5, 0, 4, k) for m in masks], dtype=bool)
        C = build_squaring_circuit(5, k)
        assert C.depth == 2 * math.ceil(math.log2(k))
        assert (truth_table(C).bits == oracle).all()
        for d in (1, 2, 3):
            C = build_power_circuit(5, k, d)
            assert C.depth == 2 * d
            assert (truth_table(C).bits == oracle).all()
    assert time.perf_counter() - t0 < 120


@criterion(9, "de Morgan conversion equivalent with depth d+1")
def test_criterion_9_demorgan():
    for params in [(2, 2, 2, 1), (2, 1, 1, 2), (2, 2, 1, 2)]:
        p = SipserParams(*params)
        C = demorgan_convert(p)
        assert C.depth == p.d + 1
        assert truth_table(C) == truth_table(build_skewed_sipser(p))


@criterion(10, "project-and-trim completes with an OR of w_b variables")
def test_criterion_10_project_and_trim():
    p = SipserParams(2, 3, 2, 1)
    rep = project_and_trim(p, Fraction(1, 10), seed=7)
    assert rep.completed and rep.all_equivalent
    assert all(st.matches_target and st.matches_semantic for st in rep.steps)
    assert truth_table(rep.final_target) == truth_table(build_skewed_sipser(SipserParams(2, 3, 2, 0)))
    assert rep.final_target.num_vars == 2
    assert rep.to_json()["S"] == "1/64"
    return f"S = {rep.S}"


DETERMINISM_RUNS = [
    ["psl-verify", "--u", "3", "--w", "2", "--wb", "3", "--d", "1", "--r", "2", "--s", "2", "--q", "1/10",
     "--random", "4", "--trials", "3000", "--seed", "42"],
    ["preserve-verify", "--u", "2", "--w", "3", "--wb", "1", "--d", "1", "--q", "1/2", "--trials", "20000",
     "--seed", "5", "--oracle-samples", "100"],
    ["project-and-trim", "--u", "2", "--w", "3", "--wb", "2", "--d", "1", "--q", "1/10", "--seed", "7"],
    ["build-stconn", "--n", "5", "--k", "5", "--d", "2", "--construction", "power", "--verify"],
]


@criterion(11, "identical specs give byte-identical reports")
def test_criterion_11_determinism(tmp_path, monkeypatch):
    for i, argv in enumerate(DETERMINISM_RUNS):
        outputs = []
        for threads in ("1", "1", "2"):
            monkeypatch.setenv("SKEWSIP_THREADS", threads)
            j, c = tmp_path / f"{i}_{len(outputs)}.json", tmp_path / f"{i}_{len(outputs)}.csv"
            assert main(argv + ["--out", str(j), "--csv", str(c)]) == 0
            outputs.append((j.read_bytes(), c.read_bytes()))
        assert outputs[0] == outputs[1] == outputs[2]
    return f"{len(DETERMINISM_RUNS)} commands, 3 runs each"
