"""Exhaustive and sampled evaluation of the projection switching lemma."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..core.normal_forms import Cnf, Dnf, Literal
from ..core.truth import optimal_dt_depth, truth_table
from ..errors import CanonicalDTError, DomainError, ShapeError
from ..projections import (
    McEstimate,
    ProjRestriction,
    check_q,
    enumerate_product_support,
    mc_summary,
    project_dnf,
    restriction_weight,
    sample_codes,
)
from ..rng import chunked_generators, generator
from ..sipser import AddressSpace, SipserParams
from .canonical import CanonicalEngine
from .theta import decode_theta, encode_theta, expected_ratio, weight_ratio


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class PslParams:
    space: AddressSpace
    r: int
    s: int
    q: Fraction

    def __post_init__(self):
        if self.r < 1 or self.s < 1:
            raise DomainError("r and s must be at least 1")
        object.__setattr__(self, "q", check_q(self.q))

    @classmethod
    def make(cls, u: int, w: int, w_b: int, d: int, r: int, s: int, q) -> "PslParams":
        return cls(AddressSpace(SipserParams(u, w, w_b, d)), r, s, q)

    @property
    def u(self) -> int:
        return self.space.u

    @property
    def applicable(self) -> bool:
        """Whether the width condition r <= u - 1 holds."""
        return self.r <= self.u - 1

    @property
    def bound(self) -> Fraction:
        return psl_bound(self.q, self.r, self.u, self.s)

    def to_json(self) -> dict:
        return {**self.space.params.to_json(), "r": self.r, "s": self.s, "q": frac_str(self.q)}


def psl_bound(q, r: int, u: int, s: int) -> Fraction:
    q = Fraction(q)
    return (8 * q * r * u / (1 - q)) ** s


class SupportProfile:
    """Canonical tree depths of one DNF over every support restriction.

    Depths and theta images do not depend on q, so one profile serves every
    (q, s) pair for the same DNF.
    """

    def __init__(self, F: Dnf, space: AddressSpace):
        self.engine = CanonicalEngine(F, space)
        self.space = space
        self.restrictions = list(enumerate_product_support(space))
        self.depths = [self.engine.depth(rho.expand()) for rho in self.restrictions]
        self._optimal: list[int] | None = None
        self._images: dict[tuple, object] = {}

    @property
    def F(self) -> Dnf:
        return self.engine.F

    @property
    def optimal_depths(self) -> list[int]:
        if self._optimal is None:
            self._optimal = [optimal_dt_depth(truth_table(project_dnf(self.F, rho)))
                             for rho in self.restrictions]
        return self._optimal

    def bad(self, s: int) -> list[ProjRestriction]:
        return [rho for rho, dep in zip(self.restrictions, self.depths) if dep >= s]

    def image(self, rho: ProjRestriction, s: int, r: int):
        key = (rho.codes, s, r)
        hit = self._images.get(key)
        if hit is None:
            hit = encode_theta(self.engine, rho, s, r)
            self._images[key] = hit
        return hit


@dataclass
class BadSetReport:
    params: PslParams
    bad: list  # (ProjRestriction, weight)
    exact_prob: Fraction
    bound: Fraction
    optimal_prob: Fraction
    codec_checked: bool = False
    injective: bool = True
    round_trip: bool = True
    ratio_exact: bool = True
    max_group_weight: Fraction = Fraction(0)
    failures: list = field(default_factory=list)

    @property
    def bound_holds(self) -> bool:
        return self.exact_prob <= self.bound

    @property
    def ok(self) -> bool:
        good = self.injective and self.round_trip and self.ratio_exact and self.max_group_weight <= 1
        good = good and self.optimal_prob <= self.exact_prob
        return good and (self.bound_holds or not self.params.applicable)

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "applicable": self.params.applicable,
            "bad_count": len(self.bad),
            "bad": [{"restriction": rho.to_json()["blocks"], "weight": frac_str(wt)} for rho, wt in self.bad],
            "exact_prob": frac_str(self.exact_prob),
            "bound": frac_str(self.bound),
            "bound_holds": self.bound_holds,
            "optimal_dt_prob": frac_str(self.optimal_prob),
            "codec_checked": self.codec_checked,
            "injective": self.injective,
            "round_trip": self.round_trip,
            "weight_ratio_exact": self.ratio_exact,
            "max_group_weight": frac_str(self.max_group_weight),
        }


def bad_set(F: Dnf, params: PslParams, check_codec: bool = True,
            profile: SupportProfile | None = None) -> BadSetReport:
    """Enumerate the support, collect restrictions with canonical depth >= s, and audit theta."""
    if profile is None:
        profile = SupportProfile(F, params.space)
    elif profile.F is not F and profile.F != F:
        raise ShapeError("profile belongs to a different DNF")
    q, s, r = params.q, params.s, params.r
    bad = [(rho, restriction_weight(rho, q)) for rho in profile.bad(s)]
    exact = sum((wt for _, wt in bad), Fraction(0))
    opt = sum((restriction_weight(rho, q) for rho, dep in zip(profile.restrictions, profile.optimal_depths)
               if dep >= s), Fraction(0))
    report = BadSetReport(params, bad, exact, params.bound, opt)
    if check_codec and bad:
        if F.width > r:
            raise DomainError(f"DNF width {F.width} exceeds r = {r}")
        report.codec_checked = True
        target = expected_ratio(q, params.u, s)
        seen = {}
        groups: dict = defaultdict(Fraction)
        for rho, wt in bad:
            th = profile.image(rho, s, r)
            if th.key in seen:
                report.injective = False
                report.failures.append(("collision", rho.codes, seen[th.key]))
            seen[th.key] = rho.codes
            back = decode_theta(profile.engine, th, s, r)
            if back.codes != rho.codes:
                report.round_trip = False
                report.failures.append(("round_trip", rho.codes, back.codes))
            if weight_ratio(rho, th, q) != target:
                report.ratio_exact = False
                report.failures.append(("ratio", rho.codes))
            groups[(th.path_bits, th.eta_code)] += restriction_weight(th.composed, q)
        report.max_group_weight = max(groups.values())
    return report


def psl_monte_carlo(F: Dnf, params: PslParams, trials: int, seed: int,
                    engine: CanonicalEngine | None = None) -> McEstimate:
    """Fraction of sampled restrictions whose canonical tree has depth >= s."""
    if trials <= 0:
        raise DomainError("trials must be positive")
    space = params.space
    engine = engine or CanonicalEngine(F, space)
    hits = 0
    cache: dict[bytes, int] = {}
    for rng, size in chunked_generators(seed, trials):
        codes = sample_codes(space.num_blocks, space.u, params.q, rng, size)
        for row in codes:
            key = row.tobytes()
            dep = cache.get(key)
            if dep is None:
                dep = engine.depth(ProjRestriction.from_codes(space, row).expand())
                cache[key] = dep
            hits += dep >= params.s
    return mc_summary(hits, trials, seed)


# --- CNF inputs, through duality -----------------------------------------------------

def cnf_dual(C: Cnf) -> Dnf:
    """The DNF with the same literal structure: C(x) = NOT dual(NOT x)."""
    return Dnf(C.num_vars, C.clauses)


def canonical_dt_cnf(C: Cnf, rho: ProjRestriction):
    """A decision tree for proj_rho(C): the negated canonical tree of the dual at the flipped restriction."""
    return CanonicalEngine(cnf_dual(C), rho.space).tree(rho.flipped()).negated()


def bad_set_cnf(C: Cnf, params: PslParams, check_codec: bool = True) -> BadSetReport:
    """Bad set of a CNF: flips of the dual DNF's bad restrictions, with identical weights."""
    rep = bad_set(cnf_dual(C), params, check_codec)
    rep.bad = [(rho.flipped(), wt) for rho, wt in rep.bad]
    return rep


def encode_theta_cnf(C: Cnf, rho: ProjRestriction, s: int, r: int):
    return encode_theta(CanonicalEngine(cnf_dual(C), rho.space), rho.flipped(), s, r)


def decode_theta_cnf(C: Cnf, theta, s: int, r: int) -> ProjRestriction:
    return decode_theta(CanonicalEngine(cnf_dual(C), theta.composed.space), theta, s, r).flipped()


# --- random instances ----------------------------------------------------------------

def random_instance_dnfs(space: AddressSpace, r: int, count: int, seed: int,
                         max_terms: int = 6) -> list[Dnf]:
    """Seeded r-DNFs with 1..max_terms terms of width 1..r over the space's variables."""
    from ..core.normal_forms import random_dnf
    rng = generator(seed)
    return [random_dnf(space.n, r, int(rng.integers(1, max_terms + 1)), rng) for _ in range(count)]


# --- searching for violations at r = u ------------------------------------------------

def sipser_level_one_dnf(params: SipserParams) -> Dnf:
    """SkewedSipser with d = 1 expanded into a u-DNF: one term per choice of a variable in each section."""
    if params.d != 1:
        raise ShapeError("expansion provided for d = 1 only")
    space = AddressSpace(params)
    terms = []
    for beta in range(space.num_blocks):
        sections = [space.section_range(beta, a) for a in range(params.u)]
        for pick in np.ndindex(*(len(s) for s in sections)):
            terms.append(tuple(Literal(sections[a][i], True) for a, i in enumerate(pick)))
    return Dnf(space.n, tuple(terms))


@dataclass
class ViolationRecord:
    label: str
    q: Fraction
    s: int
    optimal_prob: Fraction
    canonical_prob: Fraction | None
    bound: Fraction

    @property
    def violates(self) -> bool:
        return self.optimal_prob > self.bound

    def to_json(self) -> dict:
        return {"label": self.label, "q": frac_str(self.q), "s": self.s,
                "optimal_dt_prob": frac_str(self.optimal_prob),
                "canonical_prob": None if self.canonical_prob is None else frac_str(self.canonical_prob),
                "bound": frac_str(self.bound), "violates": self.violates}


def search_u_width_violation(params: SipserParams, qs, ss=(1, 2), random_count: int = 20,
                             seed: int = 0):
    """Look for u-width DNFs whose depth->=s probability beats the r = u bound.

    The probability used is that of optimal decision-tree depth >= s, the
    quantity the lemma actually bounds; the canonical-tree figure is reported
    where step 1 is well defined and omitted where it is not. Returns the
    first violating record (or None) and every record examined.
    """
    space = AddressSpace(params)
    u = params.u
    cands = []
    if params.d == 1:
        cands.append(("skewed_sipser", sipser_level_one_dnf(params)))
    for i, F in enumerate(random_instance_dnfs(space, u, random_count, seed)):
        cands.append((f"random_{i}", F))
    records = []
    for label, F in cands:
        rhos = list(enumerate_product_support(space))
        opt = [optimal_dt_depth(truth_table(project_dnf(F, rho))) for rho in rhos]
        eng = CanonicalEngine(F, space)
        try:
            can = [eng.depth(rho.expand()) for rho in rhos]
        except CanonicalDTError:
            can = None
        for q in qs:
            q = Fraction(q)
            wts = [restriction_weight(rho, q) for rho in rhos]
            for s in ss:
                po = sum((wt for wt, dep in zip(wts, opt) if dep >= s), Fraction(0))
                pc = None if can is None else sum((wt for wt, dep in zip(wts, can) if dep >= s), Fraction(0))
                records.append(ViolationRecord(label, q, s, po, pc, psl_bound(q, u, u, s)))
    witness = next((rec for rec in records if rec.violates), None)
    return witness, records


def bound_is_monotone(qs, r: int, u: int, s: int) -> bool:
    vals = [psl_bound(q, r, u, s) for q in sorted(Fraction(q) for q in qs)]
    return all(a < b for a, b in zip(vals, vals[1:]))


def mc_agrees(est: McEstimate, exact: Fraction, k: float = 3.0) -> bool:
    if est.stderr == 0:
        return math.isclose(est.estimate, float(exact), abs_tol=1.0 / est.trials) or est.estimate == float(exact)
    return est.within(exact, k)
