"""Block restrictions, the product distribution over blocks, and projections.

A block restriction is either all-star or a section-monochromatic pattern:
``Pattern(a, z)`` puts ``z`` on section ``a`` and ``1 - z`` on every other
section of the block. With probability ``q`` a block is all-star, otherwise it
is one of the ``2u`` patterns uniformly.

Blocks are also handled through integer codes: 0 is all-star and
``1 + 2a + z`` is ``Pattern(a, z)``, which matches the support order.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .core.normal_forms import STAR, Dnf, Literal, check_restriction, restrict_term
from .core.truth import TruthTable
from .errors import CapExceeded, DomainError, ShapeError
from .rng import chunked_generators
from .sipser import AddressSpace, SipserParams, build_skewed_sipser

MAX_SUPPORT = 10 ** 7
MAX_PROJECTED_VARS = 20


def as_fraction(q) -> Fraction:
    if isinstance(q, str):
        return Fraction(q)
    if isinstance(q, float):
        raise DomainError("q must be an exact rational, not a float")
    return Fraction(q)


def check_q(q, allow_one: bool = False) -> Fraction:
    q = as_fraction(q)
    if not (0 < q < 1 or (allow_one and q == 1)):
        raise DomainError(f"q = {q} outside (0, 1)")
    return q


@dataclass(frozen=True, order=True)
class BlockRestriction:
    section: int | None = None
    bit: int | None = None

    @property
    def is_star(self) -> bool:
        return self.section is None

    @property
    def code(self) -> int:
        return 0 if self.section is None else 1 + 2 * self.section + self.bit

    @classmethod
    def from_code(cls, code: int) -> "BlockRestriction":
        if code == 0:
            return ALL_STAR
        a, z = divmod(code - 1, 2)
        return cls(a, z)

    def expand(self, u: int, w_b: int) -> str:
        if self.is_star:
            return STAR * (u * w_b)
        if not 0 <= self.section < u:
            raise ShapeError(f"section {self.section} outside [0, {u})")
        rare, common = str(self.bit), str(1 - self.bit)
        return "".join((rare if a == self.section else common) * w_b for a in range(u))

    def to_json(self) -> dict:
        if self.is_star:
            return {"kind": "star"}
        return {"kind": "pattern", "section": self.section, "bit": self.bit}

    @classmethod
    def from_json(cls, obj: dict) -> "BlockRestriction":
        if obj["kind"] == "star":
            return ALL_STAR
        return cls(int(obj["section"]), int(obj["bit"]))


ALL_STAR = BlockRestriction()


def Pattern(section: int, bit: int) -> BlockRestriction:
    if bit not in (0, 1):
        raise ShapeError("pattern bit must be 0 or 1")
    return BlockRestriction(section, bit)


def enumerate_support(u: int) -> list[BlockRestriction]:
    """All-star first, then patterns by (section, bit): 2u + 1 values."""
    return [ALL_STAR] + [Pattern(a, z) for a in range(u) for z in (0, 1)]


def block_weight(b: BlockRestriction, u: int, q: Fraction) -> Fraction:
    return q if b.is_star else (1 - q) / (2 * u)


def sample_block(u: int, q, rng: np.random.Generator) -> BlockRestriction:
    q = check_q(q, allow_one=True)
    if int(rng.integers(0, q.denominator)) < q.numerator:
        return ALL_STAR
    return BlockRestriction.from_code(1 + int(rng.integers(0, 2 * u)))


def sample_codes(num_blocks: int, u: int, q, rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` independent product samples as an array of block codes."""
    q = check_q(q, allow_one=True)
    star = rng.integers(0, q.denominator, size=(size, num_blocks)) < q.numerator
    pat = 1 + rng.integers(0, 2 * u, size=(size, num_blocks))
    return np.where(star, 0, pat)


@dataclass(frozen=True)
class ProjRestriction:
    """A restriction in the support of the product distribution, one entry per block."""

    space: AddressSpace
    blocks: tuple
    q: Fraction | None = None

    def __post_init__(self):
        if self.space.params.d < 1:
            raise DomainError("projections need at least one AND layer (d >= 1)")
        blocks = tuple(self.blocks)
        if len(blocks) != self.space.num_blocks:
            raise ShapeError(f"{len(blocks)} blocks given, space has {self.space.num_blocks}")
        for b in blocks:
            if not b.is_star and not (0 <= b.section < self.space.u and b.bit in (0, 1)):
                raise ShapeError(f"bad block restriction {b}")
        object.__setattr__(self, "blocks", blocks)
        if self.q is not None:
            object.__setattr__(self, "q", check_q(self.q, allow_one=True))

    @classmethod
    def from_codes(cls, space: AddressSpace, codes: Sequence[int], q=None) -> "ProjRestriction":
        return cls(space, tuple(BlockRestriction.from_code(int(c)) for c in codes), q)

    @classmethod
    def all_star(cls, space: AddressSpace, q=None) -> "ProjRestriction":
        return cls(space, (ALL_STAR,) * space.num_blocks, q)

    @classmethod
    def from_restriction(cls, space: AddressSpace, rho: str, q=None) -> "ProjRestriction":
        """Parse a flat restriction; raises DomainError if it is off-support.

        For u = 2 the parse picks the first label in support order.
        """
        check_restriction(rho, space.n)
        table = {}
        for b in enumerate_support(space.u):
            # for u = 2, Pattern(a, z) and Pattern(1 - a, 1 - z) expand alike; keep the first label
            table.setdefault(b.expand(space.u, space.w_b), b)
        blocks = []
        for beta in range(space.num_blocks):
            r = space.block_range(beta)
            chunk = rho[r.start:r.stop]
            if chunk not in table:
                raise DomainError(f"block {beta} = {chunk!r} is not in the support")
            blocks.append(table[chunk])
        return cls(space, tuple(blocks), q)

    @property
    def codes(self) -> tuple[int, ...]:
        return tuple(b.code for b in self.blocks)

    def expand(self) -> str:
        u, w_b = self.space.u, self.space.w_b
        return "".join(b.expand(u, w_b) for b in self.blocks)

    def star_blocks(self) -> list[int]:
        return [i for i, b in enumerate(self.blocks) if b.is_star]

    def with_q(self, q) -> "ProjRestriction":
        return ProjRestriction(self.space, self.blocks, q)

    def flipped(self) -> "ProjRestriction":
        """Every fixed bit negated; the distribution is invariant under this map."""
        return ProjRestriction(self.space, tuple(b if b.is_star else Pattern(b.section, 1 - b.bit)
                                                 for b in self.blocks), self.q)

    def to_json(self) -> dict:
        out = {"blocks": [b.to_json() for b in self.blocks]}
        if self.q is not None:
            out["q"] = f"{self.q.numerator}/{self.q.denominator}"
        return out

    @classmethod
    def from_json(cls, space: AddressSpace, obj: dict) -> "ProjRestriction":
        return cls(space, tuple(BlockRestriction.from_json(b) for b in obj["blocks"]),
                   Fraction(obj["q"]) if "q" in obj else None)


def restriction_weight(rho, q=None, space: AddressSpace | None = None) -> Fraction:
    """Exact probability of rho under the product distribution.

    ``rho`` may be a flat string, which is parsed against ``space`` and rejected
    with DomainError when it is not in the support.
    """
    if isinstance(rho, str):
        if space is None:
            raise DomainError("a flat restriction needs its address space")
        rho = ProjRestriction.from_restriction(space, rho)
    if not isinstance(rho, ProjRestriction):
        raise DomainError("weights are defined only on support restrictions")
    q = rho.q if q is None else check_q(q, allow_one=True)
    if q is None:
        raise DomainError("no q attached to restriction")
    u = rho.space.u
    stars = sum(1 for b in rho.blocks if b.is_star)
    return q ** stars * ((1 - q) / (2 * u)) ** (len(rho.blocks) - stars)


def enumerate_product_support(space: AddressSpace, q=None) -> Iterator[ProjRestriction]:
    size = (2 * space.u + 1) ** space.num_blocks
    if size > MAX_SUPPORT:
        raise CapExceeded(f"support of size {size} exceeds {MAX_SUPPORT}")
    for codes in itertools.product(range(2 * space.u + 1), repeat=space.num_blocks):
        yield ProjRestriction.from_codes(space, codes, q)


def in_support(space: AddressSpace, rho: str) -> bool:
    try:
        ProjRestriction.from_restriction(space, rho)
    except DomainError:
        return False
    return True


# --- the projection operator -------------------------------------------------------

def _flat(rho) -> str:
    return rho.expand() if isinstance(rho, ProjRestriction) else rho


def project_term(term, rho: str, space: AddressSpace):
    """Project one term: None if falsified or killed, else a tuple of y-literals."""
    live = restrict_term(term, rho)
    if live is None:
        return None
    out: dict[int, bool] = {}
    for lit in live:
        beta = space.block_of(lit.var)
        if out.setdefault(beta, lit.positive) != lit.positive:
            return None
    return tuple(Literal(b, s) for b, s in out.items())


def project_dnf(F: Dnf, rho, space: AddressSpace | None = None) -> Dnf:
    """proj_rho(F) as a DNF over y-variables indexed by block.

    Fixed x literals become constants, starred ones become y_beta; terms with
    y_beta and NOT y_beta are killed and repeated literals merged.
    """
    if space is None:
        space = rho.space
    flat = check_restriction(_flat(rho), space.n)
    if F.num_vars != space.n:
        raise ShapeError(f"DNF over {F.num_vars} variables, space has {space.n}")
    out = []
    for t in F.terms:
        p = project_term(t, flat, space)
        if p is None:
            continue
        if not p:
            return Dnf.constant(1, space.num_blocks)
        out.append(p)
    return Dnf(space.num_blocks, tuple(out))


def project_semantic(t: TruthTable, rho, space: AddressSpace | None = None) -> TruthTable:
    """Pointwise pullback: (proj f)(y) = f(x) with x_{beta,tau} = y_beta where rho is star."""
    if space is None:
        space = rho.space
    flat = check_restriction(_flat(rho), space.n)
    if t.num_vars != space.n:
        raise ShapeError(f"table over {t.num_vars} variables, space has {space.n}")
    m = space.num_blocks
    if m > MAX_PROJECTED_VARS:
        raise CapExceeded(f"{m} projected variables exceeds {MAX_PROJECTED_VARS}")
    y = np.arange(1 << m, dtype=np.int64)
    base = sum(1 << v for v, c in enumerate(flat) if c == "1")
    idx = np.full(1 << m, base, dtype=np.int64)
    for v, c in enumerate(flat):
        if c == STAR:
            idx |= ((y >> space.block_of(v)) & 1) << v
    return TruthTable(m, t.bits[idx])


# --- target preservation ------------------------------------------------------------

class CnfSipserOutcome(Enum):
    IDENTITY = "identity"
    ZERO = "zero"


def classify_cnf_sipser_restriction(rho: BlockRestriction, u: int, w_b: int) -> CnfSipserOutcome:
    """All-star leaves CNFSipser intact; every pattern zeroes some full section, killing it."""
    if u < 2:
        raise DomainError("needs u >= 2")
    if rho.is_star:
        return CnfSipserOutcome.IDENTITY
    # bit 0: section `section` is all-0; bit 1: every other section is all-0
    return CnfSipserOutcome.ZERO


def survival_certificate(rho: ProjRestriction) -> bool:
    """Every OR^(2) gate keeps at least w_b all-star children."""
    p = rho.space.params
    for g in range(rho.space.num_or2_gates):
        kids = rho.blocks[g * p.w:(g + 1) * p.w]
        if sum(1 for b in kids if b.is_star) < p.w_b:
            return False
    return True


class Trim(NamedTuple):
    restriction: str  # over y-variables, '0' or '*'
    relabel: tuple  # relabel[j] = block feeding variable j of the next-level formula


def trimming_restriction(rho: ProjRestriction) -> Trim:
    """Zero all but the w_b lowest-address surviving children of each OR^(2) gate."""
    if not survival_certificate(rho):
        raise DomainError("survival certificate fails; no trimming exists under this rule")
    p = rho.space.params
    values = [STAR] * rho.space.num_blocks
    relabel = []
    for g in range(rho.space.num_or2_gates):
        survivors = [beta for beta in range(g * p.w, (g + 1) * p.w) if rho.blocks[beta].is_star]
        relabel.extend(survivors[:p.w_b])
        for beta in survivors[p.w_b:]:
            values[beta] = "0"
    return Trim("".join(values), tuple(relabel))


def apply_trim(t: TruthTable, trim: Trim) -> TruthTable:
    """Trim a projected table and read it as a function of the relabelled variables.

    Free y-variables outside ``relabel`` belong to dead blocks; they are set to 0.
    """
    m = len(trim.relabel)
    rows = np.arange(1 << m, dtype=np.int64)
    idx = np.zeros(1 << m, dtype=np.int64)
    for j, beta in enumerate(trim.relabel):
        idx |= ((rows >> j) & 1) << beta
    return TruthTable(m, t.bits[idx])


def gate_survival_probability(w: int, w_b: int, q) -> Fraction:
    """Pr[Binomial(w, q) >= w_b], exactly."""
    q = as_fraction(q)
    return sum((math.comb(w, j) * q ** j * (1 - q) ** (w - j) for j in range(w_b, w + 1)), Fraction(0))


def preservation_closed_form(params: SipserParams, q) -> Fraction:
    space = AddressSpace(params)
    return gate_survival_probability(params.w, params.w_b, q) ** space.num_or2_gates


class McEstimate(NamedTuple):
    estimate: float
    stderr: float
    trials: int
    seed: int
    hits: int

    def within(self, exact, k: float = 3.0) -> bool:
        exact = float(exact)
        if self.stderr == 0.0:
            return self.estimate == exact
        return abs(self.estimate - exact) <= k * self.stderr


def mc_summary(hits: int, trials: int, seed: int) -> McEstimate:
    p = hits / trials
    return McEstimate(p, math.sqrt(p * (1 - p) / trials), trials, seed, hits)


def preservation_probability(params: SipserParams, q, mode: str = "exact", trials: int = 0,
                             seed: int = 0):
    """Probability that the survival certificate holds for rho drawn from the product distribution.

    ``mode="exact"`` sums weights over the enumerated support and returns a
    Fraction; ``mode="monte_carlo"`` returns an :class:`McEstimate`.
    """
    q = check_q(q)
    space = AddressSpace(params)
    if mode == "exact":
        total = Fraction(0)
        for rho in enumerate_product_support(space):
            if survival_certificate(rho):
                total += restriction_weight(rho, q)
        return total
    if mode == "monte_carlo":
        if trials <= 0:
            raise DomainError("trials must be positive")
        p = params
        hits = 0
        for rng, size in chunked_generators(seed, trials):
            codes = sample_codes(space.num_blocks, p.u, q, rng, size)
            stars = (codes == 0).reshape(size, space.num_or2_gates, p.w).sum(axis=2)
            hits += int((stars >= p.w_b).all(axis=1).sum())
        return mc_summary(hits, trials, seed)
    raise DomainError(f"unknown mode {mode!r}")


def projected_target(params: SipserParams, rho: ProjRestriction) -> TruthTable:
    """proj_rho(SkewedSipser), computed semantically."""
    from .core.truth import truth_table
    return project_semantic(truth_table(build_skewed_sipser(params)), rho)
