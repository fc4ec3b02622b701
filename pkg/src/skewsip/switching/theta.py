"""The map theta on bad restrictions and its decoder.

theta(rho) = (composed, path bits, eta code). The composed restriction fixes
exactly s extra blocks to patterns; the path bits are the first s answers on
the lexicographically first long path; the eta code lets the decoder recover
which blocks those were, given the term that spawned them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..core.normal_forms import restrict_term
from ..errors import DecodeError, DomainError
from ..projections import ALL_STAR, ProjRestriction, enumerate_support, restriction_weight
from .canonical import CanonicalEngine, _assignments, _pattern_value, supp_satisfiable


def location_width(r: int) -> int:
    """ceil(log2 r) bits; 0 when r = 1."""
    if r < 1:
        raise DomainError("r must be at least 1")
    return (r - 1).bit_length()


@dataclass(frozen=True)
class ThetaImage:
    composed: ProjRestriction
    path_bits: str
    eta_code: str

    @property
    def key(self) -> tuple:
        return (self.composed.codes, self.path_bits, self.eta_code)

    def to_json(self) -> dict:
        return {"composed": self.composed.to_json(), "path_bits": self.path_bits, "eta_code": self.eta_code}


def _long_path(engine: CanonicalEngine, rho: str, need: int):
    """Segments (step, answers) of the lexicographically first path with at least ``need`` more queries."""
    st = engine.step(rho)
    if isinstance(st, int):
        return None
    k = len(st.eta)
    for pi in _assignments(k):
        if k >= need:
            return [(st, pi[:need])]
        child = engine.fix_blocks(rho, st.eta, pi)
        if engine.depth(child) >= need - k:
            return [(st, pi)] + _long_path(engine, child, need - k)
    return None


def _sigma_block(lits, space):
    # blocks are disjoint, so the global lexicographic minimum (0 < 1 < *) is the
    # per-block minimum over pattern expansions that keep these literals alive
    best = None
    for b in enumerate_support(space.u)[1:]:
        if all(_pattern_value(b, space.section_of(l.var)) == int(l.positive) for l in lits):
            e = b.expand(space.u, space.w_b)
            if best is None or e < best[0]:
                best = (e, b)
    return best[1]


def encode_theta(engine: CanonicalEngine, rho: ProjRestriction, s: int, r: int) -> ThetaImage:
    space = engine.space
    flat = rho.expand()
    if s < 1:
        raise DomainError("s must be at least 1")
    if engine.depth(flat) < s:
        raise DomainError("restriction is not bad: canonical tree depth below s")
    segments = _long_path(engine, flat, s)
    L = location_width(r)
    blocks = list(rho.blocks)
    path_bits, eta_code = [], []
    for st, pi in segments:
        term = engine.F.terms[st.term]
        eta = st.eta[:len(pi)]
        for j, beta in enumerate(eta):
            loc = next(k for k, lit in enumerate(term) if space.block_of(lit.var) == beta)
            if loc >= 1 << L:
                raise DomainError(f"term {st.term} wider than r = {r}")
            lits = [l for l in st.live if space.block_of(l.var) == beta]
            blocks[beta] = _sigma_block(lits, space)
            eta_code.append(format(loc, f"0{L}b") if L else "")
            eta_code.append("1" if j == len(eta) - 1 else "0")
        path_bits.extend(str(b) for b in pi)
    composed = ProjRestriction(space, tuple(blocks), rho.q)
    return ThetaImage(composed, "".join(path_bits), "".join(eta_code))


def parse_eta_code(code: str, s: int, r: int) -> list[list[int]]:
    L = location_width(r)
    if len(code) != s * (L + 1) or any(c not in "01" for c in code):
        raise DecodeError("eta_code", f"expected {s * (L + 1)} bits")
    segments, cur = [], []
    for k in range(s):
        chunk = code[k * (L + 1):(k + 1) * (L + 1)]
        cur.append(int(chunk[:L], 2) if L else 0)
        if chunk[L] == "1":
            segments.append(cur)
            cur = []
    if cur:
        raise DecodeError("eta_code", "last segment lacks a terminator")
    return segments


def decode_theta(engine: CanonicalEngine, theta: ThetaImage, s: int, r: int,
                 verify: bool = False) -> ProjRestriction:
    """Invert encode_theta. With ``verify`` the result is re-encoded and compared."""
    space = engine.space
    F = engine.F
    if len(theta.path_bits) != s or any(c not in "01" for c in theta.path_bits):
        raise DecodeError("path_bits", f"expected {s} bits")
    segments = parse_eta_code(theta.eta_code, s, r)
    hybrid = theta.composed.expand()
    used: list[int] = []
    pos = 0
    for i, locs in enumerate(segments):
        last = i == len(segments) - 1
        idx = None
        for k, t in enumerate(F.terms):
            live = restrict_term(t, hybrid)
            if live is None:
                continue
            if live == () or (last and supp_satisfiable(live, space) is not None):
                idx = k
                break
        if idx is None:
            raise DecodeError("term", f"no term found for segment {i}")
        term = F.terms[idx]
        eta = []
        for loc in locs:
            if loc >= len(term):
                raise DecodeError("location", f"location {loc} outside term {idx}")
            eta.append(space.block_of(term[loc].var))
        if any(a >= b for a, b in zip(eta, eta[1:])) or set(eta) & set(used):
            raise DecodeError("location", "recovered blocks are not strictly ascending and fresh")
        for beta in eta:
            if theta.composed.blocks[beta].is_star:
                raise DecodeError("location", f"block {beta} is free in the composed restriction")
        hybrid = engine.fix_blocks(hybrid, eta, theta.path_bits[pos:pos + len(eta)])
        pos += len(eta)
        used.extend(eta)
    # labels come from the composed restriction: for u = 2 two labels share one expansion
    blocks = list(theta.composed.blocks)
    for beta in used:
        blocks[beta] = ALL_STAR
    rho = ProjRestriction(space, tuple(blocks), theta.composed.q)
    if verify:
        try:
            again = encode_theta(engine, rho, s, r)
        except DomainError as exc:
            raise DecodeError("verify", str(exc)) from exc
        if again.key != theta.key:
            raise DecodeError("verify", "re-encoding does not reproduce the image")
    return rho


def weight_ratio(rho: ProjRestriction, theta: ThetaImage, q=None) -> Fraction:
    return restriction_weight(theta.composed, q) / restriction_weight(rho, q)


def expected_ratio(q, u: int, s: int) -> Fraction:
    q = Fraction(q)
    return ((1 - q) / (2 * q * u)) ** s
