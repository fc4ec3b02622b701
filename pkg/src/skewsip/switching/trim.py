"""Project-and-trim: one random projection followed by the deterministic 0-trimming."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..core.circuits import Circuit, formula_to_circuit
from ..core.formula import Formula
from ..core.truth import MAX_TABLE_VARS, truth_table
from ..errors import DomainError, ShapeError
from ..projections import (
    ProjRestriction,
    apply_trim,
    check_q,
    project_semantic,
    sample_codes,
    survival_certificate,
    trimming_restriction,
)
from ..rng import generator
from ..sipser import AddressSpace, SipserParams, build_skewed_sipser
from .badset import frac_str


def s_parameter(u: int, q) -> Fraction:
    """S = (1/10) / (16 u^2 q)^(u-1)."""
    q = Fraction(q)
    return Fraction(1, 10) / (16 * u * u * q) ** (u - 1)


def trim_substitution(rho: ProjRestriction) -> list:
    """Input map x_v -> constant or ("var", j) realising projection then trimming."""
    space = rho.space
    trim = trimming_restriction(rho)
    index = {beta: j for j, beta in enumerate(trim.relabel)}
    flat = rho.expand()
    mapping = []
    for v, c in enumerate(flat):
        if c != "*":
            mapping.append(int(c))
            continue
        beta = space.block_of(v)
        mapping.append(("var", index[beta]) if beta in index else 0)
    return mapping


def project_and_trim_step(C: Circuit, rho: ProjRestriction) -> tuple[Circuit, Formula]:
    """Apply rho gate-wise to C, then the trimming zeroes and relabelling.

    Returns the simplified circuit and the one-level-smaller target formula.
    """
    space = rho.space
    if C.num_vars != space.n:
        raise ShapeError(f"circuit over {C.num_vars} variables, level has {space.n}")
    if not survival_certificate(rho):
        raise DomainError("survival certificate fails")
    lower = space.params.lower()
    out = C.substitute(trim_substitution(rho), lower.n)
    return out, build_skewed_sipser(lower)


@dataclass
class TrimStepRecord:
    level: int
    attempts: int
    restriction: ProjRestriction
    circuit_size: int
    circuit_depth: int
    matches_target: bool | None
    matches_semantic: bool | None

    def to_json(self) -> dict:
        return {"level": self.level, "attempts": self.attempts,
                "restriction": self.restriction.to_json()["blocks"],
                "circuit_size": self.circuit_size, "circuit_depth": self.circuit_depth,
                "matches_target": self.matches_target, "matches_semantic": self.matches_semantic}


@dataclass
class TrimReport:
    params: SipserParams
    q: Fraction
    seed: int
    steps: list = field(default_factory=list)
    final_target: Formula | None = None
    final_circuit: Circuit | None = None
    completed: bool = False

    @property
    def S(self) -> Fraction:
        return s_parameter(self.params.u, self.q)

    @property
    def all_equivalent(self) -> bool:
        return all(st.matches_target is not False and st.matches_semantic is not False for st in self.steps)

    def to_json(self) -> dict:
        return {"params": self.params.to_json(), "q": frac_str(self.q), "seed": self.seed,
                "S": frac_str(self.S), "completed": self.completed,
                "all_equivalent": self.all_equivalent,
                "steps": [st.to_json() for st in self.steps],
                "final_target": None if self.final_target is None else self.final_target.to_json()}


def _tt_or_none(obj, n):
    return truth_table(obj, n) if n <= MAX_TABLE_VARS else None


def project_and_trim(params: SipserParams, q, seed: int, circuit: Circuit | None = None,
                     max_attempts: int = 10_000) -> TrimReport:
    """Run levels d, d-1, ..., 1, resampling each projection until it is certified.

    Attempt ``a`` at level ``l`` draws from the stream for (seed, chunk = l * max_attempts + a).
    """
    q = check_q(q)
    C = circuit if circuit is not None else formula_to_circuit(build_skewed_sipser(params))
    report = TrimReport(params, q, seed)
    p = params
    while p.d >= 1:
        space = AddressSpace(p)
        rho = None
        for a in range(max_attempts):
            rng = generator(seed, p.d * max_attempts + a)
            cand = ProjRestriction.from_codes(space, sample_codes(space.num_blocks, p.u, q, rng, 1)[0], q)
            if survival_certificate(cand):
                rho = cand
                break
        if rho is None:
            return report
        before = _tt_or_none(C, p.n)
        C2, target = project_and_trim_step(C, rho)
        lower = p.lower()
        after = _tt_or_none(C2, lower.n)
        m_target = None if after is None else after == truth_table(target)
        m_sem = None
        if before is not None and after is not None and space.num_blocks <= 20:
            m_sem = apply_trim(project_semantic(before, rho), trimming_restriction(rho)) == after
        report.steps.append(TrimStepRecord(p.d, a + 1, rho, C2.size, C2.depth, m_target, m_sem))
        C, p = C2, lower
        report.final_target = target
    report.final_circuit = C
    report.completed = True
    return report
