"""Literals, terms, DNFs/CNFs and restrictions over {0, 1, *}.

Restrictions are plain strings over the characters ``'0'``, ``'1'`` and ``'*'``
indexed by dense variable index. Assignments are strings or sequences of bits.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from ..errors import ShapeError

STAR = "*"


class Literal(NamedTuple):
    var: int
    positive: bool = True

    def __str__(self) -> str:
        return f"x{self.var}" if self.positive else f"~x{self.var}"

    def satisfied_by(self, bit: int) -> bool:
        return bool(bit) == self.positive

    def to_json(self) -> dict:
        return {"var": self.var, "sign": "+" if self.positive else "-"}

    @classmethod
    def from_json(cls, obj: dict) -> "Literal":
        if obj["sign"] not in ("+", "-"):
            raise ShapeError(f"bad literal sign {obj['sign']!r}")
        return cls(int(obj["var"]), obj["sign"] == "+")


Term = tuple  # tuple[Literal, ...]


def pos(var: int) -> Literal:
    return Literal(var, True)


def neg(var: int) -> Literal:
    return Literal(var, False)


def _bits(x, n: int) -> tuple[int, ...]:
    if isinstance(x, str):
        out = tuple(int(c) for c in x)
    else:
        out = tuple(int(b) for b in x)
    if len(out) != n:
        raise ShapeError(f"assignment has length {len(out)}, expected {n}")
    return out


def is_contradictory(term: Sequence[Literal]) -> bool:
    seen: dict[int, bool] = {}
    for lit in term:
        if seen.get(lit.var, lit.positive) != lit.positive:
            return True
        seen[lit.var] = lit.positive
    return False


@dataclass(frozen=True)
class Dnf:
    """An ordered OR of terms.

    Term order is significant (CanonicalDT scans terms in this order). The
    empty term list is constant 0; a single empty term is constant 1.
    Contradictory terms are kept until :meth:`normalize` removes them.
    """

    num_vars: int
    terms: tuple = ()

    def __post_init__(self):
        terms = tuple(tuple(Literal(*lit) for lit in t) for t in self.terms)
        for t in terms:
            for lit in t:
                if not 0 <= lit.var < self.num_vars:
                    raise ShapeError(f"literal {lit} outside {self.num_vars} variables")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def constant(cls, value: int, num_vars: int) -> "Dnf":
        return cls(num_vars, ((),) if value else ())

    @property
    def width(self) -> int:
        return max((len(t) for t in self.terms), default=0)

    def is_constant(self) -> int | None:
        """Syntactic constant test: 1 if some term is empty, 0 if no terms."""
        if any(len(t) == 0 for t in self.terms):
            return 1
        if not self.terms:
            return 0
        return None

    def normalize(self) -> "Dnf":
        """Drop contradictory terms and merge repeated same-sign literals."""
        out = []
        for t in self.terms:
            if is_contradictory(t):
                continue
            out.append(tuple(dict.fromkeys(t)))
        return Dnf(self.num_vars, tuple(out))

    def evaluate(self, x) -> int:
        bits = _bits(x, self.num_vars)
        return int(any(all(lit.satisfied_by(bits[lit.var]) for lit in t) for t in self.terms))

    def evaluate_columns(self, cols) -> np.ndarray:
        out = np.zeros(cols.size, dtype=bool)
        for t in self.terms:
            acc = np.ones(cols.size, dtype=bool)
            for lit in t:
                acc &= cols[lit.var] if lit.positive else ~cols[lit.var]
            out |= acc
        return out

    def restrict(self, rho: str) -> "Dnf":
        return restrict(self, rho)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " | ".join("(" + " & ".join(map(str, t)) + ")" if t else "1" for t in self.terms)

    def to_json(self) -> dict:
        return {"num_vars": self.num_vars, "terms": [[lit.to_json() for lit in t] for t in self.terms]}

    @classmethod
    def from_json(cls, obj: dict) -> "Dnf":
        return cls(int(obj["num_vars"]), tuple(tuple(Literal.from_json(l) for l in t) for t in obj["terms"]))


@dataclass(frozen=True)
class Cnf:
    """An ordered AND of clauses; the dual of :class:`Dnf` in every respect."""

    num_vars: int
    clauses: tuple = ()

    def __post_init__(self):
        clauses = tuple(tuple(Literal(*lit) for lit in c) for c in self.clauses)
        for c in clauses:
            for lit in c:
                if not 0 <= lit.var < self.num_vars:
                    raise ShapeError(f"literal {lit} outside {self.num_vars} variables")
        object.__setattr__(self, "clauses", clauses)

    @property
    def width(self) -> int:
        return max((len(c) for c in self.clauses), default=0)

    def evaluate(self, x) -> int:
        bits = _bits(x, self.num_vars)
        return int(all(any(lit.satisfied_by(bits[lit.var]) for lit in c) for c in self.clauses))

    def evaluate_columns(self, cols) -> np.ndarray:
        out = np.ones(cols.size, dtype=bool)
        for c in self.clauses:
            acc = np.zeros(cols.size, dtype=bool)
            for lit in c:
                acc |= cols[lit.var] if lit.positive else ~cols[lit.var]
            out &= acc
        return out

    def negation(self) -> Dnf:
        """The DNF computing NOT of this CNF (de Morgan: every literal flipped)."""
        return Dnf(self.num_vars, tuple(tuple(Literal(l.var, not l.positive) for l in c) for c in self.clauses))

    def to_json(self) -> dict:
        return {"num_vars": self.num_vars, "clauses": [[lit.to_json() for lit in c] for c in self.clauses]}

    @classmethod
    def from_json(cls, obj: dict) -> "Cnf":
        return cls(int(obj["num_vars"]), tuple(tuple(Literal.from_json(l) for l in c) for c in obj["clauses"]))


def eval_dnf(F: Dnf, x) -> int:
    return F.evaluate(x)


# --- restrictions -----------------------------------------------------------

def check_restriction(rho: str, n: int | None = None) -> str:
    if not isinstance(rho, str) or any(c not in "01*" for c in rho):
        raise ShapeError("restriction must be a string over '0', '1', '*'")
    if n is not None and len(rho) != n:
        raise ShapeError(f"restriction has length {len(rho)}, expected {n}")
    return rho


def compose(rho: str, rho2: str) -> str:
    """The composition rho rho2: rho's value where it is fixed, rho2's elsewhere."""
    if len(rho) != len(rho2):
        raise ShapeError("restrictions over different variable sets")
    return "".join(a if a != STAR else b for a, b in zip(rho, rho2))


def all_star(n: int) -> str:
    return STAR * n


def restrict_term(term: Sequence[Literal], rho: str):
    """Restrict one term. Returns ``None`` if falsified, else the tuple of live literals."""
    live = []
    for lit in term:
        c = rho[lit.var]
        if c == STAR:
            live.append(lit)
        elif (c == "1") != lit.positive:
            return None
    return tuple(live)


def restrict(F: Dnf, rho: str) -> Dnf:
    """F restricted by rho; an emptied term makes the result the constant-1 DNF."""
    check_restriction(rho, F.num_vars)
    out = []
    for t in F.terms:
        live = restrict_term(t, rho)
        if live is None:
            continue
        if not live:
            return Dnf.constant(1, F.num_vars)
        out.append(live)
    return Dnf(F.num_vars, tuple(out))


def random_dnf(num_vars: int, max_width: int, num_terms: int, rng: np.random.Generator,
               min_width: int = 1) -> Dnf:
    """A DNF with ``num_terms`` terms of width in [min_width, max_width].

    Variables within a term are distinct and listed in ascending order; signs
    are uniform.
    """
    if max_width > num_vars:
        raise ShapeError("width exceeds number of variables")
    terms = []
    for _ in range(num_terms):
        w = int(rng.integers(min_width, max_width + 1))
        vs = sorted(int(v) for v in rng.choice(num_vars, size=w, replace=False))
        terms.append(tuple(Literal(v, bool(rng.integers(0, 2))) for v in vs))
    return Dnf(num_vars, tuple(terms))


def dnf_from_terms(num_vars: int, terms: Iterable[Iterable]) -> Dnf:
    """Build a DNF from terms given as signed ints (``+v+1`` / ``-(v+1)``), DIMACS style."""
    out = []
    for t in terms:
        out.append(tuple(Literal(abs(c) - 1, c > 0) for c in t))
    return Dnf(num_vars, tuple(out))
