"""Foundational Boolean objects and brute-force oracles."""
from .circuits import Circuit, CircuitBuilder, CircuitMetrics, Gate, circuit_metrics, dnf_to_circuit, formula_to_circuit
from .formula import AND, OR, Formula, Var
from .normal_forms import (
    STAR,
    Cnf,
    Dnf,
    Literal,
    all_star,
    check_restriction,
    compose,
    eval_dnf,
    neg,
    pos,
    random_dnf,
    restrict,
    restrict_term,
)
from .trees import DecisionTree, Leaf, Query
from .truth import MAX_ORACLE_VARS, MAX_TABLE_VARS, TruthTable, is_subfunction, optimal_dt_depth, truth_table

__all__ = [
    "AND", "OR", "STAR", "Circuit", "CircuitBuilder", "CircuitMetrics", "Cnf", "DecisionTree", "Dnf",
    "Formula", "Gate", "Leaf", "Literal", "MAX_ORACLE_VARS", "MAX_TABLE_VARS", "Query", "TruthTable",
    "Var", "all_star", "check_restriction", "circuit_metrics", "compose", "dnf_to_circuit", "eval_dnf",
    "formula_to_circuit", "is_subfunction", "neg", "optimal_dt_depth", "pos", "random_dnf", "restrict",
    "restrict_term", "truth_table",
]
