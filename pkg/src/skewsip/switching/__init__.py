"""CanonicalDT, the theta encoding, bad-set audits and project-and-trim."""
from .badset import (
    BadSetReport,
    PslParams,
    SupportProfile,
    bad_set,
    bad_set_cnf,
    bound_is_monotone,
    canonical_dt_cnf,
    cnf_dual,
    decode_theta_cnf,
    encode_theta_cnf,
    psl_bound,
    psl_monte_carlo,
    random_instance_dnfs,
    search_u_width_violation,
    sipser_level_one_dnf,
)
from .canonical import CanonicalEngine, canonical_depth, canonical_dt, supp_satisfiable
from .theta import ThetaImage, decode_theta, encode_theta, expected_ratio, location_width, weight_ratio
from .trim import TrimReport, project_and_trim, project_and_trim_step, s_parameter

__all__ = [
    "BadSetReport", "CanonicalEngine", "PslParams", "SupportProfile", "ThetaImage", "TrimReport",
    "bad_set", "bad_set_cnf", "bound_is_monotone", "canonical_depth", "canonical_dt", "canonical_dt_cnf",
    "cnf_dual", "decode_theta", "decode_theta_cnf", "encode_theta", "encode_theta_cnf", "expected_ratio",
    "location_width", "project_and_trim", "project_and_trim_step", "psl_bound", "psl_monte_carlo",
    "random_instance_dnfs", "s_parameter", "search_u_width_violation", "sipser_level_one_dnf",
    "supp_satisfiable", "weight_ratio",
]
