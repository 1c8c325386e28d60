"""
Finite distributions, Shannon measures and superposition-admitting tuples.
"""

from app.core.info.symbols import Q, X, label_of, u_name, u_names, y_name
from app.core.info.distribution import (
    JointDistribution,
    VariableUniverse,
    check_table_size,
    cond_mutual_information,
    entropy,
    mi_symbol,
)
from app.core.info.admissible import (
    AdmissibilityVerdict,
    AdmissibleSpec,
    assemble_joint,
    check_admissible,
    generation_law,
    label_distribution,
    random_admissible_spec,
    random_target_pmf,
)

__all__ = [
    "Q",
    "X",
    "label_of",
    "u_name",
    "u_names",
    "y_name",
    "JointDistribution",
    "VariableUniverse",
    "check_table_size",
    "cond_mutual_information",
    "entropy",
    "mi_symbol",
    "AdmissibilityVerdict",
    "AdmissibleSpec",
    "assemble_joint",
    "check_admissible",
    "generation_law",
    "label_distribution",
    "random_admissible_spec",
    "random_target_pmf",
]
