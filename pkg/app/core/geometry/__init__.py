"""
Exact rational polyhedra: symbolic entropy right-hand sides, Fourier-Motzkin
projection, cone sums, LP-based comparison and (contra-)polymatroid checks.
"""

from app.core.geometry.entropy_expr import EntropyExpr, MappingSource, as_source, format_term, parse_term, rationalize
from app.core.geometry.system import (
    Inequality,
    InequalitySystem,
    VariableName,
    nonnegativity,
    parse_variables,
    sort_variables,
)
from app.core.geometry.fme import REDUNDANCY_MODES, fm_eliminate, prune_rows, restrict_to_embedding
from app.core.geometry.cone import ConeGenerators, minkowski_sum_with_cone
from app.core.geometry.compare import (
    MembershipVerdict,
    RegionComparison,
    contained_in,
    evaluate,
    feasible_point,
    is_feasible,
    region_equal,
    remove_redundant,
    sample_vertices,
)
from app.core.geometry.matroid import CheckResult, contrapolymatroid_check, polymatroid_check

__all__ = [
    "EntropyExpr",
    "MappingSource",
    "as_source",
    "format_term",
    "parse_term",
    "rationalize",
    "Inequality",
    "InequalitySystem",
    "VariableName",
    "nonnegativity",
    "parse_variables",
    "sort_variables",
    "REDUNDANCY_MODES",
    "fm_eliminate",
    "prune_rows",
    "restrict_to_embedding",
    "ConeGenerators",
    "minkowski_sum_with_cone",
    "MembershipVerdict",
    "RegionComparison",
    "contained_in",
    "evaluate",
    "feasible_point",
    "is_feasible",
    "region_equal",
    "remove_redundant",
    "sample_vertices",
    "CheckResult",
    "contrapolymatroid_check",
    "polymatroid_check",
]
