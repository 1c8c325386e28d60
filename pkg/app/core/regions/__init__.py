"""
Rate-region builders: receiver polyhedra, superposition with rate-splitting,
binning with mutual covering, and literature regions.
"""

from app.core.regions.problem import ProblemSpec, ProblemSpecModel, RandomXPrime, parse_splits, random_problem_spec, split_pairs
from app.core.regions.receiver import (
    decoding_bound,
    intersect_receivers,
    receiver_polyhedron,
    receiver_polyhedron_all_subsets,
    receiver_rank_function,
)
from app.core.regions.superposition import (
    ExchangeCertificate,
    SplitRateMap,
    cone_generators,
    project_theorem1,
    random_split_map,
    split_to_exchange,
    theorem1_system,
    theorem2_region,
)
from app.core.regions.binning import (
    GammaTable,
    binning_joint,
    covering_region,
    covering_region_all_subsets,
    gamma,
    gamma_all_subsets_symbol,
    gamma_symbol,
    gamma_table,
    project_theorem4,
    random_binning_joint,
    theorem4_system,
)
from app.core.regions.known import (
    KNOWN_REGIONS,
    known_problem,
    known_region,
    marton_region,
    nair_elgamal_channel,
    nair_elgamal_instance,
)

__all__ = [
    "ProblemSpec",
    "ProblemSpecModel",
    "RandomXPrime",
    "parse_splits",
    "random_problem_spec",
    "decoding_bound",
    "intersect_receivers",
    "receiver_polyhedron",
    "receiver_polyhedron_all_subsets",
    "receiver_rank_function",
    "ExchangeCertificate",
    "SplitRateMap",
    "cone_generators",
    "project_theorem1",
    "random_split_map",
    "split_pairs",
    "split_to_exchange",
    "theorem1_system",
    "theorem2_region",
    "GammaTable",
    "binning_joint",
    "covering_region",
    "covering_region_all_subsets",
    "gamma",
    "gamma_all_subsets_symbol",
    "gamma_symbol",
    "gamma_table",
    "project_theorem4",
    "random_binning_joint",
    "theorem4_system",
    "KNOWN_REGIONS",
    "known_problem",
    "known_region",
    "marton_region",
    "nair_elgamal_channel",
    "nair_elgamal_instance",
]
