"""
Desk-scale Monte-Carlo simulation of recursive mutual covering.
"""

from app.core.covering.experiment import CoveringExperiment, covering_experiment
from app.core.covering.codebook import (
    CodebookSet,
    exhaustive_joint_typicality,
    generation_conditionals,
    is_jointly_typical,
)
from app.core.covering.simulate import (
    CoveringEstimate,
    codebook_set,
    covering_ladder,
    empirical_conditionals,
    run_covering,
    wilson_interval,
)

__all__ = [
    "CoveringExperiment",
    "covering_experiment",
    "CodebookSet",
    "exhaustive_joint_typicality",
    "generation_conditionals",
    "is_jointly_typical",
    "CoveringEstimate",
    "codebook_set",
    "covering_ladder",
    "empirical_conditionals",
    "run_covering",
    "wilson_interval",
]
