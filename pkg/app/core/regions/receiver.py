"""
Per-receiver decoding polyhedra.

Receiver j decodes every label in its window W_j. For each nonempty down-set
B of the order induced on W_j the rates of B are bounded by
``I(U_B; Y_j | U_{W_j minus B}, Q)``; these rank values form a polymatroid
on the down-set lattice.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Dict, FrozenSet, Tuple
import logging

from app.core.geometry.entropy_expr import EntropyExpr, as_source
from app.core.geometry.system import Inequality, InequalitySystem, VariableName, nonnegativity, sort_variables
from app.core.info.distribution import mi_symbol
from app.core.info.symbols import u_names, y_name
from app.core.order.labels import SubsetLabel, receiver_window
from app.core.order.lattice import LatticeFamily, enumerate_down_sets, format_labelset
from app.core.regions.problem import ProblemSpec

logger = logging.getLogger(__name__)

RateFactory = Callable[[SubsetLabel], VariableName]


def decoding_bound(spec: ProblemSpec, j: int, B, window) -> EntropyExpr:
    """I(U_B; Y_j | U_{window minus B}[, Q])."""
    B = frozenset(B)
    rest = frozenset(window) - B
    return mi_symbol(u_names(B), [y_name(j)], set(u_names(rest)) | spec.conditioning)


def receiver_polyhedron(spec: ProblemSpec, j: int, variable: RateFactory = VariableName.rhat) -> InequalitySystem:
    """
    Decoding constraints of receiver ``j`` over the rates of F.

    Args:
        spec: problem specification
        j: receiver index in [1:K]
        variable: rate naming, ``VariableName.rhat`` by default

    Returns:
        One row per nonempty down-set of the induced order on W_j, then
        nonnegativity of every F-rate. Rates outside W_j appear only there.
    """
    window = receiver_window(spec.F, j)
    variables = [variable(s) for s in spec.F]
    rows = []
    if len(window):
        lattice = enumerate_down_sets(spec.order, window.labels)
        for B in lattice.nonempty():
            rows.append(Inequality.leq(
                {variable(s): 1 for s in B},
                decoding_bound(spec, j, B, window.labels),
                f"receiver {j} B={format_labelset(B)}",
            ))
    rows.extend(nonnegativity(variables))
    return InequalitySystem(sort_variables(variables), tuple(rows))


def receiver_polyhedron_all_subsets(spec: ProblemSpec, j: int, variable: RateFactory = VariableName.rhat) -> InequalitySystem:
    """
    The unreduced decoding constraints: a row for every nonempty B in W_j,
    bounded by ``I(U_C; Y_j | U_{W_j minus C}, Q)`` where C is the down-closure of B in W_j.
    """
    window = receiver_window(spec.F, j)
    induced = spec.order.restrict(window.labels) if len(window) else None
    variables = [variable(s) for s in spec.F]
    rows = []
    labels = window.labels
    for size in range(1, len(labels) + 1):
        for B in combinations(labels, size):
            closure = induced.down_closure(B)
            rows.append(Inequality.leq(
                {variable(s): 1 for s in B},
                decoding_bound(spec, j, closure, labels),
                f"receiver {j} B={format_labelset(B)} closure={format_labelset(closure)}",
            ))
    rows.extend(nonnegativity(variables))
    return InequalitySystem(sort_variables(variables), tuple(rows))


def intersect_receivers(spec: ProblemSpec, variable: RateFactory = VariableName.rhat, all_subsets: bool = False) -> InequalitySystem:
    """Intersection over all receivers; nonnegativity rows appear once."""
    build = receiver_polyhedron_all_subsets if all_subsets else receiver_polyhedron
    variables = [variable(s) for s in spec.F]
    rows = []
    for j in range(1, spec.K + 1):
        rows.extend(build(spec, j, variable).constraint_rows())
    rows.extend(nonnegativity(variables))
    return InequalitySystem(sort_variables(variables), tuple(rows))


def receiver_rank_function(spec: ProblemSpec, j: int, assignment=None) -> Tuple[LatticeFamily, Dict[FrozenSet[SubsetLabel], float]]:
    """
    The down-set lattice of W_j and the values ``B -> I(U_B; Y_j | U_{W_j minus B}, Q)``.

    ``assignment`` defaults to the spec's own entropy source.
    """
    window = receiver_window(spec.F, j)
    source = as_source(assignment if assignment is not None else spec.assignment)
    lattice = enumerate_down_sets(spec.order, window.labels)
    values = {B: decoding_bound(spec, j, B, window.labels).evaluate(source) for B in lattice}
    return lattice, values
