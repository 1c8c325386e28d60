"""
Mutual covering and binning.

``gamma(G) = sum_{S in G} H(U_S | U_{parents of S}) - H(U_G)`` measures how far
the target law of U_G is from the law the recursive codebooks are generated
with. Covering succeeds when ``r(G) >= gamma(G)`` for every up-set G; the
binning system feeds those rows into superposition coding with an
arbitrary p(u_F).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence
import logging

import numpy as np
import pandas as pd

from app.config.settings import get_settings
from app.core.geometry.entropy_expr import EntropyExpr, as_source
from app.core.geometry.fme import fm_eliminate
from app.core.geometry.matroid import CheckResult, contrapolymatroid_check
from app.core.geometry.system import Inequality, InequalitySystem, VariableName, nonnegativity, sort_variables
from app.core.info.distribution import JointDistribution, check_table_size
from app.core.info.symbols import X, u_name, u_names, y_name
from app.core.order.labels import SubsetLabel, sorted_labels
from app.core.order.lattice import LatticeFamily, enumerate_up_sets, format_labelset, labelset_key
from app.core.order.superposition import SuperpositionOrder, max_up_subset
from app.core.regions.problem import ProblemSpec
from app.core.regions.receiver import intersect_receivers
from app.core.utils.error_handler import DimensionMismatchError, DomainError

logger = logging.getLogger(__name__)
settings = get_settings()


def _generation_sum(order: SuperpositionOrder, labels) -> EntropyExpr:
    """sum_{S in labels} H(U_S | U_{parents of S})."""
    total = EntropyExpr.zero()
    for s in sorted_labels(labels):
        parents = u_names(order.strictly_above(s))
        total = total + EntropyExpr.h(u_name(s), *parents) - EntropyExpr.h(*parents)
    return total


def gamma_symbol(order: SuperpositionOrder, G) -> EntropyExpr:
    """gamma(G) as an entropy expression; G must be an up-set of ``order``."""
    G = frozenset(G)
    if not order.is_up_set(G):
        raise DomainError(f"{format_labelset(G)} is not an up-set of {order}")
    return _generation_sum(order, G) - EntropyExpr.h(*u_names(G))


def gamma(dist, order: SuperpositionOrder, G) -> float:
    """gamma(G) in bits under ``dist`` (any entropy source)."""
    return gamma_symbol(order, G).evaluate(dist)


def gamma_all_subsets_symbol(order: SuperpositionOrder, G) -> EntropyExpr:
    """Covering bound of an arbitrary G: the generation sum runs over its largest up-subset only."""
    G = frozenset(G)
    return _generation_sum(order, max_up_subset(order, G)) - EntropyExpr.h(*u_names(G))


@dataclass
class GammaTable:
    """gamma on every up-set of ``lattice``."""

    lattice: LatticeFamily
    values: Dict[FrozenSet[SubsetLabel], float]

    def __getitem__(self, G) -> float:
        return self.values[frozenset(G)]

    def check(self, tol: float = None) -> CheckResult:
        return contrapolymatroid_check(self.lattice, self.values, tol)

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {"up_set": format_labelset(G), "size": len(G), "gamma": value}
            for G, value in sorted(self.values.items(), key=lambda kv: labelset_key(kv[0]))
        ]
        return pd.DataFrame(rows, columns=["up_set", "size", "gamma"])

    def to_json(self) -> dict:
        return {
            "order": self.lattice.base.to_json(),
            "gamma": {format_labelset(G): value for G, value in sorted(self.values.items(), key=lambda kv: labelset_key(kv[0]))},
        }


def gamma_table(dist, order: SuperpositionOrder) -> GammaTable:
    lattice = enumerate_up_sets(order)
    source = as_source(dist)
    values = {G: gamma_symbol(order, G).evaluate(source) for G in lattice}
    return GammaTable(lattice, values)


def _covering_rows(dist, order: SuperpositionOrder, families, bound, tol: float) -> List[Inequality]:
    rows = []
    dropped = 0
    source = as_source(dist) if dist is not None else None
    for G in families:
        rhs = bound(order, G)
        if source is not None:
            value = rhs.evaluate_exact(source)
            if value <= tol:
                dropped += 1
                continue
            rhs = EntropyExpr.const(value)
        rows.append(Inequality.geq({VariableName.covering(s): 1 for s in G}, rhs, f"covering G={format_labelset(G)}"))
    if dropped:
        logger.debug(f"{dropped} covering rows with gamma <= {tol} left to nonnegativity")
    return rows


def _labels(order: SuperpositionOrder, E) -> Sequence[SubsetLabel]:
    if E is None:
        return order.labels
    labels = sorted_labels(SubsetLabel.parse(s) for s in E)
    if set(labels) != set(order.labels):
        raise DimensionMismatchError(f"order lives on {order.family}, covering asked for {format_labelset(labels)}")
    return labels


def covering_region(dist, order: SuperpositionOrder, E=None, tol: float = None) -> InequalitySystem:
    """
    Rows ``r(G) >= gamma(G)`` for every nonempty up-set G, then ``r >= 0``.

    ``dist=None`` keeps gamma symbolic. With a distribution the rows are bound
    and those with gamma <= ``tol`` are dropped (nonnegativity covers them).
    """
    tol = settings.NUMERIC_TOLERANCE if tol is None else tol
    labels = _labels(order, E)
    families = enumerate_up_sets(order).nonempty()
    rows = _covering_rows(dist, order, families, gamma_symbol, tol)
    variables = [VariableName.covering(s) for s in labels]
    rows.extend(nonnegativity(variables))
    return InequalitySystem.of(variables, rows)


def covering_region_all_subsets(dist, order: SuperpositionOrder, E=None, tol: float = None) -> InequalitySystem:
    """Covering rows for every nonempty subset G, with the bound of :func:`gamma_all_subsets_symbol`."""
    tol = settings.NUMERIC_TOLERANCE if tol is None else tol
    labels = _labels(order, E)
    families = [frozenset(c) for n in range(1, len(labels) + 1) for c in combinations(labels, n)]
    rows = _covering_rows(dist, order, families, gamma_all_subsets_symbol, tol)
    variables = [VariableName.covering(s) for s in labels]
    rows.extend(nonnegativity(variables))
    return InequalitySystem.of(variables, rows)


def theorem4_system(spec: ProblemSpec, include_excess_rows: bool = False) -> InequalitySystem:
    """
    Superposition coding with binning over R_E, splits, Rhat_F and Rtilde_F.

    Time-sharing is dropped. Rows: split and reconstruction equalities, the
    binning rows ``sum_{S in G} (Rtilde_S - Rhat_S) >= gamma(G)`` over the
    nonempty up-sets of (F, order), the receiver polyhedra on Rtilde, and
    nonnegativity. ``include_excess_rows`` adds ``Rtilde_S >= Rhat_S``.
    """
    constant_q = replace(spec, time_sharing=False)
    splits = {p: VariableName.split(*p) for p in spec.split_pairs()}
    rates = [VariableName.rate(s) for s in spec.E]
    rhat = {t: VariableName.rhat(t) for t in spec.F}
    rtilde = {t: VariableName.rtilde(t) for t in spec.F}

    rows: List[Inequality] = []
    for s in spec.E:
        coeffs = {VariableName.rate(s): 1}
        coeffs.update({var: -1 for (lo, _), var in splits.items() if lo == s})
        rows.extend(Inequality.equality(coeffs, 0, f"split R_{s.tag}"))
    for t in spec.F:
        coeffs = {rhat[t]: 1}
        coeffs.update({var: -1 for (_, hi), var in splits.items() if hi == t})
        rows.extend(Inequality.equality(coeffs, 0, f"reconstruct Rhat_{t.tag}"))

    for G in enumerate_up_sets(spec.order).nonempty():
        coeffs = {}
        for s in G:
            coeffs[rtilde[s]] = 1
            coeffs[rhat[s]] = -1
        rows.append(Inequality.geq(coeffs, gamma_symbol(spec.order, G), f"binning G={format_labelset(G)}"))

    rows.extend(intersect_receivers(constant_q, VariableName.rtilde).constraint_rows())
    if include_excess_rows:
        rows.extend(Inequality.geq({rtilde[t]: 1, rhat[t]: -1}, 0, f"excess {t.tag}") for t in spec.F)

    rows.extend(nonnegativity(splits.values()))
    rows.extend(nonnegativity(rates))
    rows.extend(nonnegativity(rhat.values()))
    rows.extend(nonnegativity(rtilde.values()))
    variables = rates + list(splits.values()) + list(rhat.values()) + list(rtilde.values())
    system = InequalitySystem.of(variables, rows)
    logger.debug(f"binning system for {spec.describe()}: {len(system.rows)} rows over {len(system.variables)} variables")
    return system


def project_theorem4(spec: ProblemSpec, assignment=None, redundancy: Optional[str] = None,
                     include_excess_rows: bool = False) -> InequalitySystem:
    """Eliminate splits, Rhat and Rtilde from :func:`theorem4_system`."""
    system = theorem4_system(spec, include_excess_rows)
    if assignment is not None:
        system = system.bind(assignment)
    mode = redundancy or ("exact" if assignment is not None else "syntactic")
    targets = [v for v in system.variables if v.kind != "rate"]
    return fm_eliminate(system, targets, mode)


def binning_joint(labels: Sequence[SubsetLabel], pmf: np.ndarray, input_map: np.ndarray, channel: np.ndarray) -> JointDistribution:
    """
    Joint over (U_F, X, Y_1..Y_K) for an arbitrary p(u_F), ``X = input_map[u_F]``
    and ``channel[x, y_1, ..., y_K]``.
    """
    labels = sorted_labels(labels)
    pmf = np.asarray(pmf, dtype=float)
    input_map = np.asarray(input_map, dtype=int)
    channel = np.asarray(channel, dtype=float)
    if pmf.ndim != len(labels) or input_map.shape != pmf.shape:
        raise DimensionMismatchError(f"p(u_F) has shape {pmf.shape}, input map {input_map.shape}, for {len(labels)} labels")
    if input_map.min() < 0 or input_map.max() >= channel.shape[0]:
        raise DimensionMismatchError(f"input map leaves the channel input alphabet of size {channel.shape[0]}")
    K = channel.ndim - 1
    shape = pmf.shape + channel.shape
    check_table_size(shape, "binning joint")
    joint = (pmf[..., None] * np.eye(channel.shape[0])[input_map])
    joint = joint.reshape(joint.shape + (1,) * K) * channel.reshape((1,) * pmf.ndim + channel.shape)
    symbols = tuple(u_names(labels)) + (X,) + tuple(y_name(j) for j in range(1, K + 1))
    return JointDistribution.from_table(symbols, joint)


def random_binning_joint(labels: Sequence[SubsetLabel], K: int, rng: np.random.Generator, max_alphabet: int = 2,
                         x_alphabet: Optional[int] = None, concentration: float = 1.0) -> JointDistribution:
    """Correlated p(u_F), random deterministic X and a random K-receiver channel."""
    labels = sorted_labels(labels)
    shape = tuple(int(rng.integers(2, max_alphabet + 1)) for _ in labels)
    pmf = rng.dirichlet(np.full(int(np.prod(shape)), concentration)).reshape(shape)
    x_alphabet = x_alphabet or max_alphabet
    input_map = rng.integers(0, x_alphabet, size=shape)
    y_shape = tuple(int(rng.integers(2, max_alphabet + 1)) for _ in range(K))
    channel = rng.dirichlet(np.full(int(np.prod(y_shape)), concentration), size=x_alphabet).reshape((x_alphabet,) + y_shape)
    return binning_joint(labels, pmf, input_map, channel)
