"""
Superposition coding with rate-splitting.

Two equivalent descriptions of the same region of R_E:

- the split-rate system: every message M_S is split into sub-messages
  ``r_{S->S'}`` relabeled to supersets S' in F, the reconstructed rates of F
  must be decodable by every receiver, and the splits are projected away;
- the exchange form: the intersection of receiver polyhedra over R_F, plus the
  cone of rate transfers ``e_S - e_S'``, cut by nonnegativity with the rates
  of F minus E pinned to 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import AbstractSet, Dict, FrozenSet, List, Mapping, Optional
import logging

import numpy as np

from app.core.geometry.cone import ConeGenerators, minkowski_sum_with_cone
from app.core.geometry.fme import fm_eliminate, prune_rows, restrict_to_embedding
from app.core.geometry.system import Inequality, InequalitySystem, VariableName, nonnegativity, sort_variables
from app.core.order.labels import MessageIndexFamily, SubsetLabel
from app.core.regions.problem import Pair, ProblemSpec, split_pairs
from app.core.regions.receiver import intersect_receivers
from app.core.utils.error_handler import DomainError

logger = logging.getLogger(__name__)

def _resolve_mode(redundancy: Optional[str], bound: bool) -> str:
    if redundancy is not None:
        return redundancy
    return "exact" if bound else "syntactic"


def theorem1_system(spec: ProblemSpec) -> InequalitySystem:
    """
    Split-rate system over R_E and the split variables.

    Rows: ``R_S = sum_{S'} r_{S->S'}`` for S in E, the receiver polyhedra with
    each reconstructed rate ``Rhat_{S'} = sum_{S} r_{S->S'}`` substituted, then
    nonnegativity of splits and rates.
    """
    splits = {p: VariableName.split(*p) for p in spec.split_pairs()}
    rates = [VariableName.rate(s) for s in spec.E]

    rows: List[Inequality] = []
    for s in spec.E:
        coeffs = {VariableName.rate(s): 1}
        for (lo, hi), var in splits.items():
            if lo == s:
                coeffs[var] = -1
        rows.extend(Inequality.equality(coeffs, 0, f"split R_{s.tag}"))

    reconstruction = {
        t: {var: 1 for (lo, hi), var in splits.items() if hi == t}
        for t in spec.F
    }
    for row in intersect_receivers(spec, VariableName.rhat).constraint_rows():
        for t in spec.F:
            row = row.substitute(VariableName.rhat(t), reconstruction[t])
        if row.is_vacuous():
            continue
        rows.append(row)

    rows.extend(nonnegativity(splits.values()))
    rows.extend(nonnegativity(rates))
    system = InequalitySystem.of(rates + list(splits.values()), rows)
    logger.debug(f"split-rate system for {spec.describe()}: {len(system.rows)} rows, {len(splits)} splits")
    return system


def project_theorem1(spec: ProblemSpec, assignment=None, redundancy: Optional[str] = None) -> InequalitySystem:
    """
    Eliminate the splits from :func:`theorem1_system`.

    With an ``assignment`` the right-hand sides are bound first and the
    projection runs exact LP pruning unless ``redundancy`` says otherwise.
    """
    system = theorem1_system(spec)
    if assignment is not None:
        system = system.bind(assignment)
    splits = [v for v in system.variables if v.kind == "split"]
    return fm_eliminate(system, splits, _resolve_mode(redundancy, assignment is not None))


def cone_generators(E: MessageIndexFamily, F: MessageIndexFamily, allowed: Optional[AbstractSet[Pair]] = None) -> ConeGenerators:
    """One generator ``e_S - e_S'`` per legal proper split S -> S' (see :func:`split_pairs`)."""
    if not E.issubset(F):
        raise DomainError(f"E = {E} is not contained in F = {F}")
    variables = sort_variables(VariableName.rate(s) for s in F)
    pairs = [(s, t) for s, t in split_pairs(E, F, allowed) if s != t]
    return ConeGenerators.from_pairs(variables, pairs)


def theorem2_region(spec: ProblemSpec, assignment=None, redundancy: Optional[str] = None) -> InequalitySystem:
    """
    Exchange form over R_E: ``(intersection of receiver polyhedra + cone) cut by R >= 0``,
    with the rates of F minus E set to 0.
    """
    mode = _resolve_mode(redundancy, assignment is not None)
    P = intersect_receivers(spec, VariableName.rate)
    if assignment is not None:
        P = P.bind(assignment)
    summed = minkowski_sum_with_cone(P, cone_generators(spec.E, spec.F, spec.splits), mode)
    rates = [VariableName.rate(s) for s in spec.F]
    summed = summed.with_rows(prune_rows(list(summed.rows) + nonnegativity(rates), mode))
    region = restrict_to_embedding(summed, [VariableName.rate(s) for s in spec.extra_labels])
    logger.info(f"exchange-form region: {len(region.rows)} rows over {len(region.variables)} rates")
    return region


@dataclass
class SplitRateMap:
    """Nonnegative split rates ``r_{S->S'}`` for the legal pairs of (E, F), restricted by ``allowed``."""

    E: MessageIndexFamily
    F: MessageIndexFamily
    splits: Dict[Pair, Fraction] = field(default_factory=dict)
    allowed: Optional[FrozenSet[Pair]] = None

    def __post_init__(self):
        legal = set(split_pairs(self.E, self.F, self.allowed))
        clean = {}
        for pair, value in self.splits.items():
            if pair not in legal:
                raise DomainError(f"split {pair[0]}->{pair[1]} is not legal for E = {self.E}, F = {self.F}")
            value = Fraction(value)
            if value < 0:
                raise DomainError(f"split {pair[0]}->{pair[1]} has negative rate {value}")
            clean[pair] = value
        self.splits = clean

    def rate(self, pair: Pair) -> Fraction:
        return self.splits.get(pair, Fraction(0))

    def rates(self) -> Dict[SubsetLabel, Fraction]:
        """Message rates over F: ``R_S = sum_{S'} r_{S->S'}`` on E and 0 on F minus E."""
        out = {t: Fraction(0) for t in self.F}
        for (lo, _), value in self.splits.items():
            out[lo] += value
        return out

    def reconstructed(self) -> Dict[SubsetLabel, Fraction]:
        """Decoded rates over F: ``Rhat_{S'} = sum_{S} r_{S->S'}``."""
        out = {t: Fraction(0) for t in self.F}
        for (_, hi), value in self.splits.items():
            out[hi] += value
        return out

    def as_point(self) -> Dict[VariableName, Fraction]:
        point = {VariableName.rate(s): v for s, v in self.rates().items() if s in self.E}
        point.update({VariableName.split(*p): self.rate(p) for p in split_pairs(self.E, self.F, self.allowed)})
        return point


def random_split_map(E: MessageIndexFamily, F: MessageIndexFamily, rng: np.random.Generator,
                     scale: int = 8, density: float = 0.6, allowed: Optional[FrozenSet[Pair]] = None) -> SplitRateMap:
    """Random rational splits with denominators dividing ``scale``."""
    splits = {}
    for pair in split_pairs(E, F, allowed):
        if rng.random() < density:
            splits[pair] = Fraction(int(rng.integers(0, 2 * scale + 1)), scale)
    return SplitRateMap(E, F, splits, allowed)


@dataclass
class ExchangeCertificate:
    """``delta == sum_i multipliers[pair_i] * (e_S - e_S')``."""

    delta: Dict[SubsetLabel, Fraction]
    multipliers: Dict[Pair, Fraction]

    def combination(self, F: MessageIndexFamily) -> Dict[SubsetLabel, Fraction]:
        out = {t: Fraction(0) for t in F}
        for (lo, hi), lam in self.multipliers.items():
            out[lo] += lam
            out[hi] -= lam
        return out

    def verify(self, F: MessageIndexFamily) -> bool:
        return all(v >= 0 for v in self.multipliers.values()) and self.combination(F) == self.delta


def split_to_exchange(splits: SplitRateMap, E: MessageIndexFamily = None, F: MessageIndexFamily = None) -> ExchangeCertificate:
    """
    Exchange vector of a split map: ``delta = R - Rhat`` over F, with the strict
    splits as nonnegative multipliers of the cone generators.
    """
    E = splits.E if E is None else E
    F = splits.F if F is None else F
    if E.label_set() != splits.E.label_set() or F.label_set() != splits.F.label_set():
        raise DomainError("split map was built for different (E, F)")
    delta = {t: Fraction(0) for t in F}
    multipliers = {}
    for (lo, hi), value in splits.splits.items():
        if lo == hi or value == 0:
            continue
        delta[lo] += value
        delta[hi] -= value
        multipliers[(lo, hi)] = value
    return ExchangeCertificate(delta, multipliers)


def embed_rates(values: Mapping[SubsetLabel, Fraction], labels) -> Dict[VariableName, Fraction]:
    return {VariableName.rate(s): Fraction(values.get(s, 0)) for s in labels}
