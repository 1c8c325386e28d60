"""
Minkowski sums of a polyhedron with a finitely generated cone.

The sum is written as a lifted system ``R = Rhat + sum_i lam_i g_i`` with
``lam >= 0`` and ``Rhat`` in the polyhedron; projecting out ``Rhat`` and the
multipliers gives the H-representation of ``P + cone(g_1, ..., g_m)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple
import logging

from app.core.geometry.fme import fm_eliminate
from app.core.geometry.system import Inequality, InequalitySystem, VariableName, sort_variables
from app.core.order.labels import SubsetLabel
from app.core.utils.error_handler import DimensionMismatchError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConeGenerators:
    """
    Generators ``e_{S->S'}`` over rate variables: +1 at R_S, -1 at R_S', S a proper subset of S'.

    ``pairs[i]`` is the (S, S') pair of ``vectors[i]``.
    """

    variables: Tuple[VariableName, ...]
    vectors: Tuple[Tuple[Fraction, ...], ...]
    pairs: Tuple[Tuple[SubsetLabel, SubsetLabel], ...]

    def __post_init__(self):
        if len(self.vectors) != len(self.pairs):
            raise DimensionMismatchError("one (S, S') pair is needed per generator")
        index = {v: i for i, v in enumerate(self.variables)}
        for vec, (lo, hi) in zip(self.vectors, self.pairs):
            if len(vec) != len(self.variables):
                raise DimensionMismatchError(f"generator {lo}->{hi} has {len(vec)} entries for {len(self.variables)} variables")
            if not lo.is_proper_subset(hi):
                raise DomainError(f"generator {lo}->{hi} needs {lo} to be a proper subset of {hi}")
            lo_var, hi_var = VariableName.rate(lo), VariableName.rate(hi)
            if lo_var not in index or hi_var not in index:
                raise DimensionMismatchError(f"generator {lo}->{hi} refers to rates outside {list(map(str, self.variables))}")
            expected = [Fraction(0)] * len(self.variables)
            expected[index[lo_var]] = Fraction(1)
            expected[index[hi_var]] = Fraction(-1)
            if list(vec) != expected:
                raise DomainError(f"generator {lo}->{hi} is not of the form e_S - e_S'")

    @classmethod
    def from_pairs(cls, variables: Sequence[VariableName], pairs: Iterable[Tuple[SubsetLabel, SubsetLabel]]) -> "ConeGenerators":
        variables = tuple(variables)
        index = {v: i for i, v in enumerate(variables)}
        vectors, kept = [], []
        for lo, hi in pairs:
            vec = [Fraction(0)] * len(variables)
            for var, sign in ((VariableName.rate(lo), 1), (VariableName.rate(hi), -1)):
                if var not in index:
                    raise DimensionMismatchError(f"generator {lo}->{hi} refers to {var}, which is not a rate of the system")
                vec[index[var]] = Fraction(sign)
            vectors.append(tuple(vec))
            kept.append((lo, hi))
        return cls(variables, tuple(vectors), tuple(kept))

    def __len__(self) -> int:
        return len(self.vectors)

    def as_maps(self) -> List[Dict[VariableName, Fraction]]:
        return [{v: c for v, c in zip(self.variables, vec) if c} for vec in self.vectors]

    def to_json(self) -> dict:
        return {"generators": [[lo.to_json(), hi.to_json()] for lo, hi in self.pairs]}


def minkowski_sum_with_cone(P: InequalitySystem, C: ConeGenerators, redundancy: str = "syntactic") -> InequalitySystem:
    """
    H-representation of ``P + cone(C)`` over the same variables as P.

    Each rate ``R`` of P is rewritten as ``R - sum_i lam_i g_i[R]``, the
    multipliers are declared nonnegative and then projected away.
    """
    if set(C.variables) != set(P.variables):
        raise DimensionMismatchError(
            f"cone lives on {sorted(map(str, C.variables))}, polyhedron on {sorted(map(str, P.variables))}"
        )
    if not len(C):
        return P

    multipliers = [VariableName.multiplier(lo, hi) for lo, hi in C.pairs]
    directions = C.as_maps()
    rows = []
    for row in P.rows:
        # <a, R - sum lam g> <= b
        coeffs = dict(row.coeffs)
        for lam, g in zip(multipliers, directions):
            weight = sum((c * g.get(v, Fraction(0)) for v, c in row.coeffs), Fraction(0))
            if weight:
                coeffs[lam] = coeffs.get(lam, Fraction(0)) - weight
        rows.append(Inequality.leq(coeffs, row.rhs, row.note))
    rows.extend(Inequality.nonnegative(lam) for lam in multipliers)

    lifted = InequalitySystem(sort_variables(list(P.variables) + multipliers), tuple(rows))
    logger.debug(f"Minkowski lift: {len(lifted.rows)} rows, {len(multipliers)} cone multipliers")
    projected = fm_eliminate(lifted, multipliers, redundancy)
    return InequalitySystem(P.variables, projected.rows)
