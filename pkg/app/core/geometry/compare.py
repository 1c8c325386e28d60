"""
Numeric questions about systems: membership, exact LP containment and
equality, redundancy removal and vertex sampling.

Every LP runs on rationalized right-hand sides; floats only enter through
the entropy assignment and the explicit tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple
import logging

from tqdm import tqdm

from app.config.settings import get_settings
from app.core.geometry.entropy_expr import EntropyExpr, Number
from app.core.geometry.simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, LPResult, LinearProgram
from app.core.geometry.system import Inequality, InequalitySystem, VariableName, sort_variables
from app.core.utils.error_handler import DimensionMismatchError, EvaluationError

logger = logging.getLogger(__name__)
settings = get_settings()


def _constant(row: Inequality) -> Fraction:
    if not row.rhs.is_constant():
        raise EvaluationError(f"row '{row}' still has a symbolic right-hand side; bind an assignment first")
    return row.rhs.constant


def _lp_over(rows: Sequence[Inequality], variables: Sequence[VariableName], objective: Mapping[VariableName, Number]) -> LPResult:
    """maximize objective subject to rows; bound rows become sign restrictions."""
    index = {v: i for i, v in enumerate(variables)}
    nonneg = [False] * len(variables)
    A, b = [], []
    for row in rows:
        if row.is_bound():
            nonneg[index[row.coeffs[0][0]]] = True
            continue
        vec = [Fraction(0)] * len(variables)
        for v, c in row.coeffs:
            vec[index[v]] = c
        A.append(vec)
        b.append(_constant(row))
    c = [Fraction(0)] * len(variables)
    for v, k in objective.items():
        c[index[v]] = Fraction(k)
    return LinearProgram(c, A, b, nonneg).solve()


def _point(variables: Sequence[VariableName], x: Sequence[Fraction]) -> Dict[VariableName, Fraction]:
    return {v: x[i] for i, v in enumerate(variables)}


def _numeric(system: InequalitySystem, assignment) -> InequalitySystem:
    if system.is_numeric():
        return system
    if assignment is None:
        raise EvaluationError("system has symbolic right-hand sides and no assignment was given")
    return system.bind(assignment)


def _row_exceeds(rows, variables, row: Inequality, slack: Fraction) -> Tuple[bool, Optional[Dict[VariableName, Fraction]], Fraction]:
    """Can ``row`` be violated by more than ``slack`` inside ``rows``? Returns (violated, witness, max)."""
    bound = _constant(row)
    capped = list(rows) + [Inequality(row.coeffs, EntropyExpr.const(bound + 1 + slack), "cap")]
    result = _lp_over(capped, variables, row.coeff_map)
    if result.status == INFEASIBLE:
        return False, None, None
    if result.value > bound + slack:
        return True, _point(variables, result.x), result.value
    return False, None, result.value


@dataclass
class MembershipVerdict:
    member: bool
    violations: Tuple[Tuple[str, float], ...] = ()

    def __bool__(self) -> bool:
        return self.member


def evaluate(system: InequalitySystem, assignment, point: Mapping[VariableName, Number], tol: float = None) -> MembershipVerdict:
    """
    Membership of ``point`` within additive tolerance ``tol``.

    Args:
        system: rows with symbolic or constant right-hand sides
        assignment: entropy source for the symbols (may be None for numeric systems)
        point: coordinate for every variable used by a row
        tol: additive slack, default NUMERIC_TOLERANCE, applied to each row
            scaled so its largest |coefficient| is 1
    """
    tol = settings.NUMERIC_TOLERANCE if tol is None else tol
    if isinstance(point, Mapping):
        point = {VariableName.parse(k) if isinstance(k, str) else k: v for k, v in point.items()}
    violations = []
    for row in system.rows:
        lhs = row.lhs_value(point)
        if row.rhs.is_constant():
            rhs = float(row.rhs.constant)
        elif assignment is None:
            raise EvaluationError(f"row '{row}' needs an entropy assignment")
        else:
            rhs = row.rhs.evaluate(assignment)
        excess = (lhs - rhs) / float(row.max_coefficient() or 1)
        if excess > tol:
            violations.append((row.render(), excess))
    return MembershipVerdict(not violations, tuple(violations))


@dataclass
class RegionComparison:
    """Outcome of :func:`region_equal`; ``witness`` lies in one region and violates ``violated`` of the other."""

    equal: bool
    witness: Optional[Dict[VariableName, Fraction]] = None
    violated: Optional[str] = None
    direction: Optional[str] = None
    excess: Optional[Fraction] = None

    def __bool__(self) -> bool:
        return self.equal

    def to_json(self) -> dict:
        return {
            "equal": self.equal,
            "direction": self.direction,
            "violated": self.violated,
            "excess": None if self.excess is None else float(self.excess),
            "witness": None if self.witness is None else {str(v): float(x) for v, x in self.witness.items()},
        }


def contained_in(inner: InequalitySystem, outer: InequalitySystem, tol: float = None) -> RegionComparison:
    """
    Exact test of ``inner`` inside ``outer`` for numeric systems.

    Each row of ``outer`` is scaled to largest |coefficient| 1 before its
    excess is compared with ``tol``, so the verdict does not depend on how a
    row happens to be scaled. The reported ``excess`` is in that unit scale.
    """
    tol = Fraction(settings.NUMERIC_TOLERANCE if tol is None else tol)
    variables = sort_variables(set(inner.variables) | set(outer.variables))
    if not is_feasible(inner):
        return RegionComparison(True)
    for row in outer.rows:
        if row.is_vacuous():
            continue
        unit = row.unit_scaled()
        violated, witness, value = _row_exceeds(inner.rows, variables, unit, tol)
        if violated:
            return RegionComparison(False, witness, row.render(), excess=value - _constant(unit))
    return RegionComparison(True)


def is_feasible(system: InequalitySystem) -> bool:
    variables = sort_variables(system.variables)
    return _lp_over(system.rows, variables, {}).status != INFEASIBLE


def feasible_point(system: InequalitySystem) -> Optional[Dict[VariableName, Fraction]]:
    variables = sort_variables(system.variables)
    result = _lp_over(system.rows, variables, {})
    return None if result.status == INFEASIBLE else _point(variables, result.x)


def region_equal(A: InequalitySystem, B: InequalitySystem, assignment=None, tol: float = None) -> RegionComparison:
    """
    Decide whether two systems describe the same polyhedron under ``assignment``.

    Each row of A is maximized over B and vice versa by exact LP. On failure the
    returned witness is a point of one region that breaks a row of the other.
    """
    if set(A.variables) != set(B.variables):
        raise DimensionMismatchError(
            f"systems range over different variables: {sorted(map(str, A.variables))} vs {sorted(map(str, B.variables))}"
        )
    a = _numeric(A, assignment)
    b = _numeric(B, assignment)
    feas_a, feas_b = is_feasible(a), is_feasible(b)
    if not feas_a and not feas_b:
        return RegionComparison(True)
    if feas_a != feas_b:
        nonempty = a if feas_a else b
        return RegionComparison(False, feasible_point(nonempty), "empty region",
                                "A_not_in_B" if feas_a else "B_not_in_A")

    forward = contained_in(b, a, tol)
    if not forward:
        forward.direction = "B_not_in_A"
        logger.info(f"regions differ: point of B violates '{forward.violated}' of A")
        return forward
    backward = contained_in(a, b, tol)
    if not backward:
        backward.direction = "A_not_in_B"
        logger.info(f"regions differ: point of A violates '{backward.violated}' of B")
        return backward
    return RegionComparison(True)


def _dedupe(rows: Sequence[Inequality]) -> List[int]:
    seen = set()
    keep = []
    for i, row in enumerate(rows):
        if row.is_vacuous():
            continue
        norm = row.normalized()
        key = (norm.coeffs, norm.rhs)
        if key in seen:
            continue
        seen.add(key)
        keep.append(i)
    return keep


def irredundant_indices(rows: Sequence[Inequality], variables: Sequence[VariableName]) -> List[int]:
    """Indices of an irredundant subsystem of numeric ``rows``, scanned in order."""
    keep = _dedupe(rows)
    variables = sort_variables(variables)
    if _lp_over([rows[i] for i in keep], variables, {}).status == INFEASIBLE:
        infeasible = [i for i in keep if rows[i].is_infeasible()]
        return infeasible[:1] or keep
    for i in tqdm(list(keep), desc="redundancy", disable=not settings.SHOW_PROGRESS):
        others = [rows[k] for k in keep if k != i]
        violated, _, _ = _row_exceeds(others, variables, rows[i], Fraction(0))
        if not violated:
            keep.remove(i)
    return keep


def remove_redundant(system: InequalitySystem, assignment=None) -> InequalitySystem:
    """
    Irredundant subsystem defining the same set.

    The tests run on rationalized values (``assignment`` for symbolic rows) but
    the returned rows keep their original, possibly symbolic, right-hand sides.
    """
    numeric = _numeric(system, assignment)
    keep = irredundant_indices(numeric.rows, numeric.variables)
    logger.info(f"redundancy removal: {len(system.rows)} -> {len(keep)} rows")
    return system.with_rows(system.rows[i] for i in keep)


def sample_vertices(system: InequalitySystem, directions: Sequence[Mapping[VariableName, Number]], assignment=None) -> List[Dict[VariableName, Fraction]]:
    """Maximize each direction with the exact LP; bounded optima are vertices of the region."""
    numeric = _numeric(system, assignment)
    variables = sort_variables(numeric.variables)
    points = []
    for direction in directions:
        result = _lp_over(numeric.rows, variables, direction)
        if result.status == OPTIMAL:
            points.append(_point(variables, result.x))
        elif result.status == UNBOUNDED:
            logger.debug(f"direction {dict((str(k), v) for k, v in direction.items())} is unbounded")
    return points
