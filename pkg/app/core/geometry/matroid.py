"""
Polymatroid and contra-polymatroid checks for set functions on a lattice family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, FrozenSet, List, Mapping, Union
import logging

from app.config.settings import get_settings
from app.core.order.lattice import LatticeFamily, format_labelset
from app.core.utils.error_handler import DomainError, EvaluationError

logger = logging.getLogger(__name__)
settings = get_settings()

SetFunction = Union[Mapping[FrozenSet, float], Callable[[FrozenSet], float]]


@dataclass
class CheckResult:
    passed: bool
    reasons: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {"passed": self.passed, "reasons": list(self.reasons)}


def _values(lattice: LatticeFamily, f: SetFunction) -> Dict[FrozenSet, float]:
    values = {}
    for member in lattice:
        try:
            values[member] = float(f(member)) if callable(f) else float(f[member])
        except KeyError:
            raise EvaluationError(f"set function has no value on {format_labelset(member)}") from None
    return values


def _check(lattice: LatticeFamily, f: SetFunction, tol: float, sign: int, max_reasons: int) -> CheckResult:
    # sign = +1: normalized, monotone, submodular; sign = -1: normalized, monotone, supermodular
    tol = settings.NUMERIC_TOLERANCE if tol is None else tol
    if frozenset() not in lattice:
        raise DomainError("the lattice family does not contain the empty set")
    values = _values(lattice, f)
    reasons = []

    if abs(values[frozenset()]) > tol:
        reasons.append(f"not normalized: f({{}}) = {values[frozenset()]:.6g}")

    members = list(lattice)
    for a, b in combinations(members, 2):
        if len(reasons) >= max_reasons:
            break
        for lo, hi in ((a, b), (b, a)):
            if lo < hi and values[lo] > values[hi] + tol:
                reasons.append(f"not monotone: f({format_labelset(lo)}) = {values[lo]:.6g} > "
                               f"f({format_labelset(hi)}) = {values[hi]:.6g}")
        if a <= b or b <= a:
            continue
        union, meet = a | b, a & b
        lhs = values[union] + values[meet]
        rhs = values[a] + values[b]
        if sign * (lhs - rhs) > tol:
            kind = "submodular" if sign > 0 else "supermodular"
            reasons.append(f"not {kind} on {format_labelset(a)}, {format_labelset(b)}: "
                           f"{lhs:.6g} vs {rhs:.6g}")
    passed = not reasons
    if not passed:
        logger.debug(f"set function check failed: {reasons[0]}")
    return CheckResult(passed, reasons)


def polymatroid_check(lattice: LatticeFamily, f: SetFunction, tol: float = None, max_reasons: int = 20) -> CheckResult:
    """
    Check that ``f`` is a polymatroid rank function on the members of ``lattice``.

    Verifies ``f(empty) = 0``, ``f(A) <= f(B)`` for ``A`` contained in ``B`` and
    ``f(A | B) + f(A & B) <= f(A) + f(B)``, all within ``tol``.
    ``f`` may be a mapping keyed by frozensets of labels or a callable.
    """
    return _check(lattice, f, tol, +1, max_reasons)


def contrapolymatroid_check(up_lattice: LatticeFamily, gamma: SetFunction, tol: float = None, max_reasons: int = 20) -> CheckResult:
    """
    Check ``gamma(empty) = 0``, non-decrease along inclusion and supermodularity on up-sets.
    """
    return _check(up_lattice, gamma, tol, -1, max_reasons)
