"""
Fourier-Motzkin elimination on symbolic systems.

Rows are combined with nonnegative rational multipliers, which act the same
way on coefficients and on :class:`EntropyExpr` right-hand sides, so the
projection is exact for every assignment of the entropy symbols.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple
import logging

from tqdm import tqdm

from app.config.settings import get_settings
from app.core.geometry.system import Inequality, InequalitySystem, VariableName
from app.core.utils.error_handler import DomainError, InputError

logger = logging.getLogger(__name__)
settings = get_settings()

REDUNDANCY_MODES = ("none", "syntactic", "exact")


def _merge_notes(*notes: str) -> str:
    atoms = []
    for note in notes:
        for atom in note.split("; "):
            if atom and atom not in atoms:
                atoms.append(atom)
    return "; ".join(atoms)


def _dominates(strong: Tuple, weak: Tuple, nonneg: FrozenSet[VariableName]) -> bool:
    """``strong`` implies ``weak`` when the variables where they differ are nonnegative.

    Both arguments are ray forms ``(coeff map, rhs)``.
    """
    s, s_rhs = strong
    w, w_rhs = weak
    if s_rhs != w_rhs:
        if not (s_rhs.is_constant() and w_rhs.is_constant()):
            return False
        if s_rhs.constant > w_rhs.constant:
            return False
    for v in set(s) | set(w):
        cs, cw = s.get(v, Fraction(0)), w.get(v, Fraction(0))
        if cs == cw:
            continue
        if v not in nonneg or cw > cs:
            return False
    return True


def prune_rows(rows: Sequence[Inequality], mode: str = "syntactic") -> List[Inequality]:
    """
    Cheap cleanup between elimination steps.

    Numeric right-hand sides within ``ZERO_SNAP_TOLERANCE`` of 0 are set to 0
    first. Drops vacuous rows and positive multiples of earlier rows; in
    ``syntactic``/``exact`` mode also drops rows dominated coefficient-wise
    under the known nonnegative variables.
    """
    out: List[Inequality] = []
    seen = set()
    infeasible_seen = False
    for row in rows:
        row = row.snapped(settings.ZERO_SNAP_TOLERANCE)
        if row.is_vacuous():
            continue
        if row.is_infeasible():
            if infeasible_seen:
                continue
            infeasible_seen = True
        norm = row.normalized()
        key = (norm.coeffs, norm.rhs)
        if key in seen:
            continue
        seen.add(key)
        out.append(norm)
    if mode == "none":
        return out

    nonneg = frozenset(r.coeffs[0][0] for r in out if r.is_bound())
    rays = [r.ray_form() for r in out]
    kept: List[Inequality] = []
    for i, row in enumerate(out):
        if row.is_bound() or row.is_infeasible():
            kept.append(row)
            continue
        # rows with only nonpositive coefficients on nonnegative variables hold trivially
        if (row.rhs.is_constant() and row.rhs.constant >= 0
                and all(c <= 0 and v in nonneg for v, c in row.coeffs)):
            continue
        dominated = False
        for j, other in enumerate(out):
            if i == j:
                continue
            if not other.is_infeasible() and _dominates(rays[j], rays[i], nonneg):
                dominated = True
                break
        if not dominated:
            kept.append(row)
    return kept


def _find_equality(rows: Sequence[Inequality], targets: Sequence[VariableName]) -> Optional[Tuple[VariableName, int, int]]:
    index: Dict[tuple, int] = {}
    for i, row in enumerate(rows):
        index.setdefault((row.coeffs, row.rhs), i)
    best = None
    for i, row in enumerate(rows):
        neg = (tuple((v, -c) for v, c in row.coeffs), -row.rhs)
        j = index.get(neg)
        if j is None or j == i:
            continue
        for var in targets:
            if row.coeff(var) != 0:
                touched = sum(1 for r in rows if r.coeff(var) != 0)
                cand = (touched, var.sort_key(), i, j, var)
                if best is None or cand[:2] < best[:2]:
                    best = cand
                break
    if best is None:
        return None
    return best[4], best[2], best[3]


def _substitute_equality(rows: Sequence[Inequality], var: VariableName, i: int, j: int) -> List[Inequality]:
    eq = rows[i]
    a = eq.coeff(var)
    coeffs = {u: -c / a for u, c in eq.coeffs if u != var}
    constant = eq.rhs.scale(1 / a)
    out = []
    for k, row in enumerate(rows):
        if k in (i, j):
            continue
        out.append(row.substitute(var, coeffs, constant))
    return out


def _combine(rows: Sequence[Inequality], var: VariableName) -> Tuple[List[Inequality], int, int, int]:
    zero, pos, neg = [], [], []
    for row in rows:
        c = row.coeff(var)
        if c > 0:
            pos.append(row)
        elif c < 0:
            neg.append(row)
        else:
            zero.append(row)
    out = list(zero)
    for p in pos:
        cp = p.coeff(var)
        for n in neg:
            cn = -n.coeff(var)
            coeffs = {}
            for v, c in p.coeffs:
                coeffs[v] = c / cp
            for v, c in n.coeffs:
                coeffs[v] = coeffs.get(v, Fraction(0)) + c / cn
            coeffs.pop(var, None)
            rhs = p.rhs.scale(1 / cp) + n.rhs.scale(1 / cn)
            out.append(Inequality.leq(coeffs, rhs, _merge_notes(p.note, n.note)))
    return out, len(zero), len(pos), len(neg)


def _choose(rows: Sequence[Inequality], targets: Sequence[VariableName]) -> VariableName:
    # fewest rows touched first, ties in canonical variable order
    def touched(var):
        return sum(1 for r in rows if r.coeff(var) != 0)
    return min(targets, key=lambda v: (touched(v), v.sort_key()))


def _exact_prune(rows: List[Inequality], variables: Sequence[VariableName]) -> List[Inequality]:
    from app.core.geometry.compare import irredundant_indices
    keep = irredundant_indices(rows, variables)
    return [rows[i] for i in keep]


def fm_eliminate(
    system: InequalitySystem,
    eliminate: Iterable[VariableName],
    redundancy: str = "syntactic",
    strict: bool = False,
) -> InequalitySystem:
    """
    Project ``system`` onto the variables not in ``eliminate``.

    Args:
        system: input polyhedron, symbolic or numeric
        eliminate: variables to project away; equalities through them are substituted
        redundancy: ``none``, ``syntactic`` or ``exact``; ``exact`` adds LP pruning
            whenever every right-hand side is constant
        strict: raise :class:`DomainError` instead of returning an empty projection

    Returns:
        The projected system over the remaining variables. An empty projection
        keeps a single row ``0 <= negative constant`` noted ``infeasible`` and
        reports ``is_empty()``.
    """
    if redundancy not in REDUNDANCY_MODES:
        raise InputError(f"unknown redundancy mode {redundancy!r}, expected one of {REDUNDANCY_MODES}")
    targets = list(dict.fromkeys(eliminate))
    unknown = [v for v in targets if v not in system.variables]
    if unknown:
        raise DomainError(f"cannot eliminate undeclared variables {sorted(map(str, unknown))}")

    remaining_vars = tuple(v for v in system.variables if v not in set(targets))
    if not any(r.coeff(v) != 0 for r in system.rows for v in targets):
        return InequalitySystem(remaining_vars, system.rows)
    rows = prune_rows(system.rows, redundancy)
    logger.debug(f"FM start: {len(rows)} rows, eliminating {len(targets)} of {len(system.variables)} variables")

    pending = list(targets)
    progress = tqdm(total=len(pending), desc="FM", disable=not settings.SHOW_PROGRESS)
    while pending:
        active = [v for v in pending if any(r.coeff(v) != 0 for r in rows)]
        if not active:
            progress.update(len(pending))
            break
        eq = _find_equality(rows, active)
        if eq is not None:
            var, i, j = eq
            rows = _substitute_equality(rows, var, i, j)
            logger.debug(f"  {var}: substituted through equality, {len(rows)} rows")
        else:
            var = _choose(rows, active)
            rows, z, p, n = _combine(rows, var)
            logger.debug(f"  {var}: z={z}, p={p}, n={n}, p*n={p * n}")
        pending = [v for v in active if v != var]
        rows = prune_rows(rows, redundancy)
        if (redundancy == "exact" and len(rows) > settings.FM_PRUNE_THRESHOLD
                and all(r.rhs.is_constant() for r in rows)):
            rows = _exact_prune(rows, remaining_vars + tuple(pending))
        progress.update(1)
    progress.close()

    if redundancy == "exact" and all(r.rhs.is_constant() for r in rows):
        rows = _exact_prune(rows, remaining_vars)
    result = InequalitySystem(remaining_vars, tuple(rows))
    logger.info(f"FM: {len(system.rows)} rows -> {len(result.rows)} rows over {len(remaining_vars)} variables")
    if result.is_empty():
        witness = result.infeasible_rows[0]
        message = f"projection is empty: {witness.render()} ({witness.note})"
        if strict:
            raise DomainError(message)
        logger.error(message)
        result = result.with_rows([witness.with_note(_merge_notes(witness.note, "infeasible"))])
    return result


def restrict_to_embedding(system: InequalitySystem, zero_vars: Iterable[VariableName]) -> InequalitySystem:
    """
    Set each listed variable to 0 and drop it from the system.

    Rows that become ``0 <= c`` with c >= 0 vanish, and so do rows whose c is
    negative only within ``ZERO_SNAP_TOLERANCE``. Rows ``0 <= c`` with c < 0
    are kept and noted ``infeasible``; the result then reports ``is_empty()``.
    """
    zero_vars = list(dict.fromkeys(zero_vars))
    unknown = [v for v in zero_vars if v not in system.variables]
    if unknown:
        raise DomainError(f"cannot zero undeclared variables {sorted(map(str, unknown))}")
    if not zero_vars:
        return system
    rows = []
    for row in system.rows:
        for var in zero_vars:
            row = row.substitute(var, {})
        row = row.snapped(settings.ZERO_SNAP_TOLERANCE)
        if row.is_vacuous():
            continue
        if row.is_infeasible():
            logger.error(f"substitution exposed an infeasible row: {row.render()} ({row.note})")
            row = row.with_note(_merge_notes(row.note, "infeasible"))
        rows.append(row)
    gone = set(zero_vars)
    return InequalitySystem(tuple(v for v in system.variables if v not in gone), tuple(rows))
