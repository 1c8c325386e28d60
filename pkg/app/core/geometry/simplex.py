"""
Exact two-phase tableau simplex over :class:`~fractions.Fraction` with Bland's rule.

Solves ``maximize c.x  s.t.  A x <= b`` where each variable is either
sign-restricted (``x_j >= 0``) or free. Free variables are split into
``x+ - x-``. Bland's rule guarantees termination on degenerate problems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence
import logging

logger = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    value: Optional[Fraction] = None
    x: Optional[List[Fraction]] = None
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


@dataclass
class LinearProgram:
    """``maximize c.x  s.t.  A x <= b``; ``nonneg[j]`` marks sign-restricted variables."""

    c: Sequence[Fraction]
    A: Sequence[Sequence[Fraction]]
    b: Sequence[Fraction]
    nonneg: Sequence[bool] = field(default=None)

    def __post_init__(self):
        n = len(self.c)
        if self.nonneg is None:
            self.nonneg = [False] * n
        if len(self.nonneg) != n or len(self.A) != len(self.b) or any(len(row) != n for row in self.A):
            raise ValueError("inconsistent LP dimensions")

    def solve(self) -> LPResult:
        return _Tableau(self).run()


class _Tableau:
    def __init__(self, lp: LinearProgram):
        self.lp = lp
        # columns of the standard form: one per nonneg var, two per free var
        self.col_map = []  # (variable index, sign)
        for j, restricted in enumerate(lp.nonneg):
            self.col_map.append((j, 1))
            if not restricted:
                self.col_map.append((j, -1))
        self.n_struct = len(self.col_map)
        m = len(lp.b)
        self.m = m
        n_slack = m
        n_art = sum(1 for bi in lp.b if Fraction(bi) < 0)
        self.n_cols = self.n_struct + n_slack + n_art
        self.first_art = self.n_struct + n_slack

        rows = []
        basis = []
        art = self.first_art
        for i in range(m):
            row = [Fraction(0)] * (self.n_cols + 1)
            for k, (j, sign) in enumerate(self.col_map):
                a = Fraction(lp.A[i][j])
                if a:
                    row[k] = a * sign
            row[self.n_struct + i] = Fraction(1)
            row[-1] = Fraction(lp.b[i])
            if row[-1] < 0:
                row = [-v for v in row]
                row[art] = Fraction(1)
                basis.append(art)
                art += 1
            else:
                basis.append(self.n_struct + i)
            rows.append(row)
        self.rows = rows
        self.basis = basis
        self.pivots = 0

    def _objective_row(self, costs: List[Fraction]) -> List[Fraction]:
        # reduced costs d_j = c_j - c_B . column_j, last entry holds -c_B . rhs
        d = list(costs) + [Fraction(0)]
        for i, bvar in enumerate(self.basis):
            cb = costs[bvar]
            if cb:
                row = self.rows[i]
                for k in range(self.n_cols):
                    if row[k]:
                        d[k] -= cb * row[k]
                d[-1] -= cb * row[-1]
        return d

    def _pivot(self, r: int, e: int, d: List[Fraction]):
        prow = self.rows[r]
        piv = prow[e]
        if piv != 1:
            inv = 1 / piv
            prow = [v * inv if v else v for v in prow]
            self.rows[r] = prow
        nz = [k for k, v in enumerate(prow) if v]
        for i, row in enumerate(self.rows):
            if i != r:
                f = row[e]
                if f:
                    for k in nz:
                        row[k] -= f * prow[k]
        f = d[e]
        if f:
            for k in nz:
                d[k] -= f * prow[k]
        self.basis[r] = e
        self.pivots += 1

    def _optimize(self, d: List[Fraction], allowed: int) -> str:
        while True:
            entering = next((k for k in range(allowed) if d[k] > 0), None)
            if entering is None:
                return OPTIMAL
            best = None
            leave = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return UNBOUNDED
            self._pivot(leave, entering, d)

    def run(self) -> LPResult:
        n_art = self.n_cols - self.first_art
        if n_art:
            costs = [Fraction(0)] * self.first_art + [Fraction(-1)] * n_art
            d = self._objective_row(costs)
            self._optimize(d, self.n_cols)
            if self._objective_row(costs)[-1] != 0:
                return LPResult(INFEASIBLE, pivots=self.pivots)
            self._drive_out_artificials()

        costs = [Fraction(0)] * self.n_cols
        for k, (j, sign) in enumerate(self.col_map):
            costs[k] = Fraction(self.lp.c[j]) * sign
        d = self._objective_row(costs)
        status = self._optimize(d, self.first_art)
        if status == UNBOUNDED:
            return LPResult(UNBOUNDED, pivots=self.pivots)

        values = [Fraction(0)] * self.n_cols
        for i, bvar in enumerate(self.basis):
            values[bvar] = self.rows[i][-1]
        x = [Fraction(0)] * len(self.lp.c)
        for k, (j, sign) in enumerate(self.col_map):
            x[j] += sign * values[k]
        value = sum((Fraction(self.lp.c[j]) * x[j] for j in range(len(x))), Fraction(0))
        return LPResult(OPTIMAL, value, x, self.pivots)

    def _drive_out_artificials(self):
        keep = []
        for i in range(len(self.rows)):
            if self.basis[i] < self.first_art:
                keep.append(i)
                continue
            row = self.rows[i]
            col = next((k for k in range(self.first_art) if row[k]), None)
            if col is None:
                # redundant equality row; drop it
                continue
            dummy = [Fraction(0)] * (self.n_cols + 1)
            self._pivot(i, col, dummy)
            keep.append(i)
        self.rows = [self.rows[i] for i in keep]
        self.basis = [self.basis[i] for i in keep]


def maximize(c, A, b, nonneg=None) -> LPResult:
    return LinearProgram(c, A, b, nonneg).solve()


def is_feasible(A, b, nonneg=None) -> bool:
    n = len(A[0]) if A else (len(nonneg) if nonneg else 0)
    return LinearProgram([Fraction(0)] * n, A, b, nonneg).solve().status != INFEASIBLE
