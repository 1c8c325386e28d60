"""
Discrete memoryless broadcast channels given by transition tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple
import logging

import numpy as np

from app.config.settings import get_settings
from app.core.geometry.entropy_expr import rationalize
from app.core.geometry.simplex import INFEASIBLE, LinearProgram
from app.core.info.distribution import check_table_size
from app.core.utils.error_handler import DimensionMismatchError, DomainError, InputError

logger = logging.getLogger(__name__)
settings = get_settings()


@dataclass(frozen=True, eq=False)
class TabularBC:
    """``W[x, y_1, ..., y_K] = W(y_1..y_K | x)``; every x-slice sums to 1."""

    W: np.ndarray

    def __post_init__(self):
        W = np.asarray(self.W, dtype=float)
        if W.ndim < 2:
            raise DimensionMismatchError(f"channel table needs an input axis and at least one output axis, got shape {W.shape}")
        check_table_size(W.shape, "channel table")
        if np.any(W < 0):
            raise DomainError("channel table has negative entries")
        sums = W.reshape(W.shape[0], -1).sum(axis=1)
        if np.any(np.abs(sums - 1.0) > settings.MASS_TOLERANCE * max(1, W[0].size)):
            raise DomainError("channel table rows do not sum to 1")
        object.__setattr__(self, "W", W)

    @property
    def K(self) -> int:
        return self.W.ndim - 1

    @property
    def input_alphabet(self) -> int:
        return self.W.shape[0]

    @property
    def output_alphabets(self) -> Tuple[int, ...]:
        return tuple(self.W.shape[1:])

    def marginal(self, j: int) -> np.ndarray:
        """W(y_j | x) as an (|X|, |Y_j|) matrix."""
        if not 1 <= j <= self.K:
            raise DomainError(f"receiver {j} is outside [1:{self.K}]")
        others = tuple(a for a in range(1, self.K + 1) if a != j)
        return self.W.sum(axis=others) if others else self.W

    def to_json(self) -> dict:
        return {"table": {
            "input_alphabet": self.input_alphabet,
            "output_alphabets": list(self.output_alphabets),
            "W": self.W.tolist(),
        }}

    @classmethod
    def from_json(cls, data: dict) -> "TabularBC":
        body = data.get("table", data)
        try:
            W = np.asarray(body["W"], dtype=float)
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"invalid channel table: {e}") from e
        if "output_alphabets" in body:
            shape = (int(body.get("input_alphabet", W.shape[0])),) + tuple(int(a) for a in body["output_alphabets"])
            if W.size != int(np.prod(shape)):
                raise DimensionMismatchError(f"table has {W.size} entries, alphabets give {shape}")
            W = W.reshape(shape)
        return cls(W)


def bsc(p: float) -> np.ndarray:
    return np.array([[1.0 - p, p], [p, 1.0 - p]])


def identity_bc(x_alphabet: int, K: int = 1) -> TabularBC:
    """Every receiver sees X."""
    W = np.zeros((x_alphabet,) * (K + 1))
    for x in range(x_alphabet):
        W[(x,) * (K + 1)] = 1.0
    return TabularBC(W)


def degraded_bc_instance(stages: Sequence[np.ndarray], side: Optional[np.ndarray] = None) -> TabularBC:
    """
    Cascade ``X -> Y_1 -> Y_2 -> ...`` of row-stochastic stages.

    ``stages[0]`` maps X to Y_1, ``stages[i]`` maps Y_i to Y_{i+1}. An optional
    ``side`` stage feeds one more receiver straight from X.
    """
    if not stages:
        raise DimensionMismatchError("a cascade needs at least one stage")
    mats = [np.asarray(s, dtype=float) for s in stages]
    for i in range(1, len(mats)):
        if mats[i].shape[0] != mats[i - 1].shape[1]:
            raise DimensionMismatchError(
                f"stage {i + 1} has {mats[i].shape[0]} inputs but stage {i} has {mats[i - 1].shape[1]} outputs"
            )
    W = mats[0]
    for m in mats[1:]:
        # append Y_{i+1} conditionally on the last output axis
        W = W[..., :, None] * m.reshape((1,) * (W.ndim - 1) + m.shape)
    if side is not None:
        side = np.asarray(side, dtype=float)
        if side.shape[0] != mats[0].shape[0]:
            raise DimensionMismatchError(f"side stage has {side.shape[0]} inputs, channel input has {mats[0].shape[0]}")
        W = W[..., None] * side.reshape((side.shape[0],) + (1,) * (W.ndim - 1) + (side.shape[1],))
    return TabularBC(W)


def binary_symmetric_cascade(p: float, q: float, side: Optional[np.ndarray] = None) -> TabularBC:
    """BSC(p) to Y_1 followed by BSC(q) to Y_2; Y_2 sees crossover p(1-q) + (1-p)q."""
    return degraded_bc_instance([bsc(p), bsc(q)], side)


@dataclass
class DegradednessCertificate:
    degraded: bool
    transfer: Optional[np.ndarray] = None

    def __bool__(self) -> bool:
        return self.degraded


def degradedness_certificate(chan: TabularBC, strong: int, weak: int, tol: float = None) -> DegradednessCertificate:
    """
    Look for a row-stochastic T with ``W_weak = W_strong T`` by exact LP feasibility.

    Entries of the two marginals are rationalized and matched within ``tol``.
    """
    tol = Fraction(settings.NUMERIC_TOLERANCE if tol is None else tol)
    Ws, Ww = chan.marginal(strong), chan.marginal(weak)
    a_size, b_size = Ws.shape[1], Ww.shape[1]
    n = a_size * b_size

    def var(a, b):
        return a * b_size + b

    A: List[List[Fraction]] = []
    b_vec: List[Fraction] = []
    for x in range(chan.input_alphabet):
        ws = [rationalize(v) for v in Ws[x]]
        for b in range(b_size):
            row = [Fraction(0)] * n
            for a in range(a_size):
                row[var(a, b)] = ws[a]
            target = rationalize(Ww[x, b])
            A.append(row)
            b_vec.append(target + tol)
            A.append([-v for v in row])
            b_vec.append(-(target - tol))
    for a in range(a_size):
        row = [Fraction(0)] * n
        for b in range(b_size):
            row[var(a, b)] = Fraction(1)
        A.append(row)
        b_vec.append(Fraction(1))
        A.append([-v for v in row])
        b_vec.append(Fraction(-1))

    result = LinearProgram([Fraction(0)] * n, A, b_vec, [True] * n).solve()
    if result.status == INFEASIBLE:
        logger.info(f"receiver {weak} is not a degraded version of receiver {strong}")
        return DegradednessCertificate(False)
    T = np.array([float(v) for v in result.x]).reshape(a_size, b_size)
    return DegradednessCertificate(True, T)
