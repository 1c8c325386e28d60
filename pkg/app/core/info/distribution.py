"""
Finite joint distributions and Shannon measures in bits.

Tables are dense numpy arrays with one axis per symbol. Entropies of
marginals are cached per distribution, so symbolic systems with many shared
H(T) terms bind quickly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Iterable, Sequence, Tuple
import logging
import math

import numpy as np

from app.config.settings import get_settings
from app.core.geometry.entropy_expr import EntropyExpr
from app.core.utils.error_handler import DimensionMismatchError, DomainError, EvaluationError, InputError, ResourceCapError

logger = logging.getLogger(__name__)
settings = get_settings()


@dataclass(frozen=True)
class VariableUniverse:
    """Ordered symbols with their alphabet sizes, one table axis each."""

    symbols: Tuple[str, ...]
    alphabets: Tuple[int, ...]

    def __post_init__(self):
        if len(self.symbols) != len(self.alphabets):
            raise DimensionMismatchError("one alphabet size is needed per symbol")
        if len(set(self.symbols)) != len(self.symbols):
            raise DomainError(f"duplicate symbol names in {self.symbols}")
        for name, size in zip(self.symbols, self.alphabets):
            if int(size) < 1:
                raise DomainError(f"alphabet of {name} must have at least one letter, got {size}")

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise EvaluationError(f"symbol {symbol!r} is not part of {list(self.symbols)}") from None

    def size(self, symbol: str) -> int:
        return self.alphabets[self.index(symbol)]

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(int(a) for a in self.alphabets)

    @property
    def cells(self) -> int:
        return math.prod(self.shape)

    def __contains__(self, symbol: object) -> bool:
        return symbol in self.symbols


def check_table_size(shape: Sequence[int], what: str = "joint table"):
    cells = math.prod(int(s) for s in shape)
    if cells > settings.MAX_TABLE_CELLS:
        raise ResourceCapError(f"{what} would have {cells} cells, above MAX_TABLE_CELLS={settings.MAX_TABLE_CELLS}")


def _xlogx_entropy(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


class JointDistribution:
    """
    Joint pmf over a :class:`VariableUniverse`.

    ``factor_spec`` keeps the admissible specification the table was
    assembled from, when there is one.
    """

    def __init__(self, universe: VariableUniverse, pmf: np.ndarray, factor_spec: Any = None):
        pmf = np.asarray(pmf, dtype=float)
        if pmf.shape != universe.shape:
            raise DimensionMismatchError(f"pmf has shape {pmf.shape}, universe expects {universe.shape}")
        check_table_size(pmf.shape)
        if np.any(pmf < -settings.MASS_TOLERANCE):
            raise DomainError("pmf has negative entries")
        total = float(pmf.sum())
        # summation error grows with the number of cells
        if abs(total - 1.0) > settings.MASS_TOLERANCE * max(1.0, math.sqrt(pmf.size)):
            raise DomainError(f"pmf has total mass {total!r}, expected 1")
        self.universe = universe
        self.pmf = np.clip(pmf, 0.0, None)
        self.pmf.setflags(write=False)
        self.factor_spec = factor_spec
        self._cache: Dict[FrozenSet[str], float] = {}

    @classmethod
    def from_table(cls, symbols: Sequence[str], pmf: np.ndarray, factor_spec: Any = None) -> "JointDistribution":
        pmf = np.asarray(pmf, dtype=float)
        return cls(VariableUniverse(tuple(symbols), pmf.shape), pmf, factor_spec)

    @property
    def symbols(self) -> Tuple[str, ...]:
        return self.universe.symbols

    def _axes(self, symbols: Iterable[str]) -> Tuple[int, ...]:
        return tuple(sorted(self.universe.index(s) for s in set(symbols)))

    def marginal(self, symbols: Iterable[str]) -> "JointDistribution":
        """Marginal over ``symbols``, axes kept in universe order."""
        keep = self._axes(symbols)
        drop = tuple(i for i in range(len(self.universe.symbols)) if i not in keep)
        table = self.pmf.sum(axis=drop) if drop else self.pmf
        names = tuple(self.universe.symbols[i] for i in keep)
        return JointDistribution.from_table(names, table)

    def entropy(self, symbols: Iterable[str]) -> float:
        """H(T) in bits; H(empty) = 0."""
        term = frozenset(symbols)
        if not term:
            return 0.0
        cached = self._cache.get(term)
        if cached is not None:
            return cached
        keep = self._axes(term)
        drop = tuple(i for i in range(self.pmf.ndim) if i not in keep)
        table = self.pmf.sum(axis=drop) if drop else self.pmf
        value = _xlogx_entropy(table)
        self._cache[term] = value
        return value

    def conditional_entropy(self, target: Iterable[str], given: Iterable[str] = ()) -> float:
        target, given = set(target), set(given)
        return self.entropy(target | given) - self.entropy(given)

    def evaluate(self, expr: EntropyExpr) -> float:
        return expr.evaluate(self)

    def to_json(self) -> dict:
        return {
            "symbols": list(self.universe.symbols),
            "alphabets": list(self.universe.shape),
            "pmf": self.pmf.tolist(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "JointDistribution":
        try:
            symbols = tuple(data["symbols"])
            pmf = np.asarray(data["pmf"], dtype=float)
            if "alphabets" in data and tuple(int(a) for a in data["alphabets"]) != pmf.shape:
                raise InputError(f"declared alphabets {data['alphabets']} do not match pmf shape {pmf.shape}")
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"invalid joint distribution: {e}") from e
        return cls.from_table(symbols, pmf)

    def __repr__(self) -> str:
        return f"JointDistribution({', '.join(f'{s}:{a}' for s, a in zip(self.universe.symbols, self.universe.shape))})"


def entropy(dist: JointDistribution, symbols: Iterable[str]) -> float:
    return dist.entropy(symbols)


def cond_mutual_information(dist: JointDistribution, A: Iterable[str], B: Iterable[str], C: Iterable[str] = ()) -> float:
    """
    I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C); overlaps follow the union convention.

    Rounding residue within ``ZERO_SNAP_TOLERANCE`` of 0 is reported as 0.
    """
    A, B, C = set(A), set(B), set(C)
    value = math.fsum((dist.entropy(A | C), dist.entropy(B | C), -dist.entropy(A | B | C), -dist.entropy(C)))
    if abs(value) <= settings.ZERO_SNAP_TOLERANCE:
        return 0.0
    return value


def mi_symbol(A: Iterable[str], B: Iterable[str], C: Iterable[str] = ()) -> EntropyExpr:
    """Symbolic I(A;B|C) as the four-term entropy combination."""
    A, B, C = frozenset(A), frozenset(B), frozenset(C)
    return EntropyExpr.build({A | C: 1}) + EntropyExpr.build({B | C: 1}) \
        - EntropyExpr.build({A | B | C: 1}) - EntropyExpr.build({C: 1})

