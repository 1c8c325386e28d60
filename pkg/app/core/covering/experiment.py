"""
Covering experiment definition.
"""

from __future__ import annotations

import math
from typing import Any, Dict, List, Union
import logging

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from app.config.settings import get_settings
from app.core.info.admissible import label_distribution
from app.core.info.distribution import JointDistribution
from app.core.order.labels import MessageIndexFamily, SubsetLabel
from app.core.order.superposition import SuperpositionOrder, order_from_json
from app.core.utils.error_handler import DimensionMismatchError, DomainError

logger = logging.getLogger(__name__)
settings = get_settings()


class CoveringExperiment(BaseModel):
    """
    Recursive codebooks for the labels E, generated along ``order`` from the
    marginals of ``target``; one trial asks whether some index tuple is jointly
    typical with respect to ``target``.

    ``target`` has one axis per label, labels in canonical order.
    """

    K: int = Field(..., ge=1)
    labels: List[Union[List[int], str, int]]
    order: Union[str, Dict[str, Any]] = "discrete"
    target: List[Any] = Field(..., description="nested list pmf over (U_S : S in E)")
    rates: Dict[str, float] = Field(..., description="bits per symbol, keyed by label tag")
    n: int = Field(..., ge=1)
    epsilon: float = Field(default_factory=lambda: settings.COVERING_EPSILON, gt=0, lt=1)
    trials: int = Field(default=100, ge=1)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)
    tuple_cap: int = Field(default_factory=lambda: settings.COVERING_TUPLE_CAP, ge=1)
    codebook_cap: int = Field(default_factory=lambda: settings.COVERING_CODEBOOK_CAP, ge=1)

    @field_validator("rates")
    @classmethod
    def _nonnegative(cls, rates: Dict[str, float]) -> Dict[str, float]:
        for tag, r in rates.items():
            if r < 0 or not math.isfinite(r):
                raise ValueError(f"rate of {tag} must be a finite nonnegative number, got {r}")
        return rates

    @model_validator(mode="after")
    def _consistent(self) -> "CoveringExperiment":
        family = self.family
        tags = {SubsetLabel.parse(t) for t in self.rates}
        if tags != family.label_set():
            raise DimensionMismatchError(f"rates given for {sorted(map(str, tags))}, labels are {family}")
        table = np.asarray(self.target, dtype=float)
        if table.ndim != len(family):
            raise DimensionMismatchError(f"target has {table.ndim} axes for {len(family)} labels")
        if np.any(table < 0) or abs(float(table.sum()) - 1.0) > 1e-9:
            raise DomainError("target must be a pmf")
        return self

    @property
    def family(self) -> MessageIndexFamily:
        return MessageIndexFamily.of(self.K, self.labels)

    def superposition_order(self) -> SuperpositionOrder:
        return order_from_json(self.family, self.order)

    def target_table(self) -> np.ndarray:
        return np.asarray(self.target, dtype=float)

    def target_distribution(self) -> JointDistribution:
        return label_distribution(self.family.labels, self.target_table())

    def rate(self, label: SubsetLabel) -> float:
        for tag, r in self.rates.items():
            if SubsetLabel.parse(tag) == label:
                return float(r)
        raise DomainError(f"no rate for label {label}")

    def codebook_size(self, label: SubsetLabel) -> int:
        """2^ceil(n r_S) codewords."""
        return 2 ** int(math.ceil(self.n * self.rate(label) - 1e-12))

    def codebook_sizes(self) -> Dict[SubsetLabel, int]:
        return {s: self.codebook_size(s) for s in self.family}

    def with_params(self, **changes) -> "CoveringExperiment":
        return self.model_copy(update=changes)

    def describe(self) -> str:
        rates = ", ".join(f"r_{SubsetLabel.parse(t).tag}={r:.4g}" for t, r in self.rates.items())
        return f"covering n={self.n} eps={self.epsilon} trials={self.trials} ({rates})"


def covering_experiment(order: SuperpositionOrder, target: np.ndarray, rates: Dict[SubsetLabel, float],
                        n: int, **params) -> CoveringExperiment:
    """Build an experiment from in-memory objects."""
    return CoveringExperiment(
        K=order.family.ground_K,
        labels=[s.tag for s in order.labels],
        order=order.to_json(),
        target=np.asarray(target, dtype=float).tolist(),
        rates={s.tag: float(r) for s, r in rates.items()},
        n=n,
        **params,
    )
