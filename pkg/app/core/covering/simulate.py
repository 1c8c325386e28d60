"""
Monte-Carlo estimate of the covering success probability.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List
import logging
import math

import numpy as np
import pandas as pd
from scipy.stats import norm
from tqdm import tqdm

from app.config.settings import get_settings
from app.core.covering.codebook import CodebookSet, generation_conditionals
from app.core.covering.experiment import CoveringExperiment
from app.core.order.labels import sorted_labels
from app.core.utils.error_handler import ResourceCapError

logger = logging.getLogger(__name__)
settings = get_settings()


def wilson_interval(successes: int, trials: int, confidence: float = None):
    """(center, half_width) of the Wilson score interval."""
    confidence = settings.COVERING_CONFIDENCE if confidence is None else confidence
    z = float(norm.ppf(0.5 + confidence / 2))
    p = successes / trials
    denom = 1 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return center, half


@dataclass
class CoveringEstimate:
    estimate: float
    half_width: float
    successes: int
    trials: int
    n: int
    seed: int
    capped_trials: int = 0
    examined: List[int] = field(default_factory=list, repr=False)

    @property
    def interval(self):
        center = self.estimate if self.trials == 0 else wilson_interval(self.successes, self.trials)[0]
        return max(0.0, center - self.half_width), min(1.0, center + self.half_width)

    def to_json(self) -> dict:
        lo, hi = self.interval
        return {
            "estimate": self.estimate,
            "half_width": self.half_width,
            "interval": [lo, hi],
            "successes": self.successes,
            "trials": self.trials,
            "n": self.n,
            "seed": self.seed,
            "capped_trials": self.capped_trials,
        }


def codebook_set(exp: CoveringExperiment, trial: int = 0) -> CodebookSet:
    """Codebooks of one trial; raises ResourceCapError when the tuple space exceeds the codebook cap."""
    order = exp.superposition_order()
    sizes = exp.codebook_sizes()
    total = math.prod(sizes.values())
    if total > exp.codebook_cap:
        raise ResourceCapError(f"codebooks span {total} index tuples, above the cap of {exp.codebook_cap}")
    conditionals = generation_conditionals(exp.target_table(), order)
    return CodebookSet(order, conditionals, sizes, exp.n, exp.seed, trial)


def run_covering(exp: CoveringExperiment) -> CoveringEstimate:
    """
    Fraction of trials in which some index tuple is jointly typical with the target.

    A trial that reaches ``tuple_cap`` before finding one counts as a failure.
    """
    codebook_set(exp)
    target = exp.target_table()
    successes, capped = 0, 0
    examined = []
    for trial in tqdm(range(exp.trials), desc="covering", disable=not settings.SHOW_PROGRESS):
        books = codebook_set(exp, trial)
        found, count, hit_cap = books.search(target, exp.epsilon, exp.tuple_cap)
        successes += int(found)
        capped += int(hit_cap)
        examined.append(count)
    if capped:
        logger.warning(f"{capped} of {exp.trials} trials stopped at the tuple cap {exp.tuple_cap} and count as failures")
    _, half = wilson_interval(successes, exp.trials)
    estimate = CoveringEstimate(successes / exp.trials, half, successes, exp.trials, exp.n, exp.seed, capped, examined)
    logger.info(f"{exp.describe()}: success {estimate.estimate:.3f} +- {half:.3f}")
    return estimate


def covering_ladder(exp: CoveringExperiment, blocklengths: Iterable[int]) -> pd.DataFrame:
    """Estimates over a ladder of blocklengths with the same seed."""
    rows = []
    for n in blocklengths:
        result = run_covering(exp.with_params(n=int(n)))
        lo, hi = result.interval
        rows.append({"n": int(n), "estimate": result.estimate, "half_width": result.half_width,
                     "lower": lo, "upper": hi, "capped_trials": result.capped_trials})
    return pd.DataFrame(rows, columns=["n", "estimate", "half_width", "lower", "upper", "capped_trials"])


def empirical_conditionals(books: CodebookSet, label, parent_indices=None, count: int = None) -> np.ndarray:
    """
    Letter frequencies of u_S given the parents' letters, pooled over the
    first ``count`` codewords above ``parent_indices``. Parent tuples that
    never occur give NaN rows.
    """
    indices = dict(parent_indices or {})
    words = books.codewords(label, indices, 0, count or books.sizes[label]).astype(np.int64)
    table = books.conditionals[label]
    parents_sorted = sorted_labels(books.order.strictly_above(label))
    parents = [books.codeword(p, indices).astype(np.int64) for p in parents_sorted]
    counts = np.zeros(table.shape)
    for word in words:
        np.add.at(counts, tuple(parents) + (word,), 1)
    mass = counts.sum(axis=-1, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        return counts / mass
