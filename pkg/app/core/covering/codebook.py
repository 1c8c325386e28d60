"""
Lazily generated superposition codebooks and robust joint typicality.

The codeword of label S is indexed by the messages of every label in the
up-closure of S. It is drawn letter by letter from ``p(u_S | u_parents)``
along the parents' codewords at the same indices. Codewords come in blocks
whose generator is keyed by (seed, trial, label, parent indices, block), so a
codeword never depends on the order in which the search visits it.
"""

from __future__ import annotations

from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple
import logging
import math

import numpy as np

from app.config.settings import get_settings
from app.core.order.labels import SubsetLabel, sorted_labels
from app.core.order.superposition import SuperpositionOrder
from app.core.utils.error_handler import DimensionMismatchError, ResourceCapError

logger = logging.getLogger(__name__)
settings = get_settings()

BLOCK = 256


def generation_conditionals(target: np.ndarray, order: SuperpositionOrder) -> Dict[SubsetLabel, np.ndarray]:
    """
    ``p(u_S | u_parents)`` from the marginals of ``target``.

    Axes: parents in label order, then U_S. Parent tuples of probability 0
    get a uniform row.
    """
    target = np.asarray(target, dtype=float)
    labels = order.labels
    if target.ndim != len(labels):
        raise DimensionMismatchError(f"target has {target.ndim} axes for {len(labels)} labels")
    position = {s: i for i, s in enumerate(labels)}
    out = {}
    for s in labels:
        parents = sorted_labels(order.strictly_above(s))
        keep = [position[p] for p in parents] + [position[s]]
        drop = tuple(i for i in range(target.ndim) if i not in keep)
        marginal = target.sum(axis=drop) if drop else target
        # sum keeps axes in ascending position order; move them to (parents, S)
        ascending = sorted(keep)
        marginal = np.transpose(marginal, [ascending.index(k) for k in keep])
        mass = marginal.sum(axis=-1, keepdims=True)
        size = target.shape[position[s]]
        out[s] = np.where(mass > 0, marginal / np.where(mass > 0, mass, 1.0), 1.0 / size)
    return out


def _sample(rng: np.random.Generator, probs: np.ndarray, count: int) -> np.ndarray:
    """``count`` sequences; letter i drawn from ``probs[i]``."""
    cum = np.cumsum(probs, axis=-1)
    u = rng.random((count, probs.shape[0]))
    letters = (u[:, :, None] >= cum[None, :, :]).sum(axis=-1)
    return np.minimum(letters, probs.shape[1] - 1).astype(np.int16)


def _robust_typical(letters: Sequence[np.ndarray], target: np.ndarray, epsilon: float) -> np.ndarray:
    """
    Row-wise test on a batch: ``letters[k]`` has shape (batch, n) for label k.

    A row is typical when every symbol-tuple frequency lies within
    ``(1 +- epsilon) * p``; tuples with p = 0 must not occur.
    """
    batch, n = letters[0].shape
    cells = target.size
    flat = np.ravel_multi_index(tuple(np.asarray(l, dtype=np.int64) for l in letters), target.shape)
    offsets = (np.arange(batch, dtype=np.int64) * cells)[:, None]
    counts = np.bincount((flat + offsets).ravel(), minlength=batch * cells).reshape(batch, cells)
    freq = counts / n
    p = target.reshape(-1)
    return np.all(np.abs(freq - p[None, :]) <= epsilon * p[None, :] + 1e-15, axis=1)


def is_jointly_typical(codewords: Sequence[np.ndarray], target: np.ndarray, epsilon: float) -> bool:
    """Robust typicality of one tuple of length-n sequences."""
    return bool(_robust_typical([np.asarray(c)[None, :] for c in codewords], np.asarray(target, dtype=float), epsilon)[0])


def exhaustive_joint_typicality(codebooks: Sequence[np.ndarray], target: np.ndarray, epsilon: float,
                                cap: Optional[int] = None) -> bool:
    """
    True iff some index tuple of independent codebooks is jointly typical.

    ``codebooks[k]`` has shape (M_k, n); the tuple count prod M_k may not exceed
    ``cap`` (COVERING_TUPLE_CAP by default).
    """
    cap = settings.COVERING_TUPLE_CAP if cap is None else cap
    target = np.asarray(target, dtype=float)
    books = [np.atleast_2d(np.asarray(b)) for b in codebooks]
    if len(books) != target.ndim:
        raise DimensionMismatchError(f"{len(books)} codebooks for a target with {target.ndim} axes")
    if len({b.shape[1] for b in books}) > 1:
        raise DimensionMismatchError("codebooks have different blocklengths")
    total = math.prod(b.shape[0] for b in books)
    if total > cap:
        raise ResourceCapError(f"{total} index tuples exceed the cap of {cap}")
    inner = books[-1]
    for outer in product(*(range(b.shape[0]) for b in books[:-1])):
        rows = [np.repeat(books[k][m][None, :], inner.shape[0], axis=0) for k, m in enumerate(outer)]
        if _robust_typical(rows + [inner], target, epsilon).any():
            return True
    return False


class CodebookSet:
    """
    The codebooks of one trial.

    Args:
        order: superposition order on E
        conditionals: ``p(u_S | u_parents)`` per label, see :func:`generation_conditionals`
        sizes: codebook size 2^ceil(n r_S) per label
        n: blocklength
        seed: experiment seed
        trial: trial index
    """

    def __init__(self, order: SuperpositionOrder, conditionals: Mapping[SubsetLabel, np.ndarray],
                 sizes: Mapping[SubsetLabel, int], n: int, seed: int, trial: int = 0):
        self.order = order
        self.conditionals = dict(conditionals)
        self.sizes = dict(sizes)
        self.n = n
        self.seed = seed
        self.trial = trial
        self.labels = order.labels
        self._index = {s: i for i, s in enumerate(self.labels)}
        self._parents = {s: sorted_labels(order.strictly_above(s)) for s in self.labels}
        self._blocks: Dict[Tuple, np.ndarray] = {}

    @property
    def generation_order(self) -> Tuple[SubsetLabel, ...]:
        """Parents before children."""
        return tuple(reversed(self.order.linear_extension()))

    def _key(self, label: SubsetLabel, indices: Mapping[SubsetLabel, int]) -> Tuple[int, ...]:
        return tuple(int(indices[p]) for p in self._parents[label])

    def _block(self, label: SubsetLabel, parent_key: Tuple[int, ...], block: int) -> np.ndarray:
        cache_key = (label, parent_key, block)
        cached = self._blocks.get(cache_key)
        if cached is not None:
            return cached
        parents = self._parents[label]
        parent_indices = dict(zip(parents, parent_key))
        parent_words = [self.codeword(p, parent_indices) for p in parents]
        table = self.conditionals[label]
        probs = table[tuple(parent_words)] if parent_words else np.broadcast_to(table, (self.n, table.shape[-1]))
        rng = np.random.default_rng([self.seed, self.trial, self._index[label], *parent_key, block])
        count = min(BLOCK, self.sizes[label] - block * BLOCK)
        words = _sample(rng, probs, count)
        self._blocks[cache_key] = words
        return words

    def codeword(self, label: SubsetLabel, indices: Mapping[SubsetLabel, int]) -> np.ndarray:
        """u_S at message indices ``indices`` (must cover the up-closure of S)."""
        m = int(indices[label])
        return self._block(label, self._key(label, indices), m // BLOCK)[m % BLOCK]

    def codewords(self, label: SubsetLabel, indices: Mapping[SubsetLabel, int], start: int, stop: int) -> np.ndarray:
        """Codewords m_S in [start, stop) for fixed parent indices, shape (stop - start, n)."""
        key = self._key(label, indices)
        parts = []
        m = start
        while m < stop:
            block = m // BLOCK
            words = self._block(label, key, block)
            lo = m - block * BLOCK
            hi = min(stop - block * BLOCK, words.shape[0])
            parts.append(words[lo:hi])
            m = block * BLOCK + hi
        return np.concatenate(parts, axis=0) if parts else np.zeros((0, self.n), dtype=np.int16)

    def codebook(self, label: SubsetLabel, parent_indices: Optional[Mapping[SubsetLabel, int]] = None) -> np.ndarray:
        """Whole codebook of S above fixed parent indices."""
        indices = dict(parent_indices or {})
        return self.codewords(label, indices, 0, self.sizes[label])

    def search(self, target: np.ndarray, epsilon: float, tuple_cap: int) -> Tuple[bool, int, bool]:
        """
        Look for a jointly typical index tuple.

        Tuples are visited in boxes ``[0, side)^E`` of doubling side, the
        innermost label as a vectorized batch.

        Returns:
            (found, tuples examined, stopped at the cap)
        """
        target = np.asarray(target, dtype=float)
        gen = self.generation_order
        outer, inner = gen[:-1], gen[-1]
        axis_of = {s: i for i, s in enumerate(self.labels)}
        largest = max(self.sizes.values())
        examined = 0
        side, prev = 1, 0
        while True:
            bounds = {s: min(side, self.sizes[s]) for s in gen}
            old = {s: min(prev, self.sizes[s]) for s in gen}
            for combo in product(*(range(bounds[s]) for s in outer)):
                indices = dict(zip(outer, combo))
                inside_old = all(indices[s] < old[s] for s in outer)
                start = old[inner] if inside_old else 0
                stop = bounds[inner]
                if start >= stop:
                    continue
                stop = min(stop, start + tuple_cap - examined)
                batch = self.codewords(inner, indices, start, stop)
                letters: List[np.ndarray] = [None] * len(self.labels)
                for s in outer:
                    letters[axis_of[s]] = np.broadcast_to(self.codeword(s, indices), batch.shape)
                letters[axis_of[inner]] = batch
                examined += batch.shape[0]
                if _robust_typical(letters, target, epsilon).any():
                    return True, examined, False
                if examined >= tuple_cap:
                    return False, examined, True
            if side >= largest:
                return False, examined, False
            prev, side = side, side * 2
