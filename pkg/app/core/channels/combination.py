"""
Combination networks: deterministic broadcast channels whose input is a
collection of components V_S, with receiver j reading every V_S with j in S.

With independent uniform auxiliaries ``U_S = V_S`` every joint entropy is an
integer number of bits, so :class:`CombinationEntropyOracle` answers H(T)
without building a table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Tuple, Union
import json
import logging

import numpy as np

from app.core.channels.tabular import TabularBC
from app.core.info.admissible import AdmissibleSpec
from app.core.info.distribution import check_table_size
from app.core.info.symbols import Q, X, label_of
from app.core.order.labels import MessageIndexFamily, SubsetLabel, all_nonempty_subsets, sorted_labels
from app.core.order.superposition import SuperpositionOrder, make_order
from app.core.utils.error_handler import DomainError, EvaluationError, InputError

logger = logging.getLogger(__name__)


def _parse_component_key(key) -> SubsetLabel:
    if isinstance(key, str) and key.strip().startswith("["):
        try:
            return SubsetLabel.of(int(j) for j in json.loads(key))
        except (ValueError, TypeError) as e:
            raise InputError(f"invalid component key {key!r}") from e
    return SubsetLabel.parse(key)


@dataclass(frozen=True)
class CombinationNetwork:
    """``component_bits[S] = c_S``, so |V_S| = 2**c_S and C_S = c_S."""

    K: int
    component_bits: Mapping[SubsetLabel, int] = field(default_factory=dict)

    def __post_init__(self):
        bits = {}
        for key, c in dict(self.component_bits).items():
            label = _parse_component_key(key)
            if label.max_receiver > self.K:
                raise DomainError(f"component {label} is not a subset of [1:{self.K}]")
            if int(c) != c or c < 0:
                raise DomainError(f"component {label} needs a nonnegative integer bit count, got {c!r}")
            bits[label] = int(c)
        object.__setattr__(self, "component_bits", bits)

    @classmethod
    def full(cls, K: int, bits: Union[int, Mapping] = 1) -> "CombinationNetwork":
        """Every nonempty S gets a component; ``bits`` is a constant or a per-label mapping."""
        if isinstance(bits, Mapping):
            return cls(K, {SubsetLabel.parse(k): v for k, v in bits.items()})
        return cls(K, {s: bits for s in all_nonempty_subsets(K)})

    def capacity(self, label: SubsetLabel) -> int:
        return self.component_bits.get(label, 0)

    @property
    def components(self) -> Tuple[SubsetLabel, ...]:
        """Components with at least one bit, in label order."""
        return sorted_labels(s for s, c in self.component_bits.items() if c > 0)

    def window(self, j: int) -> Tuple[SubsetLabel, ...]:
        return tuple(s for s in self.components if s.contains(j))

    @property
    def input_alphabet(self) -> int:
        return 2 ** sum(self.capacity(s) for s in self.components)

    @property
    def output_alphabets(self) -> Tuple[int, ...]:
        return tuple(2 ** sum(self.capacity(s) for s in self.window(j)) for j in range(1, self.K + 1))

    def output_entropy(self, j: int) -> int:
        """H(Y_j) under uniform components: the sum of C_S over S containing j."""
        return sum(self.capacity(s) for s in self.window(j))

    def to_tabular(self) -> TabularBC:
        """The deterministic channel table; X is the mixed-radix concatenation of the components."""
        comps = self.components
        sizes = [2 ** self.capacity(s) for s in comps]
        ys = self.output_alphabets
        check_table_size((self.input_alphabet,) + ys, "combination network table")
        n = self.input_alphabet
        digits = np.unravel_index(np.arange(n), sizes) if comps else ()
        outputs = []
        for j in range(1, self.K + 1):
            idx = [i for i, s in enumerate(comps) if s.contains(j)]
            if idx:
                outputs.append(np.ravel_multi_index([digits[i] for i in idx], [sizes[i] for i in idx]))
            else:
                outputs.append(np.zeros(n, dtype=int))
        W = np.zeros((n,) + ys)
        W[(np.arange(n),) + tuple(outputs)] = 1.0
        return TabularBC(W)

    def oracle(self, family: Iterable[SubsetLabel]) -> "CombinationEntropyOracle":
        return CombinationEntropyOracle(self, tuple(family))

    def to_json(self) -> dict:
        return {"combination": {
            "K": self.K,
            "components": {json.dumps(list(s.members)): c for s, c in sorted(self.component_bits.items())},
        }}

    @classmethod
    def from_json(cls, data: dict) -> "CombinationNetwork":
        body = data.get("combination", data)
        try:
            return cls(int(body["K"]), {_parse_component_key(k): v for k, v in body["components"].items()})
        except (KeyError, TypeError) as e:
            raise InputError(f"invalid combination network: {e}") from e


def _require_components(net: CombinationNetwork, labels: Iterable[SubsetLabel]):
    missing = [s for s in labels if s not in net.component_bits]
    if missing:
        raise DomainError(f"combination network has no component for {[str(s) for s in missing]}")


class CombinationEntropyOracle:
    """
    Exact joint entropies for uniform auxiliaries ``U_S = V_S``, S in the family.

    H(T) is the sum of C_S over the labels S whose component is seen by T:
    through U_S itself, through X, or through some Y_j with j in S.
    """

    def __init__(self, net: CombinationNetwork, family: Iterable[SubsetLabel]):
        family = sorted_labels(family)
        _require_components(net, family)
        self.net = net
        self.family = family

    def entropy(self, symbols: Iterable[str]) -> int:
        symbols = set(symbols)
        seen = set()
        receivers = set()
        for sym in symbols:
            if sym == Q:
                continue
            if sym == X:
                seen |= set(self.family)
                continue
            if sym.startswith("Y_") and sym[2:].isdigit():
                j = int(sym[2:])
                if not 1 <= j <= self.net.K:
                    raise EvaluationError(f"no receiver {j} in a {self.net.K}-user network")
                receivers.add(j)
                continue
            label = label_of(sym)
            if label is None or label not in self.family:
                raise EvaluationError(f"symbol {sym!r} is not defined for this network")
            seen.add(label)
        for s in self.family:
            if any(s.contains(j) for j in receivers):
                seen.add(s)
        return sum(self.net.capacity(s) for s in seen)


def combination_uniform_aux(net: CombinationNetwork, F: Union[SuperpositionOrder, MessageIndexFamily, Iterable]) -> AdmissibleSpec:
    """
    X' with independent uniform U_S over V_S's alphabet for S in F and X the concatenation.

    Components outside F are held at 0. ``F`` may be an order, a family
    (inclusion order) or a list of labels.
    """
    if isinstance(F, SuperpositionOrder):
        order = F
    else:
        family = F if isinstance(F, MessageIndexFamily) else MessageIndexFamily.of(net.K, F)
        order = make_order(family, "inclusion")
    labels = order.labels
    _require_components(net, labels)

    u_alphabets = {s: 2 ** net.capacity(s) for s in labels}
    shape_u = tuple(u_alphabets[s] for s in labels)
    check_table_size(shape_u, "combination input map")
    conditionals = {}
    for s in labels:
        parents = sorted_labels(order.strictly_above(s))
        prefix = (1,) + tuple(u_alphabets[p] for p in parents)
        conditionals[s] = np.full(prefix + (u_alphabets[s],), 1.0 / u_alphabets[s])

    comps = net.components
    grids = np.indices(shape_u) if labels else ()
    position = {s: i for i, s in enumerate(labels)}
    if comps:
        digits = [grids[position[s]] if s in position else np.zeros(shape_u, dtype=int) for s in comps]
        x = np.ravel_multi_index(digits, [2 ** net.capacity(s) for s in comps])
    else:
        x = np.zeros(shape_u, dtype=int)
    input_map = x.reshape((1,) + shape_u)
    logger.debug(f"uniform auxiliaries for {len(labels)} labels, |X| = {net.input_alphabet}")
    return AdmissibleSpec(order, np.array([1.0]), u_alphabets, conditionals, net.input_alphabet, input_map)
