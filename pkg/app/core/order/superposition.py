"""
Superposition orders: partial orders on a message index family that refine
set inclusion. ``S <= S'`` means the codebook of S' is generated first and
the codebook of S is superimposed on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Optional, Sequence, Tuple
import logging

from app.core.order.labels import MessageIndexFamily, SubsetLabel, sorted_labels
from app.core.utils.error_handler import DomainError, InputError, OrderLawError

logger = logging.getLogger(__name__)

ORDER_KINDS = ("inclusion", "discrete", "explicit")

Pair = Tuple[SubsetLabel, SubsetLabel]


@dataclass(frozen=True)
class SuperpositionOrder:
    """
    Validated partial order on ``family``.

    ``pairs`` holds the strict relations (S, S') with S < S'; reflexive pairs
    are implied. Construct through :func:`make_order`.
    """

    family: MessageIndexFamily
    pairs: FrozenSet[Pair]
    kind: str = "explicit"
    _above: Dict[SubsetLabel, FrozenSet[SubsetLabel]] = field(default=None, repr=False, compare=False, hash=False)
    _below: Dict[SubsetLabel, FrozenSet[SubsetLabel]] = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        above = {s: set() for s in self.family}
        below = {s: set() for s in self.family}
        for lo, hi in self.pairs:
            above[lo].add(hi)
            below[hi].add(lo)
        object.__setattr__(self, "_above", {s: frozenset(v) for s, v in above.items()})
        object.__setattr__(self, "_below", {s: frozenset(v) for s, v in below.items()})

    @property
    def labels(self) -> Tuple[SubsetLabel, ...]:
        return self.family.labels

    def relation(self) -> FrozenSet[Pair]:
        """All pairs including reflexive ones."""
        return self.pairs | frozenset((s, s) for s in self.family)

    def leq(self, a: SubsetLabel, b: SubsetLabel) -> bool:
        self._require([a, b])
        return a == b or (a, b) in self.pairs

    def strictly_above(self, label: SubsetLabel) -> FrozenSet[SubsetLabel]:
        """The parents ``up({S}) minus {S}`` whose codewords S is generated on."""
        self._require([label])
        return self._above[label]

    def strictly_below(self, label: SubsetLabel) -> FrozenSet[SubsetLabel]:
        self._require([label])
        return self._below[label]

    def up_closure(self, labels: Iterable[SubsetLabel]) -> FrozenSet[SubsetLabel]:
        labels = frozenset(labels)
        self._require(labels)
        out = set(labels)
        for s in labels:
            out |= self._above[s]
        return frozenset(out)

    def down_closure(self, labels: Iterable[SubsetLabel]) -> FrozenSet[SubsetLabel]:
        labels = frozenset(labels)
        self._require(labels)
        out = set(labels)
        for s in labels:
            out |= self._below[s]
        return frozenset(out)

    def is_up_set(self, labels: Iterable[SubsetLabel]) -> bool:
        labels = frozenset(labels)
        return self.up_closure(labels) == labels

    def is_down_set(self, labels: Iterable[SubsetLabel]) -> bool:
        labels = frozenset(labels)
        return self.down_closure(labels) == labels

    def restrict(self, labels: Iterable[SubsetLabel]) -> "SuperpositionOrder":
        """Induced order on a sub-family; relations through outside labels are dropped."""
        sub = self.family.subfamily(labels)
        keep = sub.label_set()
        pairs = frozenset((a, b) for a, b in self.pairs if a in keep and b in keep)
        return SuperpositionOrder(sub, pairs, self.kind)

    def linear_extension(self) -> Tuple[SubsetLabel, ...]:
        # cardinality order is a linear extension of any order refining inclusion
        return sorted_labels(self.family)

    def to_json(self) -> dict:
        if self.kind in ("inclusion", "discrete"):
            return {"kind": self.kind}
        pairs = sorted(self.pairs, key=lambda p: (p[0].sort_key(), p[1].sort_key()))
        return {"kind": "explicit", "pairs": [[a.to_json(), b.to_json()] for a, b in pairs]}

    def _require(self, labels: Iterable[SubsetLabel]):
        for s in labels:
            if s not in self._above:
                raise DomainError(f"label {s} is not in the family {self.family}")

    def __str__(self) -> str:
        rel = ", ".join(f"{a}<{b}" for a, b in sorted(self.pairs, key=lambda p: (p[0].sort_key(), p[1].sort_key())))
        return f"{self.kind} order on {self.family}" + (f" [{rel}]" if rel else "")


def _transitive_closure(pairs: Iterable[Pair]) -> FrozenSet[Pair]:
    closure = set(pairs)
    changed = True
    while changed:
        changed = False
        succ: Dict[SubsetLabel, set] = {}
        for a, b in closure:
            succ.setdefault(a, set()).add(b)
        for a, b in list(closure):
            for c in succ.get(b, ()):
                if (a, c) not in closure:
                    closure.add((a, c))
                    changed = True
    return frozenset(closure)


def make_order(
    family: MessageIndexFamily,
    kind: str = "inclusion",
    pairs: Optional[Iterable[Sequence]] = None,
) -> SuperpositionOrder:
    """
    Build a validated superposition order.

    Args:
        family: labels the order lives on
        kind: ``inclusion``, ``discrete`` or ``explicit``
        pairs: for ``explicit``, the generating pairs (S, S') meaning S <= S'

    Returns:
        SuperpositionOrder with the transitive closure of the given pairs
    """
    if kind not in ORDER_KINDS:
        raise InputError(f"unknown order kind {kind!r}, expected one of {ORDER_KINDS}")

    if kind == "inclusion":
        strict = frozenset(
            (a, b) for a in family for b in family if a.is_proper_subset(b)
        )
        return SuperpositionOrder(family, strict, "inclusion")
    if kind == "discrete":
        return SuperpositionOrder(family, frozenset(), "discrete")

    given = []
    for pair in pairs or ():
        if len(pair) != 2:
            raise InputError(f"order pair must have two labels, got {pair!r}")
        a, b = (SubsetLabel.parse(x) for x in pair)
        for s in (a, b):
            if s not in family:
                raise DomainError(f"label {s} in order pair is not in the family {family}")
        if a != b:
            given.append((a, b))

    closure = _transitive_closure(given)
    for a, b in closure:
        if a == b or (b, a) in closure:
            raise OrderLawError(f"relation is not antisymmetric: {a} and {b} lie on a cycle")
    for a, b in closure:
        if not a.is_proper_subset(b):
            raise OrderLawError(f"superposition-order law violated: {a} <= {b} but {a} is not a subset of {b}")
    logger.debug(f"explicit order on {family}: {len(given)} given pairs, {len(closure)} after closure")
    return SuperpositionOrder(family, closure, "explicit")


def order_from_json(family: MessageIndexFamily, data) -> SuperpositionOrder:
    """``{"kind": "inclusion"}``, ``{"kind": "explicit", "pairs": [[S, S'], ...]}`` or a bare kind string."""
    if isinstance(data, str):
        return make_order(family, data)
    if not isinstance(data, dict) or "kind" not in data:
        raise InputError(f"invalid order specification: {data!r}")
    return make_order(family, data["kind"], data.get("pairs"))


def up_closure(order: SuperpositionOrder, labels: Iterable[SubsetLabel]) -> FrozenSet[SubsetLabel]:
    return order.up_closure(labels)


def down_closure(order: SuperpositionOrder, labels: Iterable[SubsetLabel]) -> FrozenSet[SubsetLabel]:
    return order.down_closure(labels)


def max_up_subset(order: SuperpositionOrder, labels: Iterable[SubsetLabel]) -> FrozenSet[SubsetLabel]:
    """Largest up-set contained in ``labels``: the S whose whole up-closure stays inside."""
    labels = frozenset(labels)
    order._require(labels)
    return frozenset(s for s in labels if order.strictly_above(s) <= labels)
