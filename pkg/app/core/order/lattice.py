"""Down-set and up-set lattices of an induced sub-poset."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Tuple
import logging

from app.core.order.labels import SubsetLabel
from app.core.order.superposition import SuperpositionOrder

logger = logging.getLogger(__name__)

LabelSet = FrozenSet[SubsetLabel]


def labelset_key(labels: Iterable[SubsetLabel]) -> Tuple:
    ordered = sorted(labels, key=SubsetLabel.sort_key)
    return (len(ordered), tuple(s.sort_key() for s in ordered))


def format_labelset(labels: Iterable[SubsetLabel]) -> str:
    return "{" + ",".join(s.tag for s in sorted(labels, key=SubsetLabel.sort_key)) + "}"


@dataclass(frozen=True)
class LatticeFamily:
    """Down-sets (``flavor="down"``) or up-sets of ``base``, sorted by size then labels."""

    base: SuperpositionOrder
    members: Tuple[LabelSet, ...]
    flavor: str = "down"

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, item) -> bool:
        return frozenset(item) in self.members

    def nonempty(self) -> Tuple[LabelSet, ...]:
        return tuple(m for m in self.members if m)

    def is_lattice(self) -> bool:
        present = set(self.members)
        for a, b in combinations(self.members, 2):
            if a | b not in present or a & b not in present:
                return False
        return True

    def verify(self) -> bool:
        """Every member closed in the right direction, and the family closed under union and intersection."""
        check = self.base.is_down_set if self.flavor == "down" else self.base.is_up_set
        return all(check(m) for m in self.members) and self.is_lattice()


def _enumerate_closed(labels: Tuple[SubsetLabel, ...], required: Dict[SubsetLabel, LabelSet]) -> List[LabelSet]:
    # labels come in an order where every required label precedes its dependant
    found: List[LabelSet] = []

    def extend(i: int, chosen: frozenset):
        if i == len(labels):
            found.append(chosen)
            return
        s = labels[i]
        extend(i + 1, chosen)
        if required[s] <= chosen:
            extend(i + 1, chosen | {s})

    extend(0, frozenset())
    return found


def enumerate_down_sets(order: SuperpositionOrder, restricted_to: Iterable[SubsetLabel] = None) -> LatticeFamily:
    """All down-sets of the order induced on ``restricted_to`` (default: the whole family)."""
    induced = order.restrict(order.labels if restricted_to is None else restricted_to)
    ext = induced.linear_extension()
    members = _enumerate_closed(ext, {s: induced.strictly_below(s) for s in ext})
    members.sort(key=labelset_key)
    logger.debug(f"{len(members)} down-sets on {induced.family}")
    return LatticeFamily(induced, tuple(members), "down")


def enumerate_up_sets(order: SuperpositionOrder, restricted_to: Iterable[SubsetLabel] = None) -> LatticeFamily:
    """All up-sets of the induced order."""
    induced = order.restrict(order.labels if restricted_to is None else restricted_to)
    ext = tuple(reversed(induced.linear_extension()))
    members = _enumerate_closed(ext, {s: induced.strictly_above(s) for s in ext})
    members.sort(key=labelset_key)
    logger.debug(f"{len(members)} up-sets on {induced.family}")
    return LatticeFamily(induced, tuple(members), "up")
