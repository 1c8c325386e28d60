"""
Groupcast labels and message index families.

A label is a nonempty subset of receivers [1:K] stored as a bitmask; bit
``j - 1`` is set when receiver ``j`` is a member.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import total_ordering
from typing import Iterable, Iterator, List, Sequence, Tuple, Union
import logging

from app.config.settings import get_settings
from app.core.utils.error_handler import DomainError, InputError

logger = logging.getLogger(__name__)
settings = get_settings()


@total_ordering
@dataclass(frozen=True)
class SubsetLabel:
    """Nonempty subset of receivers, e.g. ``SubsetLabel.of([1, 2, 4])`` for M_124."""

    mask: int

    def __post_init__(self):
        if not isinstance(self.mask, int) or self.mask <= 0:
            raise DomainError(f"label must be a nonempty receiver set, got mask {self.mask!r}")
        if self.mask.bit_length() > settings.MAX_RECEIVERS:
            raise DomainError(
                f"label {self.mask:b} exceeds MAX_RECEIVERS={settings.MAX_RECEIVERS}"
            )

    @classmethod
    def of(cls, members: Iterable[int]) -> "SubsetLabel":
        mask = 0
        for j in members:
            if not isinstance(j, int) or j < 1:
                raise DomainError(f"receiver index must be a positive integer, got {j!r}")
            mask |= 1 << (j - 1)
        return cls(mask)

    @classmethod
    def parse(cls, text: Union[str, int, Sequence[int], "SubsetLabel"]) -> "SubsetLabel":
        """Accepts ``"124"``, ``"1.10"``, ``[1, 2, 4]`` or an existing label."""
        if isinstance(text, SubsetLabel):
            return text
        if isinstance(text, int) and not isinstance(text, bool):
            return cls.parse(str(text))
        if isinstance(text, (list, tuple)):
            return cls.of(int(j) for j in text)
        raw = str(text).strip().strip("{}")
        if not raw:
            raise InputError("empty label")
        try:
            if "." in raw or "," in raw:
                parts = raw.replace(",", ".").split(".")
                return cls.of(int(p) for p in parts if p)
            return cls.of(int(ch) for ch in raw)
        except ValueError as e:
            raise InputError(f"cannot parse label {text!r}") from e

    @property
    def members(self) -> Tuple[int, ...]:
        out = []
        mask, j = self.mask, 1
        while mask:
            if mask & 1:
                out.append(j)
            mask >>= 1
            j += 1
        return tuple(out)

    @property
    def cardinality(self) -> int:
        return bin(self.mask).count("1")

    @property
    def max_receiver(self) -> int:
        return self.mask.bit_length()

    def contains(self, j: int) -> bool:
        return j >= 1 and bool(self.mask >> (j - 1) & 1)

    def issubset(self, other: "SubsetLabel") -> bool:
        return self.mask & ~other.mask == 0

    def is_proper_subset(self, other: "SubsetLabel") -> bool:
        return self.mask != other.mask and self.issubset(other)

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.cardinality, self.members)

    def __lt__(self, other: "SubsetLabel") -> bool:
        if not isinstance(other, SubsetLabel):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    @property
    def tag(self) -> str:
        # "124" while every receiver is a single digit, "1.10" otherwise
        members = self.members
        if members[-1] < 10:
            return "".join(str(j) for j in members)
        return ".".join(str(j) for j in members)

    def to_json(self) -> List[int]:
        return list(self.members)

    def __str__(self) -> str:
        return self.tag

    def __repr__(self) -> str:
        return f"SubsetLabel({self.tag})"


def sorted_labels(labels: Iterable[SubsetLabel]) -> Tuple[SubsetLabel, ...]:
    return tuple(sorted(set(labels), key=SubsetLabel.sort_key))


def all_nonempty_subsets(K: int) -> Tuple[SubsetLabel, ...]:
    return sorted_labels(SubsetLabel(mask) for mask in range(1, 1 << K))


@dataclass(frozen=True)
class MessageIndexFamily:
    """A set of labels over the ground set [1:ground_K] (houses E and F)."""

    ground_K: int
    labels: Tuple[SubsetLabel, ...] = field(default=())

    def __post_init__(self):
        if not isinstance(self.ground_K, int) or self.ground_K < 1:
            raise DomainError(f"ground_K must be a positive integer, got {self.ground_K!r}")
        if self.ground_K > settings.MAX_RECEIVERS:
            raise DomainError(f"K={self.ground_K} exceeds MAX_RECEIVERS={settings.MAX_RECEIVERS}")
        labels = tuple(SubsetLabel.parse(s) for s in self.labels)
        if len(set(labels)) != len(labels):
            raise DomainError("duplicate labels in message index family")
        for s in labels:
            if s.max_receiver > self.ground_K:
                raise DomainError(f"label {s} is not a subset of [1:{self.ground_K}]")
        object.__setattr__(self, "labels", sorted_labels(labels))

    @classmethod
    def of(cls, ground_K: int, labels: Iterable) -> "MessageIndexFamily":
        return cls(ground_K, tuple(SubsetLabel.parse(s) for s in labels))

    @classmethod
    def full(cls, ground_K: int) -> "MessageIndexFamily":
        return cls(ground_K, all_nonempty_subsets(ground_K))

    def __iter__(self) -> Iterator[SubsetLabel]:
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self.labels

    def label_set(self) -> frozenset:
        return frozenset(self.labels)

    def issubset(self, other: "MessageIndexFamily") -> bool:
        return set(self.labels) <= set(other.labels)

    def subfamily(self, labels: Iterable[SubsetLabel]) -> "MessageIndexFamily":
        labels = tuple(labels)
        missing = [s for s in labels if s not in self.labels]
        if missing:
            raise DomainError(f"labels {[str(s) for s in missing]} are not in the family")
        return MessageIndexFamily(self.ground_K, labels)

    def to_json(self) -> dict:
        return {"K": self.ground_K, "labels": [s.to_json() for s in self.labels]}

    @classmethod
    def from_json(cls, data: dict) -> "MessageIndexFamily":
        try:
            return cls.of(int(data["K"]), data["labels"])
        except (KeyError, TypeError) as e:
            raise InputError(f"invalid message index family: {e}") from e

    def __str__(self) -> str:
        return "{" + ",".join(s.tag for s in self.labels) + "}"


def receiver_window(family: MessageIndexFamily, j: int) -> MessageIndexFamily:
    """Labels of ``family`` containing receiver ``j``, the set W_j."""
    if not isinstance(j, int) or not 1 <= j <= family.ground_K:
        raise DomainError(f"receiver {j!r} is outside [1:{family.ground_K}]")
    return MessageIndexFamily(family.ground_K, tuple(s for s in family if s.contains(j)))
