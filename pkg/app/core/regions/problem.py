"""
Problem specifications: message index sets E and F, the superposition order
on F and the tuple X' the entropy symbols are evaluated against.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import AbstractSet, Any, Dict, FrozenSet, List, Optional, Tuple, Union
import logging

import numpy as np
from pydantic import BaseModel, Field

from app.config.settings import get_settings
from app.core.channels.binding import bind_channel, channel_from_json
from app.core.channels.combination import CombinationNetwork
from app.core.info.admissible import AdmissibleSpec, assemble_joint, random_admissible_spec
from app.core.info.symbols import Q
from app.core.order.labels import MessageIndexFamily, SubsetLabel, all_nonempty_subsets
from app.core.order.superposition import SuperpositionOrder, make_order, order_from_json
from app.core.utils.error_handler import DomainError, InputError

logger = logging.getLogger(__name__)
settings = get_settings()

Pair = Tuple[SubsetLabel, SubsetLabel]


def split_pairs(E: MessageIndexFamily, F: MessageIndexFamily, allowed: Optional[AbstractSet[Pair]] = None) -> Tuple[Pair, ...]:
    """
    Legal splits (S, S'): S in E, S' in F, S a subset of S'.

    The diagonal S -> S is always legal; ``allowed`` restricts the proper
    supersets, None permits all of them.
    """
    return tuple((s, t) for s in E for t in F
                 if s.issubset(t) and (s == t or allowed is None or (s, t) in allowed))


def parse_splits(K: int, splits) -> Optional[FrozenSet[Pair]]:
    """``None``/``"all"``, ``"none"`` or a list of ``[from, to]`` label pairs."""
    if splits is None or splits == "all":
        return None
    if splits == "none":
        return frozenset()
    if isinstance(splits, str):
        raise InputError(f"unknown split setting {splits!r}, expected 'all', 'none' or a list of pairs")
    pairs = set()
    for item in splits:
        try:
            lo, hi = item
        except (TypeError, ValueError):
            raise InputError(f"split {item!r} is not a [from, to] pair") from None
        lo, hi = SubsetLabel.parse(lo), SubsetLabel.parse(hi)
        if lo.max_receiver > K or hi.max_receiver > K:
            raise DomainError(f"split {lo}->{hi} leaves [1:{K}]")
        pairs.add((lo, hi))
    return frozenset(pairs)


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """
    E, F with E a subset of F, a superposition order on F and optionally X'.

    ``oracle`` replaces the assembled joint as entropy source (combination
    networks). ``time_sharing=False`` drops Q from every conditioning set.
    ``splits`` lists the permitted proper splits S -> S'; None permits every
    S' in F containing S and an empty set turns rate-splitting off.
    """

    E: MessageIndexFamily
    F: MessageIndexFamily
    order: SuperpositionOrder
    x_prime: Optional[AdmissibleSpec] = None
    time_sharing: bool = True
    oracle: Any = None
    splits: Optional[FrozenSet[Pair]] = None

    def __post_init__(self):
        if self.E.ground_K != self.F.ground_K:
            raise DomainError(f"E lives on [1:{self.E.ground_K}] but F on [1:{self.F.ground_K}]")
        if not self.E.issubset(self.F):
            missing = [str(s) for s in self.E if s not in self.F]
            raise DomainError(f"E must be contained in F; missing {missing}")
        if self.order.family.label_set() != self.F.label_set():
            raise DomainError(f"order is defined on {self.order.family}, expected F = {self.F}")
        if self.x_prime is not None and set(self.x_prime.labels) != set(self.F.labels):
            raise DomainError(f"X' carries auxiliaries for {[str(s) for s in self.x_prime.labels]}, F is {self.F}")
        if self.splits is not None:
            self._check_splits()

    def _check_splits(self):
        for lo, hi in self.splits:
            if lo not in self.E or hi not in self.F or not lo.issubset(hi):
                raise DomainError(f"split {lo}->{hi} needs {lo} in E = {self.E}, {hi} in F = {self.F} and {lo} a subset of {hi}")
        # chained splits lo->mid->hi need lo->hi as well
        strict = {(lo, hi) for lo, hi in self.splits if lo != hi}
        for lo, mid in strict:
            for mid2, hi in strict:
                if mid == mid2 and (lo, hi) not in strict:
                    raise DomainError(f"splits {lo}->{mid} and {mid}->{hi} also need {lo}->{hi}")

    @classmethod
    def build(cls, K: int, E, F=None, order: Union[str, dict] = "inclusion", pairs=None,
              x_prime: Optional[AdmissibleSpec] = None, time_sharing: bool = True, oracle: Any = None,
              splits=None) -> "ProblemSpec":
        E = E if isinstance(E, MessageIndexFamily) else MessageIndexFamily.of(K, E)
        F = E if F is None else (F if isinstance(F, MessageIndexFamily) else MessageIndexFamily.of(K, F))
        if isinstance(order, SuperpositionOrder):
            ordered = order
        elif isinstance(order, dict):
            ordered = order_from_json(F, order)
        else:
            ordered = make_order(F, order, pairs)
        return cls(E, F, ordered, x_prime, time_sharing, oracle, parse_splits(F.ground_K, splits))

    @property
    def K(self) -> int:
        return self.F.ground_K

    @property
    def conditioning(self) -> FrozenSet[str]:
        return frozenset({Q}) if self.time_sharing else frozenset()

    @property
    def extra_labels(self):
        """F minus E, the labels whose rates are embedded as 0."""
        return tuple(s for s in self.F if s not in self.E)

    @cached_property
    def assignment(self):
        """Entropy source for binding: the oracle, or the assembled joint of X' with its channel."""
        if self.oracle is not None:
            return self.oracle
        if self.x_prime is None or not self.x_prime.has_channel:
            return None
        return assemble_joint(self.x_prime)

    def with_x_prime(self, x_prime: AdmissibleSpec) -> "ProblemSpec":
        return ProblemSpec(self.E, self.F, self.order, x_prime, self.time_sharing, self.oracle, self.splits)

    def split_pairs(self) -> Tuple[Pair, ...]:
        return split_pairs(self.E, self.F, self.splits)

    def strict_splits(self) -> Tuple[Pair, ...]:
        return tuple((s, t) for s, t in self.split_pairs() if s != t)

    def describe(self) -> str:
        text = f"K={self.K} E={self.E} F={self.F} {self.order.kind} order"
        if not self.time_sharing:
            text += ", no time-sharing"
        if self.splits is not None:
            text += ", splits " + (", ".join(f"{s}->{t}" for s, t in self.strict_splits()) or "off")
        return text


class RandomXPrime(BaseModel):
    """Seeded random X' (Dirichlet conditionals and channel)."""

    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)
    max_alphabet: int = Field(default=2, ge=2)
    q_size: int = Field(default=1, ge=1)


class ProblemSpecModel(BaseModel):
    """JSON form of a problem specification."""

    K: int = Field(..., ge=1, description="number of receivers")
    E: List[Union[List[int], str, int]] = Field(..., description="message labels")
    F: Optional[List[Union[List[int], str, int]]] = Field(default=None, description="labels after rate-splitting, defaults to E")
    order: Union[str, Dict[str, Any]] = Field(default="inclusion")
    time_sharing: bool = True
    splits: Optional[Union[str, List[List[Union[List[int], str, int]]]]] = Field(
        default=None, description="'all' (default), 'none' or a list of [from, to] label pairs")
    x_prime: Optional[Dict[str, Any]] = None
    random_x_prime: Optional[RandomXPrime] = None
    channel: Optional[Dict[str, Any]] = None

    def to_spec(self) -> ProblemSpec:
        spec = ProblemSpec.build(self.K, self.E, self.F, self.order, time_sharing=self.time_sharing, splits=self.splits)
        x_prime = None
        if self.x_prime is not None:
            x_prime = AdmissibleSpec.from_json(self.x_prime)
        elif self.random_x_prime is not None:
            rnd = self.random_x_prime
            x_prime = random_admissible_spec(spec.order, np.random.default_rng(rnd.seed), rnd.max_alphabet, rnd.q_size)
        oracle = None
        if self.channel is not None:
            chan = channel_from_json(self.channel)
            if isinstance(chan, CombinationNetwork):
                oracle = chan.oracle(spec.F)
            elif x_prime is None:
                raise InputError("a tabular channel needs an X' to attach to")
            else:
                x_prime = bind_channel(x_prime, chan)
        return ProblemSpec(spec.E, spec.F, spec.order, x_prime, self.time_sharing, oracle, spec.splits)


def random_problem_spec(rng: np.random.Generator, K: Optional[int] = None, max_labels: int = 4,
                        max_alphabet: int = 2, q_size: int = 1, time_sharing: bool = True) -> ProblemSpec:
    """
    Random (K, E, F, order, X') for property checks.

    K is 2 or 3, F has at most ``max_labels`` labels, the order is inclusion,
    discrete or a random sub-relation of inclusion.
    """
    K = K or int(rng.integers(2, 4))
    universe = list(all_nonempty_subsets(K))
    n_f = int(rng.integers(1, min(max_labels, len(universe)) + 1))
    F_labels = [universe[i] for i in sorted(rng.choice(len(universe), size=n_f, replace=False))]
    n_e = int(rng.integers(1, n_f + 1))
    E_labels = [F_labels[i] for i in sorted(rng.choice(n_f, size=n_e, replace=False))]
    F = MessageIndexFamily(K, tuple(F_labels))
    E = MessageIndexFamily(K, tuple(E_labels))

    kind = str(rng.choice(["inclusion", "discrete", "explicit"]))
    if kind == "explicit":
        candidates = [(a, b) for a in F for b in F if a.is_proper_subset(b)]
        keep = [p for p in candidates if rng.random() < 0.5]
        order = make_order(F, "explicit", keep)
    else:
        order = make_order(F, kind)
    x_prime = random_admissible_spec(order, rng, max_alphabet=max_alphabet, q_size=q_size)
    spec = ProblemSpec(E, F, order, x_prime, time_sharing)
    logger.debug(f"random problem: {spec.describe()}")
    return spec
