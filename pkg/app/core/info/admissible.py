"""
Superposition-admitting tuples X' = (X, U_F, Q).

An :class:`AdmissibleSpec` carries the generation law
``p(q) prod_S p(u_S | u_{up(S) minus S}, q)``, a deterministic input map
``x = f(u_F, q)`` and optionally a broadcast channel ``W(y_1..y_K | x)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple
import logging
import math

import numpy as np

from app.config.settings import get_settings
from app.core.info.distribution import JointDistribution, VariableUniverse, check_table_size
from app.core.info.symbols import Q, X, u_name, u_names, y_name
from app.core.order.labels import MessageIndexFamily, SubsetLabel, sorted_labels
from app.core.order.superposition import SuperpositionOrder, order_from_json
from app.core.utils.error_handler import DimensionMismatchError, DomainError, InputError

logger = logging.getLogger(__name__)
settings = get_settings()


def _stochastic(table: np.ndarray, what: str):
    if np.any(table < 0):
        raise DomainError(f"{what} has negative entries")
    sums = table.reshape(-1, table.shape[-1]).sum(axis=1) if table.ndim > 1 else np.array([table.sum()])
    if np.any(np.abs(sums - 1.0) > settings.MASS_TOLERANCE * max(1, table.shape[-1])):
        raise DomainError(f"{what} has rows that do not sum to 1")


@dataclass(frozen=True, eq=False)
class AdmissibleSpec:
    """
    Factored description of X'.

    ``conditionals[S]`` has axes ``(Q, parents of S in label order, U_S)``.
    ``input_map`` has axes ``(Q, U_S for S in label order)`` with values in
    ``range(x_alphabet)``. ``channel`` has axes ``(X, Y_1, ..., Y_K)``.
    """

    order: SuperpositionOrder
    q_pmf: np.ndarray
    u_alphabets: Mapping[SubsetLabel, int]
    conditionals: Mapping[SubsetLabel, np.ndarray]
    x_alphabet: int
    input_map: np.ndarray
    y_alphabets: Tuple[int, ...] = ()
    channel: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        labels = self.labels
        q_pmf = np.asarray(self.q_pmf, dtype=float).reshape(-1)
        _stochastic(q_pmf, "p(q)")
        object.__setattr__(self, "q_pmf", q_pmf)
        if set(self.u_alphabets) != set(labels) or set(self.conditionals) != set(labels):
            raise DimensionMismatchError("u_alphabets and conditionals need exactly one entry per label of the order")

        conditionals = {}
        for s in labels:
            table = np.asarray(self.conditionals[s], dtype=float)
            expected = (len(q_pmf),) + tuple(self.u_alphabets[p] for p in self.parents(s)) + (self.u_alphabets[s],)
            if table.shape != expected:
                raise DimensionMismatchError(f"p(U_{s.tag}|parents, Q) has shape {table.shape}, expected {expected}")
            _stochastic(table, f"p(U_{s.tag}|parents, Q)")
            conditionals[s] = table
        object.__setattr__(self, "conditionals", conditionals)

        input_map = np.asarray(self.input_map, dtype=int)
        expected = (len(q_pmf),) + tuple(self.u_alphabets[s] for s in labels)
        if input_map.shape != expected:
            raise DimensionMismatchError(f"input map has shape {input_map.shape}, expected {expected}")
        if self.x_alphabet < 1 or input_map.min(initial=0) < 0 or input_map.max(initial=0) >= self.x_alphabet:
            raise DomainError(f"input map values must lie in [0, {self.x_alphabet})")
        object.__setattr__(self, "input_map", input_map)

        y_alphabets = tuple(int(a) for a in self.y_alphabets)
        object.__setattr__(self, "y_alphabets", y_alphabets)
        if self.channel is not None:
            channel = np.asarray(self.channel, dtype=float)
            if len(y_alphabets) != self.K:
                raise DimensionMismatchError(f"channel needs {self.K} output alphabets, got {len(y_alphabets)}")
            if channel.shape != (self.x_alphabet,) + y_alphabets:
                raise DimensionMismatchError(
                    f"channel has shape {channel.shape}, expected {(self.x_alphabet,) + y_alphabets}"
                )
            _stochastic(channel.reshape(self.x_alphabet, -1), "channel W(y|x)")
            object.__setattr__(self, "channel", channel)

    @property
    def K(self) -> int:
        return self.order.family.ground_K

    @property
    def labels(self) -> Tuple[SubsetLabel, ...]:
        return self.order.labels

    def parents(self, label: SubsetLabel) -> Tuple[SubsetLabel, ...]:
        return sorted_labels(self.order.strictly_above(label))

    @property
    def has_channel(self) -> bool:
        return self.channel is not None

    def universe(self) -> VariableUniverse:
        symbols = [Q] + u_names(self.labels) + [X]
        sizes = [len(self.q_pmf)] + [self.u_alphabets[s] for s in self.labels] + [self.x_alphabet]
        if self.has_channel:
            symbols += [y_name(j) for j in range(1, self.K + 1)]
            sizes += list(self.y_alphabets)
        return VariableUniverse(tuple(symbols), tuple(sizes))

    def with_channel(self, y_alphabets: Sequence[int], channel: np.ndarray) -> "AdmissibleSpec":
        return replace(self, y_alphabets=tuple(y_alphabets), channel=channel)

    def to_json(self) -> dict:
        return {
            "family": self.order.family.to_json(),
            "order": self.order.to_json(),
            "q_pmf": self.q_pmf.tolist(),
            "u_alphabets": {s.tag: int(self.u_alphabets[s]) for s in self.labels},
            "conditionals": {s.tag: self.conditionals[s].tolist() for s in self.labels},
            "x_alphabet": int(self.x_alphabet),
            "input_map": self.input_map.tolist(),
            "y_alphabets": list(self.y_alphabets),
            "channel": None if self.channel is None else self.channel.tolist(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "AdmissibleSpec":
        try:
            family = MessageIndexFamily.from_json(data["family"])
            order = order_from_json(family, data.get("order", "inclusion"))
            return cls(
                order=order,
                q_pmf=np.asarray(data.get("q_pmf", [1.0]), dtype=float),
                u_alphabets={SubsetLabel.parse(k): int(v) for k, v in data["u_alphabets"].items()},
                conditionals={SubsetLabel.parse(k): np.asarray(v, dtype=float) for k, v in data["conditionals"].items()},
                x_alphabet=int(data["x_alphabet"]),
                input_map=np.asarray(data["input_map"], dtype=int),
                y_alphabets=tuple(data.get("y_alphabets") or ()),
                channel=None if data.get("channel") is None else np.asarray(data["channel"], dtype=float),
            )
        except (KeyError, TypeError) as e:
            raise InputError(f"invalid admissible specification: {e}") from e


def _broadcast(table: np.ndarray, axes: Sequence[int], ndim: int) -> np.ndarray:
    """Place ``table``'s axes at positions ``axes`` of an ``ndim``-axis array, size 1 elsewhere."""
    perm = np.argsort(axes)
    table = np.transpose(table, perm)
    shape = [1] * ndim
    for ax, size in zip(sorted(axes), table.shape):
        shape[ax] = size
    return table.reshape(shape)


def generation_law(spec: AdmissibleSpec) -> np.ndarray:
    """p(q, u_F) with axes (Q, U_S in label order)."""
    labels = spec.labels
    ndim = 1 + len(labels)
    position = {s: 1 + i for i, s in enumerate(labels)}
    check_table_size((len(spec.q_pmf),) + tuple(spec.u_alphabets[s] for s in labels), "p(q, u_F)")
    law = _broadcast(spec.q_pmf, [0], ndim)
    for s in labels:
        axes = [0] + [position[p] for p in spec.parents(s)] + [position[s]]
        law = law * _broadcast(spec.conditionals[s], axes, ndim)
    return law


def assemble_joint(spec: AdmissibleSpec) -> JointDistribution:
    """
    Joint pmf over (Q, U_F, X[, Y_1..Y_K]) following the generation law.

    The (U_F, Q) marginal factors along the order by construction.
    """
    universe = spec.universe()
    check_table_size(universe.shape)
    law = generation_law(spec)
    onehot = np.eye(spec.x_alphabet)[spec.input_map]
    joint = law[..., None] * onehot
    if spec.has_channel:
        K = spec.K
        joint = joint.reshape(joint.shape + (1,) * K) * spec.channel.reshape((1,) * (joint.ndim - 1) + spec.channel.shape)
    logger.debug(f"assembled joint table with {joint.size} cells over {universe.symbols}")
    return JointDistribution(universe, joint, factor_spec=spec)


def label_distribution(labels: Iterable[SubsetLabel], pmf: np.ndarray) -> JointDistribution:
    """Target pmf over (U_S : S in labels), axes in label order."""
    return JointDistribution.from_table(u_names(sorted_labels(labels)), pmf)


@dataclass
class AdmissibilityVerdict:
    admissible: bool
    determinism_gap: float
    factorization_gap: float
    reasons: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.admissible

    def to_json(self) -> dict:
        return {
            "admissible": self.admissible,
            "H(X|U_F,Q)": self.determinism_gap,
            "KL": self.factorization_gap,
            "reasons": list(self.reasons),
        }


def check_admissible(dist: JointDistribution, order: SuperpositionOrder, tol: float = None) -> AdmissibilityVerdict:
    """
    Check that X is a function of (U_F, Q) and that p(u_F, q) factors along ``order``.

    The factorization gap is the divergence between p(u_F, q) and
    ``p(q) prod_S p(u_S | parents, q)``, which equals
    ``H(Q) + sum_S H(U_S | parents, Q) - H(U_F, Q)``. A missing Q is treated as constant.
    """
    tol = settings.NUMERIC_TOLERANCE if tol is None else tol
    q = {Q} if Q in dist.universe else set()
    uf = set(u_names(order.labels))
    missing = sorted(uf - set(dist.symbols))
    if missing:
        raise DomainError(f"distribution lacks auxiliaries {missing}")

    reasons = []
    det_gap = 0.0
    if X in dist.universe:
        det_gap = max(0.0, dist.conditional_entropy({X}, uf | q))
        if det_gap >= tol:
            reasons.append(f"X is not a function of (U_F, Q): H(X|U_F,Q) = {det_gap:.3g}")

    kl = dist.entropy(q)
    for s in order.labels:
        parents = set(u_names(order.strictly_above(s))) | q
        kl += dist.conditional_entropy({u_name(s)}, parents)
    kl -= dist.entropy(uf | q)
    kl = max(0.0, kl)
    if kl >= tol:
        reasons.append(f"p(U_F, Q) does not factor along the order: divergence {kl:.3g} bits")
    return AdmissibilityVerdict(not reasons, det_gap, kl, reasons)


def _dirichlet(rng: np.random.Generator, prefix: Tuple[int, ...], size: int, concentration: float) -> np.ndarray:
    return rng.dirichlet(np.full(size, concentration), size=prefix if prefix else None)


def random_admissible_spec(
    order: SuperpositionOrder,
    rng: np.random.Generator,
    max_alphabet: int = 2,
    q_size: int = 1,
    x_alphabet: Optional[int] = None,
    y_alphabets: Optional[Sequence[int]] = None,
    with_channel: bool = True,
    concentration: float = 1.0,
) -> AdmissibleSpec:
    """
    Random X' for ``order``: Dirichlet conditionals, a random input map and
    a random channel with Dirichlet rows.
    """
    labels = order.labels
    u_alphabets = {s: int(rng.integers(2, max_alphabet + 1)) for s in labels}
    x_alphabet = x_alphabet or max_alphabet
    q_pmf = _dirichlet(rng, (), q_size, concentration)
    conditionals = {}
    for s in labels:
        parents = sorted_labels(order.strictly_above(s))
        prefix = (q_size,) + tuple(u_alphabets[p] for p in parents)
        conditionals[s] = _dirichlet(rng, prefix, u_alphabets[s], concentration)
    input_map = rng.integers(0, x_alphabet, size=(q_size,) + tuple(u_alphabets[s] for s in labels))

    K = order.family.ground_K
    channel, ys = None, ()
    if with_channel:
        ys = tuple(y_alphabets) if y_alphabets is not None else (max_alphabet,) * K
        channel = _dirichlet(rng, (x_alphabet,), math.prod(ys), concentration).reshape((x_alphabet,) + ys)
    return AdmissibleSpec(order, q_pmf, u_alphabets, conditionals, x_alphabet, input_map, ys, channel)


def random_target_pmf(labels: Iterable[SubsetLabel], rng: np.random.Generator, max_alphabet: int = 2,
                      concentration: float = 1.0) -> JointDistribution:
    """Arbitrary correlated pmf over (U_S : S in labels)."""
    labels = sorted_labels(labels)
    shape = tuple(int(rng.integers(2, max_alphabet + 1)) for _ in labels)
    pmf = rng.dirichlet(np.full(math.prod(shape), concentration)).reshape(shape)
    return label_distribution(labels, pmf)
