"""
Rate regions from the literature, written directly with mutual-information
right-hand sides, and the problem specifications they are compared against.
"""

from __future__ import annotations

from typing import Callable, Dict, List, Optional, Tuple
import logging

import numpy as np

from app.core.channels.tabular import TabularBC, degraded_bc_instance
from app.core.geometry.entropy_expr import EntropyExpr
from app.core.geometry.system import Inequality, InequalitySystem, VariableName, nonnegativity
from app.core.info.admissible import AdmissibleSpec
from app.core.info.distribution import mi_symbol
from app.core.info.symbols import Q, X, u_name, y_name
from app.core.order.labels import SubsetLabel
from app.core.regions.problem import ProblemSpec
from app.core.utils.error_handler import DimensionMismatchError, InputError

logger = logging.getLogger(__name__)


def _label(tag) -> SubsetLabel:
    return SubsetLabel.parse(tag)


def _R(*tags) -> Dict[VariableName, int]:
    return {VariableName.rate(_label(t)): 1 for t in tags}


def _U(*tags) -> List[str]:
    return [u_name(_label(t)) for t in tags]


def _region(name: str, tags, bounds: List[Tuple[Dict[VariableName, int], EntropyExpr]]) -> InequalitySystem:
    variables = [VariableName.rate(_label(t)) for t in tags]
    rows = [Inequality.leq(coeffs, rhs, f"{name} {i}") for i, (coeffs, rhs) in enumerate(bounds, 1)]
    rows.extend(nonnegativity(variables))
    return InequalitySystem.of(variables, rows)


def korner_marton_region() -> InequalitySystem:
    """Degraded message sets, M_12 common and M_1 private; no time-sharing."""
    U = _U(12)
    return _region("korner_marton", [1, 12], [
        (_R(12), mi_symbol(U, [y_name(2)])),
        (_R(1), mi_symbol([X], [y_name(1)], U)),
        (_R(1, 12), mi_symbol([X], [y_name(1)])),
    ])


def cover_region() -> InequalitySystem:
    """Independent private and common codebooks, each receiver decoding its pair jointly."""
    rows = []
    for j, own in ((1, 1), (2, 2)):
        Y = [y_name(j)]
        rows += [
            (_R(own), mi_symbol(_U(own), _U(12) + Y, [Q])),
            (_R(12), mi_symbol(_U(12), _U(own) + Y, [Q])),
            (_R(own, 12), mi_symbol(_U(own, 12), Y, [Q])),
        ]
    return _region("cover", [1, 2, 12], rows)


def two_user_region() -> InequalitySystem:
    """Two receivers, two private and one common message, superposition along inclusion."""
    Y1, Y2 = [y_name(1)], [y_name(2)]
    return _region("two_user_fm", [1, 2, 12], [
        (_R(1, 12), mi_symbol(_U(1, 12), Y1, [Q])),
        (_R(2, 12), mi_symbol(_U(2, 12), Y2, [Q])),
        (_R(1, 2, 12), mi_symbol(_U(2, 12), Y2, [Q]) + mi_symbol(_U(1), Y1, _U(12) + [Q])),
        (_R(1, 2, 12), mi_symbol(_U(2), Y2, _U(12) + [Q]) + mi_symbol(_U(1, 12), Y1, [Q])),
    ])


def nair_elgamal_region() -> InequalitySystem:
    """
    Three receivers, M_123 for everyone and M_1 for receiver 1, with
    ``U = U_123`` and ``V = U_13``.
    """
    U, V = _U(123), _U(13)
    Y1, Y2, Y3 = [y_name(1)], [y_name(2)], [y_name(3)]
    return _region("nair_elgamal", [1, 123], [
        (_R(123), mi_symbol(U, Y2)),
        (_R(123), mi_symbol(V, Y3)),
        (_R(1), mi_symbol([X], Y1, U)),
        (_R(1, 123), mi_symbol(V, Y3) + mi_symbol([X], Y1, V)),
        (_R(1), mi_symbol([X], Y1, V) + mi_symbol(V, Y3, U)),
    ])


def marton_region() -> InequalitySystem:
    """Marton's region without a common message."""
    Y1, Y2 = [y_name(1)], [y_name(2)]
    return _region("marton", [1, 2], [
        (_R(1), mi_symbol(_U(1), Y1)),
        (_R(2), mi_symbol(_U(2), Y2)),
        (_R(1, 2), mi_symbol(_U(1), Y1) + mi_symbol(_U(2), Y2) - mi_symbol(_U(1), _U(2))),
    ])


KNOWN_REGIONS: Dict[str, Callable[[], InequalitySystem]] = {
    "korner_marton": korner_marton_region,
    "cover": cover_region,
    "two_user_fm": two_user_region,
    "nair_elgamal": nair_elgamal_region,
    "marton": marton_region,
}

_PROBLEMS = {
    "korner_marton": dict(K=2, E=["1", "12"], order="inclusion", time_sharing=False, splits="none"),
    "cover": dict(K=2, E=["1", "2", "12"], order="discrete", time_sharing=True, splits="none"),
    "two_user_fm": dict(K=2, E=["1", "2", "12"], order="inclusion", time_sharing=True),
    "nair_elgamal": dict(K=3, E=["1", "123"], F=["1", "13", "123"], order="inclusion", time_sharing=False,
                         splits=[["1", "13"]]),
    "marton": dict(K=2, E=["1", "2"], order="discrete", time_sharing=False),
}


def known_region(name: str, x_prime=None) -> InequalitySystem:
    """
    A literature region by name, bound to ``x_prime`` when one is given.

    ``x_prime`` is any entropy source: a joint distribution, an oracle or a
    term -> value mapping.
    """
    try:
        build = KNOWN_REGIONS[name]
    except KeyError:
        raise InputError(f"unknown region {name!r}, expected one of {sorted(KNOWN_REGIONS)}") from None
    region = build()
    return region if x_prime is None else region.bind(x_prime)


def known_problem(name: str, x_prime: Optional[AdmissibleSpec] = None) -> ProblemSpec:
    """The (E, F, order, time-sharing, splits) setting a literature region corresponds to."""
    try:
        params = dict(_PROBLEMS[name])
    except KeyError:
        raise InputError(f"unknown region {name!r}, expected one of {sorted(_PROBLEMS)}") from None
    time_sharing = params.pop("time_sharing")
    return ProblemSpec.build(x_prime=x_prime, time_sharing=time_sharing, **params)


def nair_elgamal_channel(rng: np.random.Generator, x_alphabet: int = 2, y_alphabet: int = 2,
                         concentration: float = 1.0) -> TabularBC:
    """
    Random three-receiver channel with ``X -> Y_1 -> Y_2`` degraded and Y_3 fed
    directly from X.
    """
    def stage(rows, cols):
        return rng.dirichlet(np.full(cols, concentration), size=rows)

    return degraded_bc_instance([stage(x_alphabet, y_alphabet), stage(y_alphabet, y_alphabet)],
                                side=stage(x_alphabet, y_alphabet))


def nair_elgamal_instance(rng: np.random.Generator, channel: Optional[TabularBC] = None,
                          max_alphabet: int = 2, concentration: float = 1.0) -> ProblemSpec:
    """
    Chain ``U_1 <= U_13 <= U_123`` with ``X = U_1`` and U_1 depending on U_13 only,
    so that ``U_123 - U_13 - U_1`` is a Markov chain.
    """
    spec = known_problem("nair_elgamal")
    order = spec.order
    l1, l13, l123 = _label(1), _label(13), _label(123)
    sizes = {s: int(rng.integers(2, max_alphabet + 1)) for s in (l13, l123)}
    sizes[l1] = channel.input_alphabet if channel is not None else int(rng.integers(2, max_alphabet + 1))

    def draw(prefix, size):
        return rng.dirichlet(np.full(size, concentration), size=prefix).reshape(prefix + (size,))

    conditionals = {
        l123: draw((1,), sizes[l123]),
        l13: draw((1, sizes[l123]), sizes[l13]),
    }
    # parents of U_1 in label order are (U_13, U_123); repeat along U_123
    given_v = draw((1, sizes[l13]), sizes[l1])
    conditionals[l1] = np.repeat(given_v[:, :, None, :], sizes[l123], axis=2)

    input_map = np.broadcast_to(
        np.arange(sizes[l1]).reshape(1, sizes[l1], 1, 1),
        (1, sizes[l1], sizes[l13], sizes[l123]),
    ).copy()
    if channel is None:
        channel = nair_elgamal_channel(rng, x_alphabet=sizes[l1], y_alphabet=max_alphabet, concentration=concentration)
    if channel.input_alphabet != sizes[l1]:
        raise DimensionMismatchError(f"channel input alphabet {channel.input_alphabet} differs from |U_1| = {sizes[l1]}")
    x_prime = AdmissibleSpec(order, np.array([1.0]), sizes, conditionals, sizes[l1], input_map,
                             channel.output_alphabets, channel.W)
    return spec.with_x_prime(x_prime)
