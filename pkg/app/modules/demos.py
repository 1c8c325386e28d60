"""
Packaged end-to-end examples. Every demo reads its seeds and parameters from
``fixtures/demos.json`` and returns a :class:`DemoResult`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional
import logging

import numpy as np

from app.core.channels.combination import CombinationNetwork
from app.core.channels.tabular import degradedness_certificate, TabularBC
from app.core.covering.experiment import covering_experiment
from app.core.covering.simulate import covering_ladder
from app.core.geometry.compare import evaluate, region_equal, remove_redundant, sample_vertices
from app.core.geometry.system import VariableName
from app.core.info.admissible import assemble_joint, label_distribution, random_admissible_spec
from app.core.order.labels import MessageIndexFamily, SubsetLabel
from app.core.order.superposition import order_from_json
from app.core.regions.binning import gamma, project_theorem4, random_binning_joint
from app.core.regions.known import known_problem, known_region, nair_elgamal_instance
from app.core.regions.problem import ProblemSpec
from app.core.regions.superposition import project_theorem1
from app.core.utils.error_handler import InputError
from app.core.utils.fixtures import FixtureManager

logger = logging.getLogger(__name__)


@dataclass
class DemoResult:
    name: str
    passed: bool
    summary: List[str] = field(default_factory=list)
    payload: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"demo": self.name, "passed": self.passed, "summary": list(self.summary), **self.payload}


def _params(fixtures: FixtureManager, name: str, seed: Optional[int]) -> Dict[str, Any]:
    params = dict(fixtures.section("demos", name))
    if seed is not None:
        params["seed"] = seed
    return params


def demo_combination3(fixtures: FixtureManager, seed: Optional[int] = None) -> DemoResult:
    """Three-user combination network with every groupcast message; counts the facets."""
    params = _params(fixtures, "combination3", seed)
    K = int(params["K"])
    net = CombinationNetwork.full(K, params["capacities"])
    F = MessageIndexFamily.full(K)
    spec = ProblemSpec.build(K, F, order="inclusion", oracle=net.oracle(F))
    projected = project_theorem1(spec, assignment=spec.assignment, redundancy="exact")
    region = remove_redundant(projected)
    facets = region.constraint_rows()
    expected = int(params.get("expected_inequalities", 15))
    summary = [f"{len(facets)} inequalities beyond nonnegativity (expected {expected})"]
    summary += [row.render() for row in facets]
    return DemoResult("combination3", len(facets) == expected, summary, {"system": region.to_json()})


def _compare_with_known(name: str, demo: str, fixtures: FixtureManager, seed: Optional[int]) -> DemoResult:
    params = _params(fixtures, demo, seed)
    rng = np.random.default_rng(int(params["seed"]))
    base = known_problem(name)
    x_prime = random_admissible_spec(base.order, rng, max_alphabet=int(params.get("max_alphabet", 2)),
                                     q_size=int(params.get("q_size", 1)))
    spec = base.with_x_prime(x_prime)
    joint = assemble_joint(x_prime)
    built = project_theorem1(spec, assignment=joint)
    literature = known_region(name, joint)
    verdict = region_equal(built, literature)
    summary = [f"{spec.describe()}: built region {'equals' if verdict else 'differs from'} the {name} region"]
    summary += [row.render() for row in remove_redundant(built).constraint_rows()]
    return DemoResult(demo, bool(verdict), summary, {"comparison": verdict.to_json(), "system": built.to_json()})


def demo_two_user(fixtures: FixtureManager, seed: Optional[int] = None) -> DemoResult:
    return _compare_with_known("two_user_fm", "two_user", fixtures, seed)


def demo_korner_marton(fixtures: FixtureManager, seed: Optional[int] = None) -> DemoResult:
    return _compare_with_known("korner_marton", "korner_marton", fixtures, seed)


def demo_cover(fixtures: FixtureManager, seed: Optional[int] = None) -> DemoResult:
    return _compare_with_known("cover", "cover", fixtures, seed)


def demo_nair_elgamal(fixtures: FixtureManager, seed: Optional[int] = None) -> DemoResult:
    """
    The projected region of a degraded instance: its sampled vertices satisfy
    the capacity region and the two regions are equal.
    """
    params = _params(fixtures, "nair_elgamal", seed)
    rng = np.random.default_rng(int(params["seed"]))
    spec = nair_elgamal_instance(rng, max_alphabet=int(params.get("max_alphabet", 2)))
    joint = spec.assignment
    chan = TabularBC(spec.x_prime.channel)
    degraded = degradedness_certificate(chan, 1, 2)
    region = project_theorem1(spec, assignment=joint)
    target = known_region("nair_elgamal", joint)
    variables = [VariableName.rate(SubsetLabel.parse(t)) for t in ("1", "123")]
    directions = [{v: Fraction(int(c)) for v, c in zip(variables, rng.integers(0, 5, size=2))}
                  for _ in range(int(params.get("directions", 12)))]
    directions = [d for d in directions if any(d.values())] + [{variables[0]: 1}, {variables[1]: 1}]
    vertices = sample_vertices(region, directions)
    misses = [v for v in vertices if not evaluate(target, None, v)]
    verdict = region_equal(region, target)
    summary = [
        f"receiver 2 is {'a' if degraded else 'not a'} degraded version of receiver 1",
        f"{len(vertices)} sampled vertices, {len(misses)} outside the capacity region",
        f"projected region {'equals' if verdict else 'differs from'} the capacity region",
    ]
    payload = {
        "vertices": [{str(k): float(x) for k, x in v.items()} for v in vertices],
        "comparison": verdict.to_json(),
    }
    return DemoResult("nair_elgamal", bool(degraded) and not misses and bool(verdict), summary, payload)


def demo_marton(fixtures: FixtureManager, seed: Optional[int] = None) -> DemoResult:
    """Binning without rate-splitting reproduces Marton's region."""
    params = _params(fixtures, "marton", seed)
    rng = np.random.default_rng(int(params["seed"]))
    spec = known_problem("marton")
    joint = random_binning_joint(spec.F.labels, spec.K, rng, max_alphabet=int(params.get("max_alphabet", 2)))
    built = project_theorem4(spec, assignment=joint)
    verdict = region_equal(built, known_region("marton", joint))
    summary = [f"binning region {'equals' if verdict else 'differs from'} Marton's region"]
    return DemoResult("marton", bool(verdict), summary, {"comparison": verdict.to_json(), "system": built.to_json()})


def demo_covering(fixtures: FixtureManager, seed: Optional[int] = None) -> DemoResult:
    """Covering success over a blocklength ladder at rates just inside the region."""
    params = _params(fixtures, "covering", seed)
    family = MessageIndexFamily.of(int(params["K"]), params["labels"])
    order = order_from_json(family, params.get("order", "discrete"))
    target = np.asarray(params["target"], dtype=float)
    dist = label_distribution(family.labels, target)
    threshold = max(gamma(dist, order, frozenset(family.labels)), 0.0)
    total = threshold + float(params.get("margin", 0.2))
    rates = {s: total / len(family) for s in family}
    exp = covering_experiment(order, target, rates, n=int(params["blocklengths"][-1]),
                              trials=int(params.get("trials", 100)), seed=int(params["seed"]),
                              epsilon=float(params.get("epsilon", 0.1)))
    ladder = covering_ladder(exp, params["blocklengths"])
    final = float(ladder["estimate"].iloc[-1])
    summary = [f"gamma(E) = {threshold:.5f} bits, sum rate {total:.5f}", ladder.to_string(index=False)]
    return DemoResult("covering", final >= 0.9, summary, {"ladder": ladder.to_dict(orient="records")})


DEMOS: Dict[str, Callable[..., DemoResult]] = {
    "combination3": demo_combination3,
    "two_user": demo_two_user,
    "korner_marton": demo_korner_marton,
    "cover": demo_cover,
    "nair_elgamal": demo_nair_elgamal,
    "marton": demo_marton,
    "covering": demo_covering,
}


def run_demo(name: str, seed: Optional[int] = None, fixtures: Optional[FixtureManager] = None) -> DemoResult:
    try:
        demo = DEMOS[name]
    except KeyError:
        raise InputError(f"unknown demo {name!r}, expected one of {sorted(DEMOS)}") from None
    logger.info(f"running demo {name}")
    result = demo(fixtures or FixtureManager(), seed)
    logger.info(f"demo {name}: {'passed' if result.passed else 'failed'}")
    return result
