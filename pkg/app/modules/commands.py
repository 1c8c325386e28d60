"""
Verb handlers behind the command line.

Each handler takes a validated :class:`Command` and returns a
:class:`CommandResult` carrying the JSON artifact, a text report and the
exit status. Nothing here touches stdout or the input files.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Literal, Optional
import logging

from pydantic import BaseModel, Field, model_validator

from app.core.channels.combination import CombinationNetwork
from app.core.covering.experiment import CoveringExperiment
from app.core.covering.simulate import run_covering
from app.core.geometry.compare import region_equal
from app.core.geometry.entropy_expr import MappingSource
from app.core.geometry.fme import REDUNDANCY_MODES, fm_eliminate
from app.core.geometry.system import InequalitySystem, parse_variables
from app.core.info.admissible import AdmissibleSpec, assemble_joint, check_admissible
from app.core.info.distribution import JointDistribution
from app.core.info.symbols import label_of
from app.core.order.labels import MessageIndexFamily
from app.core.order.superposition import SuperpositionOrder, order_from_json
from app.core.regions.binning import gamma_table, project_theorem4, theorem4_system
from app.core.regions.problem import ProblemSpecModel
from app.core.regions.superposition import project_theorem1, theorem1_system, theorem2_region
from app.core.utils.error_handler import EXIT_NEGATIVE, EXIT_OK, InputError
from app.core.utils.io_utils import fraction_from_json, load_json
from app.modules import reports
from app.modules.demos import DEMOS, run_demo

logger = logging.getLogger(__name__)

Verb = Literal["build", "eliminate", "compare", "gamma", "admissible", "covering", "demo"]
Form = Literal["split", "projected", "cone", "binning", "binning-projected"]

_ARITY = {
    "build": 1,
    "eliminate": 1,
    "compare": 2,
    "gamma": 1,
    "admissible": 1,
    "covering": 1,
    "demo": 0,
}


class Command(BaseModel):
    """One invocation of the command line, validated before anything runs."""

    verb: Verb
    inputs: List[Path] = Field(default_factory=list)
    name: Optional[str] = Field(default=None, description="demo name")
    output: Optional[Path] = None
    order: Optional[str] = Field(default=None, description="order kind or path to an order JSON")
    eliminate: Optional[str] = Field(default=None, description="comma separated variable names")
    tol: Optional[float] = Field(default=None, ge=0)
    redundancy: Optional[str] = None
    seed: Optional[int] = None
    cap: Optional[int] = Field(default=None, ge=1)
    assign: Optional[Path] = None
    form: Form = "split"
    text: bool = False

    @model_validator(mode="after")
    def _check(self) -> "Command":
        if len(self.inputs) != _ARITY[self.verb]:
            raise ValueError(f"{self.verb} takes {_ARITY[self.verb]} input file(s), got {len(self.inputs)}")
        if self.redundancy is not None and self.redundancy not in REDUNDANCY_MODES:
            raise ValueError(f"redundancy must be one of {REDUNDANCY_MODES}")
        if self.verb == "eliminate" and not self.eliminate:
            raise ValueError("eliminate needs --eliminate")
        if self.verb == "demo" and self.name not in DEMOS:
            raise ValueError(f"unknown demo {self.name!r}, expected one of {sorted(DEMOS)}")
        return self


@dataclass
class CommandResult:
    payload: Dict[str, Any]
    report: str
    status: int = EXIT_OK


def load_assignment(path: Optional[Path]):
    """
    Entropy source from a JSON file.

    Accepted shapes: ``{"entropies": {...}}``; a joint distribution
    ``{"symbols", "pmf"}``; an X' specification with a channel; or
    ``{"combination": {...}, "family": {...}}`` for the uniform
    combination-network assignment.
    """
    if path is None:
        return None
    data = load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: assignment must be a JSON object")
    if "entropies" in data:
        return MappingSource({k: fraction_from_json(v) for k, v in data["entropies"].items()})
    if "pmf" in data:
        return JointDistribution.from_json(data)
    if "combination" in data:
        if "family" not in data:
            raise InputError(f"{path}: a combination network needs the family F")
        return CombinationNetwork.from_json(data).oracle(MessageIndexFamily.from_json(data["family"]))
    if "u_alphabets" in data:
        spec = AdmissibleSpec.from_json(data)
        if not spec.has_channel:
            raise InputError(f"{path}: X' needs a channel to serve as entropy assignment")
        return assemble_joint(spec)
    raise InputError(f"{path}: unrecognized entropy assignment")


def _load_system(path: Path) -> InequalitySystem:
    return InequalitySystem.from_json(load_json(path))


def _order_for(dist: JointDistribution, spec: Optional[str]) -> SuperpositionOrder:
    labels = [s for s in (label_of(sym) for sym in dist.symbols) if s is not None]
    if not labels:
        raise InputError("distribution has no auxiliary U_S symbols")
    family = MessageIndexFamily.of(max(s.max_receiver for s in labels), labels)
    if spec is None:
        return order_from_json(family, "inclusion")
    if spec.endswith(".json"):
        return order_from_json(family, load_json(spec))
    return order_from_json(family, spec)


def cmd_build(command: Command) -> CommandResult:
    model = ProblemSpecModel.model_validate(load_json(command.inputs[0]))
    spec = model.to_spec()
    assignment = load_assignment(command.assign)
    if assignment is None:
        assignment = spec.assignment
    builders: Dict[str, Callable[[], InequalitySystem]] = {
        "split": lambda: theorem1_system(spec),
        "projected": lambda: project_theorem1(spec, assignment, command.redundancy),
        "cone": lambda: theorem2_region(spec, assignment, command.redundancy),
        "binning": lambda: theorem4_system(spec),
        "binning-projected": lambda: project_theorem4(spec, assignment, command.redundancy),
    }
    system = builders[command.form]()
    if command.assign is not None and not system.is_numeric():
        system = system.bind(assignment)
    title = f"{command.form} system, {spec.describe()}"
    return CommandResult(system.to_json(), reports.system_report(system, title), EXIT_NEGATIVE if system.is_empty() else EXIT_OK)


def cmd_eliminate(command: Command) -> CommandResult:
    system = _load_system(command.inputs[0])
    assignment = load_assignment(command.assign)
    if assignment is not None:
        system = system.bind(assignment)
    targets = parse_variables(command.eliminate)
    result = fm_eliminate(system, targets, command.redundancy or "syntactic")
    title = f"eliminated {', '.join(map(str, targets))}"
    return CommandResult(result.to_json(), reports.system_report(result, title), EXIT_NEGATIVE if result.is_empty() else EXIT_OK)


def cmd_compare(command: Command) -> CommandResult:
    A, B = (_load_system(p) for p in command.inputs)
    verdict = region_equal(A, B, load_assignment(command.assign), command.tol)
    return CommandResult(verdict.to_json(), reports.comparison_report(verdict), EXIT_OK if verdict else EXIT_NEGATIVE)


def cmd_gamma(command: Command) -> CommandResult:
    dist = JointDistribution.from_json(load_json(command.inputs[0]))
    order = _order_for(dist, command.order)
    table = gamma_table(dist, order)
    return CommandResult(table.to_json(), reports.gamma_report(table, command.tol))


def cmd_admissible(command: Command) -> CommandResult:
    dist = JointDistribution.from_json(load_json(command.inputs[0]))
    verdict = check_admissible(dist, _order_for(dist, command.order), command.tol)
    return CommandResult(verdict.to_json(), reports.admissible_report(verdict), EXIT_OK if verdict else EXIT_NEGATIVE)


def cmd_covering(command: Command) -> CommandResult:
    exp = CoveringExperiment.model_validate(load_json(command.inputs[0]))
    changes: Dict[str, Any] = {}
    if command.seed is not None:
        changes["seed"] = command.seed
    if command.cap is not None:
        changes["tuple_cap"] = command.cap
    if changes:
        exp = exp.with_params(**changes)
    estimate = run_covering(exp)
    return CommandResult(estimate.to_json(), reports.covering_report(estimate))


def cmd_demo(command: Command) -> CommandResult:
    result = run_demo(command.name, command.seed)
    return CommandResult(result.to_json(), reports.demo_report(result.name, result.passed, result.summary),
                         EXIT_OK if result.passed else EXIT_NEGATIVE)


HANDLERS: Dict[str, Callable[[Command], CommandResult]] = {
    "build": cmd_build,
    "eliminate": cmd_eliminate,
    "compare": cmd_compare,
    "gamma": cmd_gamma,
    "admissible": cmd_admissible,
    "covering": cmd_covering,
    "demo": cmd_demo,
}


def execute(command: Command) -> CommandResult:
    logger.info(f"running {command.verb}")
    return HANDLERS[command.verb](command)
