"""
Plain-text reports for the command line.
"""

from typing import Iterable, Optional
import logging

import pandas as pd

from app.core.covering.simulate import CoveringEstimate
from app.core.geometry.compare import RegionComparison
from app.core.geometry.system import InequalitySystem
from app.core.info.admissible import AdmissibilityVerdict
from app.core.regions.binning import GammaTable

logger = logging.getLogger(__name__)


def system_report(system: InequalitySystem, title: Optional[str] = None) -> str:
    """Numbered rows with their provenance notes, nonnegativity listed last in one line."""
    lines = [title] if title else []
    constraints = InequalitySystem(system.variables, system.constraint_rows())
    lines.append(f"variables: {', '.join(str(v) for v in system.variables)}")
    if system.is_empty():
        lines.append("region is empty")
    lines.append(f"{len(constraints.rows)} inequalities beyond nonnegativity")
    if constraints.rows:
        lines.append(constraints.render())
    nonneg = sorted(str(v) for v in system.nonnegative_variables())
    if nonneg:
        lines.append(f"nonnegative: {', '.join(nonneg)}")
    return "\n".join(lines)


def comparison_report(result: RegionComparison) -> str:
    if result.equal:
        return "regions are equal"
    witness = ", ".join(f"{v}={float(x):.6g}" for v, x in (result.witness or {}).items())
    lines = [f"regions differ ({result.direction})"]
    if result.violated:
        lines.append(f"violated row: {result.violated}")
    if result.excess is not None:
        lines.append(f"excess: {float(result.excess):.6g}")
    if witness:
        lines.append(f"witness: {witness}")
    return "\n".join(lines)


def gamma_report(table: GammaTable, tol: Optional[float] = None) -> str:
    frame = table.to_frame()
    check = table.check(tol)
    with pd.option_context("display.float_format", "{:.6f}".format):
        body = frame.to_string(index=False)
    status = "contra-polymatroid: yes" if check else "contra-polymatroid: no\n" + "\n".join(check.reasons)
    return f"{body}\n{status}"


def admissible_report(verdict: AdmissibilityVerdict) -> str:
    lines = [
        f"admissible: {'yes' if verdict else 'no'}",
        f"H(X|U_F,Q) = {verdict.determinism_gap:.3g}",
        f"factorization divergence = {verdict.factorization_gap:.3g}",
    ]
    return "\n".join(lines + list(verdict.reasons))


def covering_report(estimate: CoveringEstimate) -> str:
    lo, hi = estimate.interval
    text = (f"n={estimate.n}: success {estimate.successes}/{estimate.trials} = {estimate.estimate:.3f} "
            f"(Wilson interval [{lo:.3f}, {hi:.3f}])")
    if estimate.capped_trials:
        text += f"\n{estimate.capped_trials} trials stopped at the tuple cap"
    return text


def ladder_report(ladder: pd.DataFrame) -> str:
    with pd.option_context("display.float_format", "{:.4f}".format):
        return ladder.to_string(index=False)


def demo_report(name: str, passed: bool, summary: Iterable[str]) -> str:
    return "\n".join([f"[{'PASS' if passed else 'FAIL'}] {name}", *summary])
