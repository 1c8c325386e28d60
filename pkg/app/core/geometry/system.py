"""
H-representation systems ``<a, x> <= b`` over named rate variables.

Coefficients are exact :class:`~fractions.Fraction` values; right-hand sides
are :class:`EntropyExpr` so projections stay exact until a distribution is bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union
import logging
import math
import re

from app.core.geometry.entropy_expr import EntropyExpr, Number
from app.core.order.labels import SubsetLabel
from app.core.utils.error_handler import DimensionMismatchError, DomainError, EvaluationError, InputError
from app.core.utils.io_utils import fraction_from_json, fraction_to_json

logger = logging.getLogger(__name__)

VARIABLE_KINDS = ("rate", "aux", "split", "slack")
_KIND_RANK = {k: i for i, k in enumerate(VARIABLE_KINDS)}
_SYMBOL_RANK = {"R": 0, "Rhat": 1, "Rtilde": 2, "r": 3, "lam": 4}
_NAME_PATTERN = re.compile(r"^([A-Za-z]+)_([0-9.]+)(?:->([0-9.]+))?$")


@dataclass(frozen=True)
class VariableName:
    """
    Structured variable identifier.

    ``R_12`` (rate), ``Rhat_12`` / ``Rtilde_12`` / ``r_12`` (aux),
    ``r_1->12`` (split) and ``lam_1->12`` (slack). Plain symbols without
    labels (``x``) are aux variables.
    """

    kind: str
    symbol: str
    labels: Tuple[SubsetLabel, ...] = ()

    def __post_init__(self):
        if self.kind not in VARIABLE_KINDS:
            raise DomainError(f"unknown variable kind {self.kind!r}")
        if self.kind in ("split", "slack"):
            if len(self.labels) != 2 or not self.labels[0].issubset(self.labels[1]):
                raise DomainError(f"{self.kind} variable needs a pair S -> S' with S a subset of S', got {self.labels}")

    @classmethod
    def rate(cls, label: SubsetLabel) -> "VariableName":
        return cls("rate", "R", (label,))

    @classmethod
    def rhat(cls, label: SubsetLabel) -> "VariableName":
        return cls("aux", "Rhat", (label,))

    @classmethod
    def rtilde(cls, label: SubsetLabel) -> "VariableName":
        return cls("aux", "Rtilde", (label,))

    @classmethod
    def covering(cls, label: SubsetLabel) -> "VariableName":
        return cls("aux", "r", (label,))

    @classmethod
    def split(cls, source: SubsetLabel, target: SubsetLabel) -> "VariableName":
        return cls("split", "r", (source, target))

    @classmethod
    def multiplier(cls, source: SubsetLabel, target: SubsetLabel) -> "VariableName":
        return cls("slack", "lam", (source, target))

    @classmethod
    def plain(cls, symbol: str) -> "VariableName":
        return cls("aux", symbol, ())

    @classmethod
    def parse(cls, text: str) -> "VariableName":
        text = text.strip()
        match = _NAME_PATTERN.match(text)
        if not match:
            if re.match(r"^[A-Za-z][A-Za-z0-9]*$", text):
                return cls.plain(text)
            raise InputError(f"cannot parse variable name {text!r}")
        symbol, first, second = match.groups()
        a = SubsetLabel.parse(first)
        if second is not None:
            b = SubsetLabel.parse(second)
            return cls("slack" if symbol == "lam" else "split", symbol, (a, b))
        if symbol == "R":
            return cls.rate(a)
        return cls("aux", symbol, (a,))

    def sort_key(self) -> Tuple:
        return (
            _KIND_RANK[self.kind],
            _SYMBOL_RANK.get(self.symbol, 9),
            self.symbol,
            tuple(s.sort_key() for s in self.labels),
        )

    @property
    def label(self) -> SubsetLabel:
        return self.labels[-1]

    def __str__(self) -> str:
        if not self.labels:
            return self.symbol
        if len(self.labels) == 2:
            return f"{self.symbol}_{self.labels[0].tag}->{self.labels[1].tag}"
        return f"{self.symbol}_{self.labels[0].tag}"

    def __repr__(self) -> str:
        return f"VariableName({self})"


def sort_variables(variables: Iterable[VariableName]) -> Tuple[VariableName, ...]:
    return tuple(sorted(set(variables), key=VariableName.sort_key))


Coeffs = Tuple[Tuple[VariableName, Fraction], ...]


def _canonical_coeffs(coeffs: Mapping[VariableName, Number]) -> Coeffs:
    acc: Dict[VariableName, Fraction] = {}
    for var, c in coeffs.items():
        acc[var] = acc.get(var, Fraction(0)) + Fraction(c)
    return tuple(sorted(((v, c) for v, c in acc.items() if c != 0), key=lambda vc: vc[0].sort_key()))


def _as_expr(rhs: Union[EntropyExpr, Number]) -> EntropyExpr:
    return rhs if isinstance(rhs, EntropyExpr) else EntropyExpr.const(rhs)


@dataclass(frozen=True)
class Inequality:
    """One row ``sum coeffs[v] * v <= rhs``; ``note`` records where it came from."""

    coeffs: Coeffs
    rhs: EntropyExpr
    note: str = field(default="", compare=False)

    @classmethod
    def leq(cls, coeffs: Mapping[VariableName, Number], rhs: Union[EntropyExpr, Number] = 0, note: str = "") -> "Inequality":
        return cls(_canonical_coeffs(coeffs), _as_expr(rhs), note)

    @classmethod
    def geq(cls, coeffs: Mapping[VariableName, Number], rhs: Union[EntropyExpr, Number] = 0, note: str = "") -> "Inequality":
        return cls(_canonical_coeffs({v: -Fraction(c) for v, c in coeffs.items()}), -_as_expr(rhs), note)

    @classmethod
    def equality(cls, coeffs: Mapping[VariableName, Number], rhs: Union[EntropyExpr, Number] = 0, note: str = "") -> Tuple["Inequality", "Inequality"]:
        return cls.leq(coeffs, rhs, note), cls.geq(coeffs, rhs, note)

    @classmethod
    def nonnegative(cls, var: VariableName) -> "Inequality":
        return cls.geq({var: 1}, 0, f"{var} >= 0")

    @property
    def coeff_map(self) -> Dict[VariableName, Fraction]:
        return dict(self.coeffs)

    def coeff(self, var: VariableName) -> Fraction:
        for v, c in self.coeffs:
            if v == var:
                return c
        return Fraction(0)

    def variables(self) -> FrozenSet[VariableName]:
        return frozenset(v for v, _ in self.coeffs)

    def is_bound(self) -> bool:
        """A nonnegativity row ``-c*v <= 0``."""
        return len(self.coeffs) == 1 and self.coeffs[0][1] < 0 and self.rhs.is_zero()

    def is_vacuous(self) -> bool:
        """No variables and nothing decidable to report: ``0 <= c`` with c >= 0 or a symbolic c."""
        if self.coeffs:
            return False
        return not self.rhs.is_constant() or self.rhs.constant >= 0

    def is_infeasible(self) -> bool:
        return not self.coeffs and self.rhs.is_constant() and self.rhs.constant < 0

    def negated_pair_of(self, other: "Inequality") -> bool:
        """True when ``self`` and ``other`` together state an equality."""
        if len(self.coeffs) != len(other.coeffs):
            return False
        return (all(v1 == v2 and c1 == -c2 for (v1, c1), (v2, c2) in zip(self.coeffs, other.coeffs))
                and self.rhs == -other.rhs)

    def scale(self, factor: Fraction) -> "Inequality":
        if factor <= 0:
            raise DomainError("rows may only be scaled by positive factors")
        return Inequality(tuple((v, c * factor) for v, c in self.coeffs), self.rhs.scale(factor), self.note)

    def normalized(self) -> "Inequality":
        """Primitive integer form: the positive multiple with coprime integer coefficients."""
        values = [c for _, c in self.coeffs] + [c for _, c in self.rhs.items] + [self.rhs.constant]
        values = [v for v in values if v != 0]
        if not values:
            return self
        lcm = 1
        for v in values:
            lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
        g = 0
        for v in values:
            g = math.gcd(g, abs(v.numerator) * (lcm // v.denominator))
        factor = Fraction(lcm, g)
        return self if factor == 1 else self.scale(factor)

    def max_coefficient(self) -> Fraction:
        return max((abs(c) for _, c in self.coeffs), default=Fraction(0))

    def unit_scaled(self) -> "Inequality":
        """The positive multiple whose largest |coefficient| is 1; variable-free rows are unchanged."""
        top = self.max_coefficient()
        return self if top in (0, 1) else self.scale(1 / top)

    def snapped(self, tol: Number) -> "Inequality":
        """A numeric RHS within ``tol`` of 0, relative to the largest coefficient, set to exactly 0."""
        if not self.rhs.is_constant() or self.rhs.constant == 0:
            return self
        if abs(self.rhs.constant) <= Fraction(tol) * max(self.max_coefficient(), Fraction(1)):
            return Inequality(self.coeffs, EntropyExpr.zero(), self.note)
        return self

    def ray_form(self) -> Tuple[Dict[VariableName, Fraction], EntropyExpr]:
        """Scaled so the RHS leads with magnitude 1 (left alone when the RHS is 0)."""
        lead = abs(self.rhs.leading_coefficient())
        if lead == 0:
            return self.coeff_map, self.rhs
        return {v: c / lead for v, c in self.coeffs}, self.rhs.scale(1 / lead)

    def substitute(self, var: VariableName, coeffs: Mapping[VariableName, Number], constant: EntropyExpr = None) -> "Inequality":
        """Replace ``var`` by ``sum coeffs[u] * u + constant``."""
        c = self.coeff(var)
        if c == 0:
            return self
        acc = {v: k for v, k in self.coeffs if v != var}
        for u, k in coeffs.items():
            acc[u] = acc.get(u, Fraction(0)) + c * Fraction(k)
        rhs = self.rhs if constant is None else self.rhs - constant.scale(c)
        return Inequality(_canonical_coeffs(acc), rhs, self.note)

    def with_note(self, note: str) -> "Inequality":
        return replace(self, note=note)

    def lhs_value(self, point: Mapping[VariableName, Number]) -> float:
        total = 0.0
        for v, c in self.coeffs:
            if v not in point:
                raise EvaluationError(f"point has no coordinate for {v}")
            total += float(c) * float(point[v])
        return total

    def render(self) -> str:
        if not self.coeffs:
            lhs = "0"
        else:
            pieces = []
            for i, (v, c) in enumerate(self.coeffs):
                mag = abs(c)
                body = str(v) if mag == 1 else f"{mag}*{v}"
                if i == 0:
                    pieces.append(("-" if c < 0 else "") + body)
                else:
                    pieces.append(("- " if c < 0 else "+ ") + body)
            lhs = " ".join(pieces)
        return f"{lhs} <= {self.rhs.render()}"

    def to_json(self) -> dict:
        return {
            "coeffs": {str(v): fraction_to_json(c) for v, c in self.coeffs},
            "rhs": self.rhs.to_json(),
            "note": self.note,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Inequality":
        try:
            coeffs = {VariableName.parse(k): fraction_from_json(v) for k, v in data["coeffs"].items()}
            return cls.leq(coeffs, EntropyExpr.from_json(data.get("rhs", {})), data.get("note", ""))
        except (KeyError, TypeError, AttributeError) as e:
            raise InputError(f"invalid inequality row: {e}") from e

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class InequalitySystem:
    """Polyhedron over ``variables``; every row references declared variables only."""

    variables: Tuple[VariableName, ...]
    rows: Tuple[Inequality, ...] = ()

    def __post_init__(self):
        declared = set(self.variables)
        if len(declared) != len(self.variables):
            raise DomainError("duplicate variable names in system")
        for row in self.rows:
            extra = row.variables() - declared
            if extra:
                raise DimensionMismatchError(f"row '{row}' uses undeclared variables {sorted(map(str, extra))}")

    @classmethod
    def of(cls, variables: Iterable[VariableName], rows: Iterable[Inequality] = ()) -> "InequalitySystem":
        return cls(sort_variables(variables), tuple(rows))

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def with_rows(self, rows: Iterable[Inequality]) -> "InequalitySystem":
        return InequalitySystem(self.variables, tuple(rows))

    def extend(self, rows: Iterable[Inequality], variables: Iterable[VariableName] = ()) -> "InequalitySystem":
        return InequalitySystem(sort_variables(list(self.variables) + list(variables)), self.rows + tuple(rows))

    def intersect(self, other: "InequalitySystem") -> "InequalitySystem":
        return self.extend(other.rows, other.variables)

    def drop_variables(self, variables: Iterable[VariableName]) -> "InequalitySystem":
        gone = set(variables)
        return InequalitySystem(tuple(v for v in self.variables if v not in gone), self.rows)

    def symbols(self) -> FrozenSet[str]:
        out = set()
        for row in self.rows:
            out |= row.rhs.symbols()
        return frozenset(out)

    def is_numeric(self) -> bool:
        return all(row.rhs.is_constant() for row in self.rows)

    @property
    def infeasible_rows(self) -> Tuple[Inequality, ...]:
        return tuple(r for r in self.rows if r.is_infeasible())

    def is_empty(self) -> bool:
        """True when some row reads ``0 <= negative constant``."""
        return bool(self.infeasible_rows)

    def bound_rows(self) -> Tuple[Inequality, ...]:
        return tuple(r for r in self.rows if r.is_bound())

    def constraint_rows(self) -> Tuple[Inequality, ...]:
        """Rows other than plain nonnegativity."""
        return tuple(r for r in self.rows if not r.is_bound())

    def nonnegative_variables(self) -> FrozenSet[VariableName]:
        return frozenset(r.coeffs[0][0] for r in self.rows if r.is_bound())

    def bind(self, assignment, max_denominator: Optional[int] = None) -> "InequalitySystem":
        """Replace every RHS by its rational value under ``assignment``."""
        rows = []
        for row in self.rows:
            value = row.rhs.evaluate_exact(assignment, max_denominator)
            rows.append(Inequality(row.coeffs, EntropyExpr.const(value), row.note))
        return InequalitySystem(self.variables, tuple(rows))

    def render(self, numbered: bool = True, notes: bool = True) -> str:
        lines = []
        for i, row in enumerate(self.rows, 1):
            text = row.render()
            if notes and row.note:
                text = f"{text}    # {row.note}"
            lines.append(f"({i}) {text}" if numbered else text)
        return "\n".join(lines)

    def to_json(self) -> dict:
        data = {
            "variables": [str(v) for v in self.variables],
            "rows": [row.to_json() for row in self.rows],
        }
        if self.is_empty():
            data["empty"] = True
        return data

    @classmethod
    def from_json(cls, data: dict) -> "InequalitySystem":
        try:
            variables = [VariableName.parse(v) for v in data["variables"]]
            rows = [Inequality.from_json(r) for r in data.get("rows", [])]
        except (KeyError, TypeError) as e:
            raise InputError(f"invalid inequality system: {e}") from e
        return cls(tuple(variables), tuple(rows))


def nonnegativity(variables: Iterable[VariableName]) -> List[Inequality]:
    return [Inequality.nonnegative(v) for v in sort_variables(variables)]


def parse_variables(names: Union[str, Sequence[str]]) -> List[VariableName]:
    if isinstance(names, str):
        names = [n for n in re.split(r"[,\s]+", names) if n]
    return [VariableName.parse(n) for n in names]
