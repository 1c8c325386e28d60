"""
Symbolic entropy expressions.

An :class:`EntropyExpr` is a rational linear combination of joint-entropy
symbols H(T) plus a rational constant. Symbols are plain strings such as
``"Q"``, ``"U_12"``, ``"X"`` and ``"Y_1"``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Any, Callable, Dict, FrozenSet, Iterable, Mapping, Optional, Protocol, Tuple, Union
import logging
import math
import re

from app.config.settings import get_settings
from app.core.utils.error_handler import EvaluationError, InputError
from app.core.utils.io_utils import fraction_from_json, fraction_to_json

logger = logging.getLogger(__name__)
settings = get_settings()

Term = FrozenSet[str]
Number = Union[int, float, Fraction]

_TERM_PATTERN = re.compile(r"^H\((.*)\)$")


def symbol_sort_key(name: str) -> Tuple:
    """Q first, then auxiliaries U_S by label, then X, then outputs Y_j."""
    if name == "Q":
        return (0,)
    if name.startswith("U_"):
        tag = name[2:]
        parts = tag.split(".") if "." in tag else list(tag)
        try:
            members = tuple(int(p) for p in parts)
            return (1, len(members), members)
        except ValueError:
            return (1, 99, (), tag)
    if name == "X":
        return (2,)
    if name.startswith("Y_") and name[2:].isdigit():
        return (3, int(name[2:]))
    return (4, name)


def term_key(term: Term) -> Tuple:
    ordered = sorted(term, key=symbol_sort_key)
    return (len(ordered), tuple(symbol_sort_key(s) for s in ordered))


def format_term(term: Term) -> str:
    return "H(" + ",".join(sorted(term, key=symbol_sort_key)) + ")"


def parse_term(text: str) -> Term:
    match = _TERM_PATTERN.match(text.strip())
    if not match:
        raise InputError(f"cannot parse entropy term {text!r}, expected H(A,B,...)")
    inner = match.group(1).strip()
    return frozenset(s.strip() for s in inner.split(",") if s.strip())


class EntropySource(Protocol):
    """Anything that can report the joint entropy of a symbol set in bits."""

    def entropy(self, symbols: Iterable[str]) -> Number: ...


def rationalize(value: Number, max_denominator: Optional[int] = None) -> Fraction:
    """Exact for ints and Fractions; floats are snapped with ``limit_denominator``."""
    if isinstance(value, Rational):
        return Fraction(value)
    value = float(value)
    if not math.isfinite(value):
        raise EvaluationError(f"non-finite value {value}")
    return Fraction(value).limit_denominator(max_denominator or settings.MAX_DENOMINATOR)


class MappingSource:
    """Entropy values given directly as ``{frozenset(symbols): value}``."""

    def __init__(self, values: Mapping[Any, Number]):
        self.values: Dict[Term, Number] = {}
        for key, value in values.items():
            term = parse_term(key) if isinstance(key, str) else frozenset(key)
            self.values[term] = value

    def entropy(self, symbols: Iterable[str]) -> Number:
        term = frozenset(symbols)
        if not term:
            return 0
        try:
            return self.values[term]
        except KeyError:
            raise EvaluationError(f"no value assigned to {format_term(term)}") from None

    def to_json(self) -> dict:
        return {"entropies": {format_term(t): v if isinstance(v, float) else fraction_to_json(v)
                              for t, v in sorted(self.values.items(), key=lambda kv: term_key(kv[0]))}}


def as_source(assignment: Union[EntropySource, Mapping, Callable]) -> EntropySource:
    if hasattr(assignment, "entropy"):
        return assignment
    if isinstance(assignment, Mapping):
        return MappingSource(assignment)
    if callable(assignment):
        class _CallableSource:
            def entropy(self, symbols):
                return assignment(frozenset(symbols))
        return _CallableSource()
    raise InputError(f"unsupported entropy assignment {type(assignment).__name__}")


@dataclass(frozen=True)
class EntropyExpr:
    """Canonical form: sorted terms, no zero coefficients, H(empty) folded away."""

    items: Tuple[Tuple[Term, Fraction], ...] = ()
    constant: Fraction = Fraction(0)

    @classmethod
    def build(cls, terms: Mapping[Iterable[str], Number] = None, constant: Number = 0) -> "EntropyExpr":
        acc: Dict[Term, Fraction] = {}
        for term, coeff in (terms or {}).items():
            term = frozenset(term)
            if not term:
                continue
            acc[term] = acc.get(term, Fraction(0)) + Fraction(coeff)
        items = tuple(sorted(((t, c) for t, c in acc.items() if c != 0), key=lambda tc: term_key(tc[0])))
        return cls(items, Fraction(constant))

    @classmethod
    def h(cls, *symbols: str) -> "EntropyExpr":
        """H(symbols); H() is the zero expression."""
        return cls.build({frozenset(symbols): 1})

    @classmethod
    def const(cls, value: Number) -> "EntropyExpr":
        return cls((), Fraction(value))

    @classmethod
    def zero(cls) -> "EntropyExpr":
        return cls()

    @property
    def terms(self) -> Dict[Term, Fraction]:
        return dict(self.items)

    def symbols(self) -> FrozenSet[str]:
        out = set()
        for term, _ in self.items:
            out |= term
        return frozenset(out)

    def is_constant(self) -> bool:
        return not self.items

    def is_zero(self) -> bool:
        return not self.items and self.constant == 0

    def __add__(self, other: Union["EntropyExpr", Number]) -> "EntropyExpr":
        if not isinstance(other, EntropyExpr):
            return EntropyExpr(self.items, self.constant + Fraction(other))
        acc = dict(self.items)
        for term, coeff in other.items:
            acc[term] = acc.get(term, Fraction(0)) + coeff
        return EntropyExpr.build(acc, self.constant + other.constant)

    __radd__ = __add__

    def __neg__(self) -> "EntropyExpr":
        return EntropyExpr(tuple((t, -c) for t, c in self.items), -self.constant)

    def __sub__(self, other: Union["EntropyExpr", Number]) -> "EntropyExpr":
        return self + (-other if isinstance(other, EntropyExpr) else -Fraction(other))

    def __rsub__(self, other: Number) -> "EntropyExpr":
        return (-self) + other

    def scale(self, factor: Number) -> "EntropyExpr":
        factor = Fraction(factor)
        if factor == 0:
            return EntropyExpr()
        return EntropyExpr(tuple((t, c * factor) for t, c in self.items), self.constant * factor)

    def __mul__(self, factor: Number) -> "EntropyExpr":
        return self.scale(factor)

    __rmul__ = __mul__

    def leading_coefficient(self) -> Fraction:
        """First term coefficient, or the constant when there are no terms."""
        return self.items[0][1] if self.items else self.constant

    def evaluate(self, assignment) -> float:
        """Float value under an entropy source or a term -> value mapping."""
        source = as_source(assignment)
        total = float(self.constant)
        for term, coeff in self.items:
            total += float(coeff) * float(source.entropy(term))
        return total

    def evaluate_exact(self, assignment, max_denominator: Optional[int] = None) -> Fraction:
        """
        Rational value of the whole expression.

        Exact entropy values are summed exactly. Otherwise the float sum is
        rationalized once and sums within ``ZERO_SNAP_TOLERANCE`` of 0 bind to
        exactly 0, so a vanishing conditional mutual information never becomes
        a tiny negative bound.
        """
        source = as_source(assignment)
        values = [(coeff, source.entropy(term)) for term, coeff in self.items]
        if all(isinstance(v, Rational) for _, v in values):
            return self.constant + sum((coeff * Fraction(v) for coeff, v in values), Fraction(0))
        parts = [float(self.constant)]
        for coeff, v in values:
            v = float(v)
            if not math.isfinite(v):
                raise EvaluationError(f"non-finite entropy value {v}")
            parts.append(float(coeff) * v)
        total = math.fsum(parts)
        if abs(total) <= settings.ZERO_SNAP_TOLERANCE:
            return Fraction(0)
        return rationalize(total, max_denominator)

    def to_json(self) -> dict:
        return {
            "terms": {format_term(t): fraction_to_json(c) for t, c in self.items},
            "const": fraction_to_json(self.constant),
        }

    @classmethod
    def from_json(cls, data: Any) -> "EntropyExpr":
        if not isinstance(data, dict):
            return cls.const(fraction_from_json(data))
        terms = {parse_term(k): fraction_from_json(v) for k, v in data.get("terms", {}).items()}
        return cls.build(terms, fraction_from_json(data.get("const", 0)))

    def render(self) -> str:
        parts = []
        for term, coeff in self.items:
            sign = "-" if coeff < 0 else "+"
            mag = abs(coeff)
            body = format_term(term) if mag == 1 else f"{mag}*{format_term(term)}"
            parts.append((sign, body))
        if self.constant != 0 or not parts:
            parts.append(("-" if self.constant < 0 else "+", str(abs(self.constant))))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.render()
