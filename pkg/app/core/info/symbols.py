"""Names of the random variables in X' = (X, U_F, Q) and the channel outputs."""

from typing import Iterable, List, Optional

from app.core.order.labels import SubsetLabel

Q = "Q"
X = "X"


def u_name(label: SubsetLabel) -> str:
    return f"U_{label.tag}"


def y_name(j: int) -> str:
    return f"Y_{j}"


def u_names(labels: Iterable[SubsetLabel]) -> List[str]:
    return [u_name(s) for s in labels]


def label_of(symbol: str) -> Optional[SubsetLabel]:
    """The label behind ``U_S``, or None for other symbols."""
    if not symbol.startswith("U_"):
        return None
    return SubsetLabel.parse(symbol[2:])
