"""
Ground-set combinatorics: receiver subsets, superposition orders and their lattices.
"""

from app.core.order.labels import (
    SubsetLabel,
    MessageIndexFamily,
    receiver_window,
    all_nonempty_subsets,
    sorted_labels,
)
from app.core.order.superposition import (
    SuperpositionOrder,
    make_order,
    order_from_json,
    up_closure,
    down_closure,
    max_up_subset,
)
from app.core.order.lattice import (
    LatticeFamily,
    enumerate_down_sets,
    enumerate_up_sets,
    format_labelset,
    labelset_key,
)

__all__ = [
    "SubsetLabel",
    "MessageIndexFamily",
    "receiver_window",
    "all_nonempty_subsets",
    "sorted_labels",
    "SuperpositionOrder",
    "make_order",
    "order_from_json",
    "up_closure",
    "down_closure",
    "max_up_subset",
    "LatticeFamily",
    "enumerate_down_sets",
    "enumerate_up_sets",
    "format_labelset",
    "labelset_key",
]
