"""
Concrete broadcast channels: combination networks and tabular DM BCs.
"""

from app.core.channels.tabular import (
    DegradednessCertificate,
    TabularBC,
    binary_symmetric_cascade,
    bsc,
    degraded_bc_instance,
    degradedness_certificate,
    identity_bc,
)
from app.core.channels.combination import CombinationEntropyOracle, CombinationNetwork, combination_uniform_aux
from app.core.channels.binding import bind_channel, channel_from_json

__all__ = [
    "DegradednessCertificate",
    "TabularBC",
    "binary_symmetric_cascade",
    "bsc",
    "degraded_bc_instance",
    "degradedness_certificate",
    "identity_bc",
    "CombinationEntropyOracle",
    "CombinationNetwork",
    "combination_uniform_aux",
    "bind_channel",
    "channel_from_json",
]
