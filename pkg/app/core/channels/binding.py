"""Attaching a channel to an admissible tuple, and channel JSON dispatch."""

from typing import Union
import logging

from app.core.channels.combination import CombinationNetwork
from app.core.channels.tabular import TabularBC
from app.core.info.admissible import AdmissibleSpec
from app.core.utils.error_handler import DimensionMismatchError, InputError

logger = logging.getLogger(__name__)

Channel = Union[TabularBC, CombinationNetwork]


def bind_channel(spec: AdmissibleSpec, chan: Channel) -> AdmissibleSpec:
    """
    Return ``spec`` with the channel table attached, ready for assemble_joint.

    Raises:
        DimensionMismatchError: the input alphabet or the receiver count differs
    """
    table = chan.to_tabular() if isinstance(chan, CombinationNetwork) else chan
    if table.input_alphabet != spec.x_alphabet:
        raise DimensionMismatchError(
            f"channel input alphabet {table.input_alphabet} does not match |X| = {spec.x_alphabet}"
        )
    if table.K != spec.K:
        raise DimensionMismatchError(f"channel has {table.K} receivers, the message family lives on {spec.K}")
    logger.debug(f"bound a {table.K}-receiver channel with outputs {table.output_alphabets}")
    return spec.with_channel(table.output_alphabets, table.W)


def channel_from_json(data: dict) -> Channel:
    """``{"combination": {...}}`` or ``{"table": {...}}``."""
    if not isinstance(data, dict):
        raise InputError(f"invalid channel description: {data!r}")
    if "combination" in data:
        return CombinationNetwork.from_json(data)
    if "table" in data:
        return TabularBC.from_json(data)
    raise InputError("channel JSON needs a 'combination' or a 'table' entry")
