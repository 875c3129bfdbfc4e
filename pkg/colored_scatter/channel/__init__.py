"""Antenna-domain channel assembly."""

from .array import ArrayGeometry, ArraySide, steering_matrix
from .assembly import (
    ETA_REFERENCE_HALF_COUNT,
    ChannelMatrix,
    assemble_channel,
    calibrate_eta,
    expected_entry_power,
)

__all__ = [
    "ETA_REFERENCE_HALF_COUNT",
    "ArrayGeometry",
    "ArraySide",
    "ChannelMatrix",
    "assemble_channel",
    "calibrate_eta",
    "expected_entry_power",
    "steering_matrix",
]
