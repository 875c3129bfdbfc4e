"""Half-wavelength linear arrays and their angular steering matrices."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from colored_scatter.errors import InvalidConfigError
from colored_scatter.scatter.field import ScatterField


class ArraySide(str, Enum):
    """Which end of the link an array sits on."""

    TX = "tx"
    RX = "rx"


@dataclass(frozen=True)
class ArrayGeometry:
    """2L+1 antennas indexed -L..L at half-wavelength spacing.

    The array spans L wavelengths, which is the L of min{L, 1/Gamma}.
    """

    half_count: int
    grid_k: int

    def __post_init__(self) -> None:
        if self.half_count < 0:
            raise InvalidConfigError("half_count", self.half_count, "must be nonnegative")
        if self.grid_k < 1:
            raise InvalidConfigError("grid_k", self.grid_k, "must be a positive integer")
        if self.half_count > self.grid_k:
            raise InvalidConfigError(
                "half_count",
                self.half_count,
                f"{self.antennas} antennas exceed the {2 * self.grid_k + 1} grid points",
            )

    @classmethod
    def from_antennas(cls, antennas: int, grid_k: int) -> "ArrayGeometry":
        """Geometry for an odd antenna count 2L+1."""
        if antennas < 1 or antennas % 2 == 0:
            raise InvalidConfigError("antennas", antennas, "must be a positive odd count")
        return cls((antennas - 1) // 2, grid_k)

    @property
    def antennas(self) -> int:
        return 2 * self.half_count + 1

    @property
    def antenna_indices(self) -> np.ndarray:
        return np.arange(-self.half_count, self.half_count + 1)


def steering_matrix(
    geometry: ArrayGeometry,
    side: ArraySide = ArraySide.RX,
    field: Optional[ScatterField] = None,
    grid_indices: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Phase responses exp(-j 2 pi (k/K)(m/2)), grid nodes by antennas.

    Rows are the support nodes of ``field`` on the given side, or the given
    ``grid_indices``, or the whole grid -K..K when neither is passed.
    """
    if field is not None:
        grid_indices = field.rx_indices if ArraySide(side) is ArraySide.RX else field.tx_indices
    elif grid_indices is None:
        grid_indices = np.arange(-geometry.grid_k, geometry.grid_k + 1)

    k = np.asarray(grid_indices, dtype=np.int64)
    m = geometry.antenna_indices.astype(np.int64)
    # the phase pi*k*m/K is reduced modulo 2*pi in integers, so full turns are exact
    turns = np.mod(np.outer(k, m), 2 * geometry.grid_k)
    return np.exp(-1j * np.pi * turns / geometry.grid_k)
