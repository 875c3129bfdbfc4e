"""Antenna-domain channel matrices and their power normalization."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from colored_scatter.channel.array import ArrayGeometry, ArraySide, steering_matrix
from colored_scatter.errors import DimensionMismatchError, NonFiniteChannelError, ZeroPowerError
from colored_scatter.scatter.field import ScatterConfig, ScatterField, build_synthesizer

logger = logging.getLogger(__name__)

# Reference array half-count for the power normalization.
ETA_REFERENCE_HALF_COUNT = 49


@dataclass(frozen=True)
class ChannelMatrix:
    """c_{m,n} = eta * sum_k sum_l conj(a_r(k,m)) h(k,l) a_t(l,n)."""

    entries: np.ndarray
    eta: float

    @property
    def antennas(self) -> int:
        return int(self.entries.shape[0])

    @property
    def half_count(self) -> int:
        return (self.antennas - 1) // 2

    @property
    def frobenius_sq(self) -> float:
        return float(np.vdot(self.entries, self.entries).real)

    def subarray(self, half_count: int) -> "ChannelMatrix":
        """The channel seen by the central 2L+1 antennas on both sides."""
        if half_count > self.half_count:
            raise DimensionMismatchError("subarray", f"<= {self.half_count}", half_count)
        lo = self.half_count - half_count
        hi = self.half_count + half_count + 1
        return ChannelMatrix(entries=self.entries[lo:hi, lo:hi], eta=self.eta)


def assemble_channel(
    field: ScatterField,
    geometry: ArrayGeometry,
    eta: float,
    rx_steering: Optional[np.ndarray] = None,
    tx_steering: Optional[np.ndarray] = None,
) -> ChannelMatrix:
    """Map a scattering field to the antenna domain as A_r^H H A_t.

    Args:
        field: Scattering response on its support nodes
        geometry: Array on both sides
        eta: Channel scale
        rx_steering: Receive steering matrix on the field's receive nodes,
            computed when omitted
        tx_steering: Transmit steering matrix on the field's transmit nodes

    Raises:
        DimensionMismatchError: If the field and array use different grids
        NonFiniteChannelError: If the result is not finite
    """
    if field.grid_k != geometry.grid_k:
        raise DimensionMismatchError("grid size K", geometry.grid_k, field.grid_k)
    if field.values.shape != (field.rx_indices.size, field.tx_indices.size):
        raise DimensionMismatchError(
            "field values", (field.rx_indices.size, field.tx_indices.size), field.values.shape
        )
    a_r = steering_matrix(geometry, ArraySide.RX, field) if rx_steering is None else rx_steering
    a_t = steering_matrix(geometry, ArraySide.TX, field) if tx_steering is None else tx_steering
    for name, steering, nodes in (("rx", a_r, field.rx_indices), ("tx", a_t, field.tx_indices)):
        if steering.shape != (nodes.size, geometry.antennas):
            raise DimensionMismatchError(
                f"{name} steering matrix", (nodes.size, geometry.antennas), steering.shape
            )
    entries = eta * ((a_r.conj().T @ field.values) @ a_t)
    if not np.isfinite(entries).all():
        raise NonFiniteChannelError(entries.shape)
    return ChannelMatrix(entries=entries, eta=float(eta))


def _quadratic_forms(covariance: np.ndarray, steering: np.ndarray) -> np.ndarray:
    """a(m)^H R a(m) for every column of the steering matrix."""
    return np.real(np.einsum("km,km->m", steering.conj(), covariance @ steering))


def expected_entry_power(
    config: ScatterConfig, geometry: ArrayGeometry, eta: float = 1.0
) -> np.ndarray:
    """E|c_{m,n}|^2 from the separable covariance, without sampling.

    For each independent field block, E|c_{m,n}|^2 picks up
    (a_r(m)^H R_r a_r(m)) (a_t(n)^H R_t a_t(n)); blocks add.
    """
    if config.grid_k != geometry.grid_k:
        raise DimensionMismatchError("grid size K", geometry.grid_k, config.grid_k)
    power = np.zeros((geometry.antennas, geometry.antennas))
    for block in build_synthesizer(config).blocks:
        a_r = steering_matrix(geometry, grid_indices=block.rx.indices)
        a_t = steering_matrix(geometry, grid_indices=block.tx.indices)
        q_r = _quadratic_forms(block.rx.covariance, a_r)
        q_t = _quadratic_forms(block.tx.covariance, a_t)
        power += np.outer(q_r, q_t)
    return eta**2 * power


def calibrate_eta(
    config: ScatterConfig, reference_half_count: int = ETA_REFERENCE_HALF_COUNT
) -> float:
    """Scale making the mean of E|c_{m,n}|^2 over the reference array equal 1.

    Calibrated once per scattering config and reused for every array size.

    Raises:
        ZeroPowerError: If the expected channel power vanishes
    """
    geometry = ArrayGeometry(reference_half_count, config.grid_k)
    mean_power = float(expected_entry_power(config, geometry).mean())
    if not mean_power > 0.0 or not np.isfinite(mean_power):
        raise ZeroPowerError(f"mean entry power {mean_power} at L'={reference_half_count}")
    eta = 1.0 / np.sqrt(mean_power)
    logger.debug(f"Calibrated eta={eta:.6e} at L'={reference_half_count} (K={config.grid_k})")
    return float(eta)
