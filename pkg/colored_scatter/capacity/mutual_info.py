"""Equal-power mutual information of a channel realization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.linalg import svdvals

from colored_scatter.capacity.waterfill import LN2, waterfill
from colored_scatter.channel.assembly import ChannelMatrix
from colored_scatter.errors import DomainError, NonFiniteChannelError


@dataclass(frozen=True)
class SnrPoint:
    """Transmit power P and noise variance sigma^2 of one operating point."""

    power: float
    noise_var: float = 1.0

    def __post_init__(self) -> None:
        for name, value in (("power", self.power), ("noise_var", self.noise_var)):
            if not value > 0 or not np.isfinite(value):
                raise DomainError(name, value, "must be positive and finite")

    @classmethod
    def from_db(cls, snr_db: float, noise_var: float = 1.0) -> "SnrPoint":
        return cls(power=noise_var * 10.0 ** (snr_db / 10.0), noise_var=noise_var)

    @property
    def ratio(self) -> float:
        """P / sigma^2."""
        return self.power / self.noise_var

    @property
    def snr_db(self) -> float:
        return 10.0 * float(np.log10(self.ratio))

    @property
    def c0_bits(self) -> float:
        """Normalizer C0 = log2(1 + P/sigma^2)."""
        return float(np.log1p(self.ratio) / LN2)


def squared_singular_values(channel: Union[ChannelMatrix, np.ndarray]) -> np.ndarray:
    """s_i^2 of the channel matrix, descending.

    Raises:
        NonFiniteChannelError: If any entry is NaN or infinite
    """
    entries = channel.entries if isinstance(channel, ChannelMatrix) else np.asarray(channel)
    if not np.isfinite(entries).all():
        raise NonFiniteChannelError(entries.shape)
    if entries.size == 0:
        return np.zeros(0)
    return svdvals(entries, check_finite=False) ** 2


def equal_power_bits(squared_gains: np.ndarray, snr: SnrPoint, tx_antennas: int) -> float:
    """sum log2(1 + (P / (sigma^2 n_t)) s_i^2)."""
    scale = snr.ratio / tx_antennas
    return float(np.log1p(scale * squared_gains).sum() / LN2)


def mi_equal_power(channel: Union[ChannelMatrix, np.ndarray], snr: SnrPoint) -> float:
    """log2 det(I + P/(sigma^2 (2L+1)) C C^H) through the singular values.

    Args:
        channel: Channel matrix, receive antennas by transmit antennas
        snr: Operating point

    Returns:
        Mutual information in bits; 0 for the zero channel
    """
    entries = channel.entries if isinstance(channel, ChannelMatrix) else np.asarray(channel)
    gains = squared_singular_values(entries)
    return equal_power_bits(gains, snr, int(entries.shape[1]))


def channel_rates(
    channel: Union[ChannelMatrix, np.ndarray], snrs: Sequence[SnrPoint]
) -> np.ndarray:
    """Equal-power and waterfilling bits at each operating point from one SVD.

    Returns:
        Array of shape (len(snrs), 2): column 0 is mi_equal_power, column 1
        the waterfilling capacity
    """
    entries = channel.entries if isinstance(channel, ChannelMatrix) else np.asarray(channel)
    squared = squared_singular_values(entries)
    rates = np.empty((len(snrs), 2))
    for j, snr in enumerate(snrs):
        rates[j, 0] = equal_power_bits(squared, snr, int(entries.shape[1]))
        rates[j, 1] = waterfill(squared / snr.noise_var, snr.power).capacity_bits
    return rates
