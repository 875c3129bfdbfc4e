"""Synthesis of the colored scattering response on an angular grid."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from colored_scatter.errors import EmptySupportError, InvalidConfigError, UnderResolvedError
from colored_scatter.kernel.support import AngularSupport
from colored_scatter.scatter.acf import CovarianceFactor, covariance_factor

logger = logging.getLogger(__name__)


class Bounce(str, Enum):
    """Scattering mechanism."""

    MULTI = "multi"  # full Omega_r x Omega_t support
    SINGLE = "single"  # union of per-cluster blocks Omega_r,i x Omega_t,i


@dataclass(frozen=True)
class ScatterConfig:
    """Supports, correlation widths and grid of a scattering response.

    The grid is alpha = k/K for k = -K..K on both sides.
    """

    tx_support: AngularSupport
    rx_support: AngularSupport
    gamma_t: float
    gamma_r: float
    grid_k: int
    bounce: Bounce = Bounce.MULTI

    def __post_init__(self) -> None:
        object.__setattr__(self, "bounce", Bounce(self.bounce))
        if self.grid_k < 1:
            raise InvalidConfigError("grid_k", self.grid_k, "must be a positive integer")
        if self.tx_support.is_empty or self.rx_support.is_empty:
            raise EmptySupportError()
        for name, gamma in (("gamma_t", self.gamma_t), ("gamma_r", self.gamma_r)):
            if not gamma > 0:
                raise InvalidConfigError(name, gamma, "must be positive")
            # the field bandwidth 1/gamma must not exceed the grid rate K
            if gamma * self.grid_k < 1.0 - 1e-12:
                raise UnderResolvedError(
                    f"{name}={gamma:g} is finer than the grid spacing 1/{self.grid_k}",
                    1.0 / self.grid_k,
                    gamma,
                )
        if (
            self.bounce is Bounce.SINGLE
            and self.tx_support.cluster_count() != self.rx_support.cluster_count()
        ):
            raise InvalidConfigError(
                "bounce",
                self.bounce.value,
                f"single bounce needs equal cluster counts, got "
                f"M_t={self.tx_support.cluster_count()} and M_r={self.rx_support.cluster_count()}",
            )

    @classmethod
    def symmetric(
        cls,
        support: AngularSupport,
        gamma: float,
        grid_k: int,
        bounce: Bounce = Bounce.MULTI,
    ) -> "ScatterConfig":
        """Same support and correlation width on both sides."""
        return cls(support, support, gamma, gamma, grid_k, bounce)


@dataclass(frozen=True)
class ScatterField:
    """One realization of the scattering response.

    Attributes:
        values: Complex matrix, rows are receive support nodes, columns
            transmit support nodes; zero outside the support set
        rx_indices: Grid index k of every row
        tx_indices: Grid index l of every column
        mask: True where (row, column) belongs to the support set
        grid_k: Grid size K
        bounce: Mechanism the field was drawn for
    """

    values: np.ndarray
    rx_indices: np.ndarray
    tx_indices: np.ndarray
    mask: np.ndarray
    grid_k: int
    bounce: Bounce = Bounce.MULTI

    @property
    def shape(self) -> tuple[int, int]:
        return (int(self.values.shape[0]), int(self.values.shape[1]))

    @property
    def rx_cosines(self) -> np.ndarray:
        """Directional cosines beta = k/K of the rows."""
        return self.rx_indices / self.grid_k

    @property
    def tx_cosines(self) -> np.ndarray:
        """Directional cosines alpha = l/K of the columns."""
        return self.tx_indices / self.grid_k


@dataclass(frozen=True)
class FieldBlock:
    """A rectangular part of the support drawn from one Gaussian matrix."""

    rows: np.ndarray
    cols: np.ndarray
    rx_support: AngularSupport
    tx_support: AngularSupport
    rx: CovarianceFactor
    tx: CovarianceFactor


@dataclass(frozen=True)
class FieldSynthesizer:
    """Precomputed covariance factors for repeated draws of one config."""

    config: ScatterConfig
    rx_indices: np.ndarray
    tx_indices: np.ndarray
    mask: np.ndarray
    blocks: tuple[FieldBlock, ...]

    def draw(self, rng: np.random.Generator) -> ScatterField:
        """Draw S_r G S_t^T for every block with unit-variance circular G."""
        values = np.zeros(self.mask.shape, dtype=np.complex128)
        for block in self.blocks:
            shape = (block.rx.size, block.tx.size)
            gaussian = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
            values[np.ix_(block.rows, block.cols)] = block.rx.factor @ gaussian @ block.tx.factor.T
        return ScatterField(
            values=values,
            rx_indices=self.rx_indices,
            tx_indices=self.tx_indices,
            mask=self.mask,
            grid_k=self.config.grid_k,
            bounce=self.config.bounce,
        )


def trial_rng(seed: int, trial: int = 0) -> np.random.Generator:
    """Philox stream for one trial, keyed by seed XOR trial index."""
    return np.random.Generator(np.random.Philox(int(seed) ^ int(trial)))


@lru_cache(maxsize=32)
def build_synthesizer(config: ScatterConfig) -> FieldSynthesizer:
    """Factor the covariances a config needs.

    Multi-bounce uses one covariance per axis over the whole support, so
    clusters stay correlated with each other. Single-bounce factors each
    cluster on its own.
    """
    rx_all = covariance_factor(config.rx_support, config.gamma_r, config.grid_k)
    tx_all = covariance_factor(config.tx_support, config.gamma_t, config.grid_k)

    if config.bounce is Bounce.MULTI:
        mask = np.ones((rx_all.size, tx_all.size), dtype=bool)
        blocks = (
            FieldBlock(
                np.arange(rx_all.size),
                np.arange(tx_all.size),
                config.rx_support,
                config.tx_support,
                rx_all,
                tx_all,
            ),
        )
    else:
        mask = np.zeros((rx_all.size, tx_all.size), dtype=bool)
        block_list = []
        for i in range(config.rx_support.cluster_count()):
            rows = np.flatnonzero(rx_all.labels == i)
            cols = np.flatnonzero(tx_all.labels == i)
            rx_cluster = config.rx_support.cluster(i)
            tx_cluster = config.tx_support.cluster(i)
            rx_i = covariance_factor(rx_cluster, config.gamma_r, config.grid_k)
            tx_i = covariance_factor(tx_cluster, config.gamma_t, config.grid_k)
            mask[np.ix_(rows, cols)] = True
            block_list.append(FieldBlock(rows, cols, rx_cluster, tx_cluster, rx_i, tx_i))
        blocks = tuple(block_list)

    mask.flags.writeable = False
    logger.debug(
        f"Synthesizer {config.bounce.value}-bounce: {rx_all.size}x{tx_all.size} nodes, "
        f"{len(blocks)} block(s)"
    )
    return FieldSynthesizer(
        config=config,
        rx_indices=rx_all.indices,
        tx_indices=tx_all.indices,
        mask=mask,
        blocks=blocks,
    )


def sample_field(config: ScatterConfig, rng_seed: int, trial: int = 0) -> ScatterField:
    """Draw one scattering response.

    Args:
        config: Supports, widths, grid and mechanism
        rng_seed: Base seed of the run
        trial: Trial index, combined with the seed by XOR

    Returns:
        ScatterField; identical inputs give bit-identical values
    """
    return build_synthesizer(config).draw(trial_rng(rng_seed, trial))
