"""Monte Carlo estimates of the ergodic equal-power and waterfilling capacities."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from joblib import Parallel, delayed

from colored_scatter.capacity.bounds import dof_limit
from colored_scatter.capacity.mutual_info import SnrPoint, channel_rates
from colored_scatter.channel.array import ArrayGeometry, ArraySide, steering_matrix
from colored_scatter.channel.assembly import (
    ETA_REFERENCE_HALF_COUNT,
    assemble_channel,
    calibrate_eta,
)
from colored_scatter.errors import DimensionMismatchError, InvalidConfigError
from colored_scatter.scatter.field import (
    FieldSynthesizer,
    ScatterConfig,
    build_synthesizer,
    trial_rng,
)

logger = logging.getLogger(__name__)

CONFIDENCE_Z = 1.96
DOMINANCE_TOLERANCE = 1e-12
CHUNKS_PER_WORKER = 4


@dataclass(frozen=True)
class CapacitySweepResult:
    """Averages over trials at one (Gamma, 2L+1, SNR) point, all in bits."""

    gamma: float
    antennas: int
    snr_db: float
    mean_mi_equal_power: float
    mean_capacity_wf: float
    c0: float
    ci_mi: float
    ci_cap: float
    dof_limit: float
    trials: int
    dominance_violations: int = 0

    @property
    def half_count(self) -> int:
        return (self.antennas - 1) // 2

    @property
    def mi_norm(self) -> float:
        return self.mean_mi_equal_power / self.c0

    @property
    def cap_norm(self) -> float:
        return self.mean_capacity_wf / self.c0


@dataclass(frozen=True)
class ChannelSampler:
    """Everything a worker needs to turn a trial index into capacities.

    Built once in the parent so workers never refactor covariances.
    """

    synthesizer: FieldSynthesizer
    geometry: ArrayGeometry
    rx_steering: np.ndarray
    tx_steering: np.ndarray
    eta: float
    half_counts: tuple[int, ...]
    snrs: tuple[SnrPoint, ...]

    @property
    def largest(self) -> int:
        return self.half_counts[-1]

    def trial(self, seed: int, trial: int) -> np.ndarray:
        """Equal-power and waterfilling bits, shape (arrays, snrs, 2).

        One channel per trial; smaller arrays are its central sub-blocks.
        """
        field = self.synthesizer.draw(trial_rng(seed, trial))
        channel = assemble_channel(
            field, self.geometry, self.eta, self.rx_steering, self.tx_steering
        )
        return np.stack(
            [channel_rates(channel.subarray(half), self.snrs) for half in self.half_counts]
        )


def build_sampler(
    config: ScatterConfig,
    half_counts: Sequence[int],
    snrs: Sequence[SnrPoint],
    eta: float,
) -> ChannelSampler:
    """Steering matrices of the largest array restricted to the support nodes."""
    ordered = tuple(sorted(set(int(h) for h in half_counts)))
    synthesizer = build_synthesizer(config)
    largest = ArrayGeometry(ordered[-1], config.grid_k)
    return ChannelSampler(
        synthesizer=synthesizer,
        geometry=largest,
        rx_steering=steering_matrix(largest, ArraySide.RX, grid_indices=synthesizer.rx_indices),
        tx_steering=steering_matrix(largest, ArraySide.TX, grid_indices=synthesizer.tx_indices),
        eta=float(eta),
        half_counts=ordered,
        snrs=tuple(snrs),
    )


def _run_chunk(sampler: ChannelSampler, seed: int, trials: np.ndarray) -> np.ndarray:
    return np.stack([sampler.trial(seed, int(t)) for t in trials])


def sample_trials(
    sampler: ChannelSampler, trials: int, seed: int, workers: int = 1
) -> np.ndarray:
    """Per-trial bits of shape (trials, arrays, snrs, 2), in trial order.

    Workers receive contiguous chunks of trial indices; the chunks are
    concatenated back in index order, so the result does not depend on
    the worker count.
    """
    indices = np.arange(trials)
    if workers <= 1:
        return _run_chunk(sampler, seed, indices)
    chunks = np.array_split(indices, min(trials, workers * CHUNKS_PER_WORKER))
    parts = Parallel(n_jobs=workers)(
        delayed(_run_chunk)(sampler, seed, chunk) for chunk in chunks if chunk.size
    )
    return np.concatenate(parts, axis=0)


def ergodic_sweep(
    config: ScatterConfig,
    geometries: Sequence[Union[ArrayGeometry, int]],
    snrs: Sequence[SnrPoint],
    trials: int,
    seed: int,
    workers: int = 1,
    eta: Optional[float] = None,
) -> list[CapacitySweepResult]:
    """Average equal-power and waterfilling capacities over sampled channels.

    Args:
        config: Scattering config; its receive-side Gamma labels the results
        geometries: Arrays (or half-counts L) to evaluate
        snrs: Operating points
        trials: Number of channel draws, at least 2
        seed: Base seed; trial t draws from Philox(seed ^ t)
        workers: joblib processes
        eta: Channel scale, calibrated from the config when omitted

    Returns:
        One result per (array, SNR), arrays ascending then SNRs in input order
    """
    if trials < 2:
        raise InvalidConfigError("trials", trials, "a confidence interval needs at least 2")
    if not geometries:
        raise InvalidConfigError("antennas", [], "need at least one array")
    if not snrs:
        raise InvalidConfigError("snr_db", [], "need at least one SNR")

    half_counts = []
    for geometry in geometries:
        if isinstance(geometry, ArrayGeometry):
            if geometry.grid_k != config.grid_k:
                raise DimensionMismatchError("grid size K", config.grid_k, geometry.grid_k)
            half_counts.append(geometry.half_count)
        else:
            half_counts.append(ArrayGeometry(int(geometry), config.grid_k).half_count)

    if eta is None:
        eta = calibrate_eta(config, min(ETA_REFERENCE_HALF_COUNT, config.grid_k))

    sampler = build_sampler(config, half_counts, snrs, eta)
    logger.debug(
        f"Sweep Gamma={config.gamma_r:g}: {trials} trials, "
        f"{len(sampler.half_counts)} arrays up to {2 * sampler.largest + 1} antennas, "
        f"{len(sampler.snrs)} SNRs, {workers} worker(s)"
    )
    values = sample_trials(sampler, trials, seed, workers)

    mi, cap = values[..., 0], values[..., 1]
    slack = DOMINANCE_TOLERANCE * np.maximum(1.0, mi)
    violations = (cap < mi - slack).sum(axis=0)
    if violations.any():
        logger.warning(
            f"Waterfilling fell below equal power in {int(violations.sum())} "
            f"realization(s) at Gamma={config.gamma_r:g}"
        )

    mean = values.mean(axis=0)
    spread = values.std(axis=0, ddof=1) * CONFIDENCE_Z / math.sqrt(trials)
    results = []
    for i, half in enumerate(sampler.half_counts):
        for j, snr in enumerate(sampler.snrs):
            results.append(
                CapacitySweepResult(
                    gamma=config.gamma_r,
                    antennas=2 * half + 1,
                    snr_db=snr.snr_db,
                    mean_mi_equal_power=float(mean[i, j, 0]),
                    mean_capacity_wf=float(mean[i, j, 1]),
                    c0=snr.c0_bits,
                    ci_mi=float(spread[i, j, 0]),
                    ci_cap=float(spread[i, j, 1]),
                    dof_limit=dof_limit(config.rx_support, config.gamma_r, half),
                    trials=trials,
                    dominance_violations=int(violations[i, j]),
                )
            )
    return results
