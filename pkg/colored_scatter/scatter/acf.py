"""Sinc autocorrelation of colored scattering and its matrix square root."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np
import scipy.linalg

from colored_scatter.errors import EmptySupportError, IllConditionedCovarianceError
from colored_scatter.kernel.support import AngularSupport

logger = logging.getLogger(__name__)

RELATIVE_CLIP = 1e-10
MAX_CLIPPED_SHARE = 1e-3
WARN_CLIPPED_SHARE = 1e-6

ArrayLike = Union[float, np.ndarray]


def acf_value(gamma: float, delta: ArrayLike) -> ArrayLike:
    """(1/gamma) sinc(delta/gamma), with sinc(x) = sin(pi x)/(pi x)."""
    return np.sinc(np.asarray(delta) / gamma) / gamma


@dataclass(frozen=True)
class CovarianceFactor:
    """Per-axis covariance R on the support nodes and its square root.

    Attributes:
        indices: Grid indices k of the support nodes, ascending
        labels: Cluster index of every node
        covariance: R_ij = (1/K) (1/gamma) sinc((k_i - k_j) / (K gamma))
        factor: Symmetric S with S S^T = R after clipping
        eigenvalues: Descending eigenvalues of R, clipped at zero
        eigenvectors: Matching orthonormal eigenvectors
        clipped_mass: Sum of |eigenvalue| over clipped eigenvalues
    """

    indices: np.ndarray
    labels: np.ndarray
    covariance: np.ndarray
    factor: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    clipped_mass: float

    @property
    def size(self) -> int:
        return int(self.indices.shape[0])

    def rank(self, threshold: float = 1e-6) -> int:
        """Number of eigenvalues above threshold * largest eigenvalue."""
        if self.size == 0:
            return 0
        return int(np.count_nonzero(self.eigenvalues > threshold * self.eigenvalues[0]))

    def reconstruction_error(self) -> float:
        """Relative Frobenius error of S S^T against R."""
        diff = self.factor @ self.factor.T - self.covariance
        return float(np.linalg.norm(diff) / np.linalg.norm(self.covariance))


def correlation_matrix(indices: np.ndarray, gamma: float, grid_k: int) -> np.ndarray:
    """Grid-cell scaled sinc correlation between grid nodes."""
    lag = (indices[:, None] - indices[None, :]).astype(float)
    return acf_value(gamma, lag / grid_k) / grid_k


@lru_cache(maxsize=64)
def covariance_factor(support: AngularSupport, gamma: float, grid_k: int) -> CovarianceFactor:
    """Positive-semidefinite square root of the sampled correlation.

    Eigenvalues below 1e-10 of the largest (negative ones included) are
    set to zero before taking square roots.

    Raises:
        EmptySupportError: If no grid node falls inside the support
        IllConditionedCovarianceError: If the clipped mass exceeds 1e-3 of the trace
    """
    indices, labels = support.grid_indices(grid_k)
    if indices.size == 0:
        raise EmptySupportError()

    covariance = correlation_matrix(indices, gamma, grid_k)
    values, vectors = scipy.linalg.eigh(covariance)
    values, vectors = values[::-1], vectors[:, ::-1]

    keep = values > RELATIVE_CLIP * values[0]
    clipped_mass = float(np.abs(values[~keep]).sum())
    trace = float(np.trace(covariance))
    if clipped_mass > MAX_CLIPPED_SHARE * trace:
        raise IllConditionedCovarianceError(clipped_mass, trace, gamma, grid_k)
    if clipped_mass > WARN_CLIPPED_SHARE * trace:
        logger.warning(
            f"Clipped {clipped_mass:.3e} of covariance trace {trace:.3e} "
            f"(gamma={gamma:g}, K={grid_k})"
        )

    kept = np.where(keep, values, 0.0)
    factor = (vectors * np.sqrt(kept)[None, :]) @ vectors.T
    factor = 0.5 * (factor + factor.T)
    logger.debug(
        f"Covariance {indices.size} nodes, gamma={gamma:g}, K={grid_k}: "
        f"rank {int(keep.sum())}, clipped mass {clipped_mass:.2e}"
    )

    for array in (indices, labels, covariance, factor, kept, vectors):
        array.flags.writeable = False
    return CovarianceFactor(
        indices=indices,
        labels=labels,
        covariance=covariance,
        factor=factor,
        eigenvalues=kept,
        eigenvectors=vectors,
        clipped_mass=clipped_mass,
    )
