"""Nystrom discretization of the sinc concentration operator.

The operator (Tf)(t) = integral over A of W sinc(W(t - s)) f(s) ds is
discretized with the midpoint rule on a lattice of spacing
h = 1/grid_points_per_unit anchored at 0. Every lattice cell meeting an
interval contributes one node at the center of that overlap, weighted by
the overlap length, so nodes stay inside the support and the trace of the
discrete operator is |A|*W exactly. When the interval endpoints fall on the
lattice all nodes are lattice centers with weight h and the matrix is a
compression of a Toeplitz contraction.

The midpoint error in the eigenvalues is O(h^2) with an even expansion in
h, so the grid refinement check compares Richardson-extrapolated spectra.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from colored_scatter.errors import (
    EigenSolverError,
    EmptySupportError,
    SpectrumRangeError,
    UnderResolvedError,
)
from colored_scatter.kernel.support import AngularSupport

logger = logging.getLogger(__name__)

MIN_POINTS_PER_WIDTH = 8
DEFAULT_POINTS_PER_WIDTH = 16
MIN_POINTS_PER_INTERVAL = 32
EIGENVALUE_TOLERANCE = 1e-8
DEFAULT_SPECTRAL_MASS = 0.9999

_SNAP_TOLERANCE = 1e-9


@dataclass(frozen=True)
class KernelSpec:
    """A sinc kernel W sinc(W(t - s)) restricted to a support.

    W is L for array kernels and 1/Gamma for correlation kernels.
    """

    support: AngularSupport
    bandwidth: float
    grid_points_per_unit: int

    @classmethod
    def default(
        cls,
        support: AngularSupport,
        bandwidth: float,
        reference_bandwidth: Optional[float] = None,
        points_per_width: int = DEFAULT_POINTS_PER_WIDTH,
    ) -> "KernelSpec":
        """Spec at the default resolution.

        Args:
            support: Support of the operator
            bandwidth: Kernel bandwidth W
            reference_bandwidth: Resolve this bandwidth instead when larger,
                so two spectra share one grid
            points_per_width: Grid points per 1/W

        Returns:
            KernelSpec with max(points_per_width*W, 32 per interval) points per unit
        """
        resolved = max(bandwidth, reference_bandwidth or bandwidth)
        points = math.ceil(points_per_width * resolved - 1e-9)
        if not support.is_empty:
            shortest = min(support.cluster_measures())
            points = max(points, math.ceil(MIN_POINTS_PER_INTERVAL / shortest - 1e-9))
        return cls(support=support, bandwidth=float(bandwidth), grid_points_per_unit=int(points))

    @property
    def dof(self) -> float:
        """The time-bandwidth product |A|*W."""
        return self.support.measure() * self.bandwidth

    def with_resolution(self, grid_points_per_unit: int) -> "KernelSpec":
        return KernelSpec(self.support, self.bandwidth, grid_points_per_unit)

    def check(self) -> None:
        """Raise if the spec cannot be discretized."""
        if self.support.is_empty or self.support.measure() <= 0:
            raise EmptySupportError()
        if self.bandwidth <= 0 or not np.isfinite(self.bandwidth):
            raise UnderResolvedError(
                f"bandwidth must be positive and finite, got {self.bandwidth}", 0.0, self.bandwidth
            )
        required = MIN_POINTS_PER_WIDTH * self.bandwidth
        if self.grid_points_per_unit < required - 1e-9:
            raise UnderResolvedError(
                f"{self.grid_points_per_unit} points per unit is below "
                f"{MIN_POINTS_PER_WIDTH} per 1/W at W={self.bandwidth:g}",
                required,
                float(self.grid_points_per_unit),
            )


@dataclass(frozen=True)
class KernelMatrix:
    """Symmetric Nystrom matrix with its quadrature."""

    matrix: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class EigenSpectrum:
    """Eigenpairs of a discretized concentration operator.

    Attributes:
        eigenvalues: Descending eigenvalues clipped to [0, 1]
        eigenvectors: Eigenfunction samples at the nodes, one per column,
            orthonormal under the quadrature inner product
        weights: Quadrature weights of the nodes
        nodes: Quadrature nodes
        spec: The discretized kernel
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    weights: np.ndarray
    nodes: np.ndarray
    spec: KernelSpec
    clipped: float = field(default=0.0)

    @property
    def size(self) -> int:
        return int(self.eigenvalues.shape[0])

    @property
    def total_mass(self) -> float:
        return float(self.eigenvalues.sum())

    def count_above(self, x: float) -> int:
        """Number of eigenvalues strictly greater than x."""
        return int(np.count_nonzero(self.eigenvalues > x))

    def truncation(self, mass: float = DEFAULT_SPECTRAL_MASS) -> int:
        """Smallest N whose leading eigenvalues hold the given share of the trace."""
        cumulative = np.cumsum(self.eigenvalues)
        target = mass * cumulative[-1]
        return int(min(np.searchsorted(cumulative, target, side="left") + 1, self.size))

    def orthonormal_vectors(self) -> np.ndarray:
        """Euclidean-orthonormal eigenvectors of the symmetric matrix."""
        return self.eigenvectors * np.sqrt(self.weights)[:, None]

    def orthonormality_defect(self) -> float:
        """Max deviation of the quadrature Gram matrix from the identity."""
        v = self.orthonormal_vectors()
        return float(np.abs(v.T @ v - np.eye(self.size)).max())


def _snap(x: float) -> float:
    nearest = round(x)
    return float(nearest) if abs(x - nearest) < _SNAP_TOLERANCE else x


def quadrature_grid(spec: KernelSpec) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint nodes and weights of the lattice cells clipped to each interval.

    Returns:
        Tuple of (nodes, weights), nodes strictly increasing and inside the support
    """
    h = 1.0 / spec.grid_points_per_unit
    nodes: list[np.ndarray] = []
    weights: list[np.ndarray] = []
    for a, b in spec.support.intervals:
        first = math.floor(_snap(a * spec.grid_points_per_unit))
        stop = math.ceil(_snap(b * spec.grid_points_per_unit))
        k = np.arange(first, stop)
        left = np.maximum(a, k * h)
        right = np.minimum(b, (k + 1) * h)
        # full cells keep the exact lattice center
        centers = np.where(
            (left == k * h) & (right == (k + 1) * h), (k + 0.5) * h, 0.5 * (left + right)
        )
        keep = right - left > 1e-12 * h
        nodes.append(centers[keep])
        weights.append((right - left)[keep])
    return np.concatenate(nodes), np.concatenate(weights)


def kernel_matrix(nodes: np.ndarray, weights: np.ndarray, bandwidth: float) -> np.ndarray:
    """K_ij = sqrt(w_i w_j) W sinc(W(t_i - t_j)) for arbitrary nodes."""
    root = np.sqrt(weights)
    # peak memory is two n x n arrays
    phase = np.subtract.outer(nodes, nodes)
    phase *= np.pi * bandwidth
    zero = phase == 0.0
    phase[zero] = 1.0
    matrix = np.sin(phase)
    matrix /= phase
    del phase
    matrix[zero] = 1.0
    matrix *= bandwidth * root[:, None]
    matrix *= root[None, :]
    matrix += matrix.T
    matrix *= 0.5
    return matrix


def build_kernel_matrix(spec: KernelSpec) -> KernelMatrix:
    """Nystrom matrix of a spec on its midpoint quadrature.

    Raises:
        EmptySupportError: If the support has zero measure
        UnderResolvedError: If the grid has fewer than 8 points per 1/W
    """
    spec.check()
    nodes, weights = quadrature_grid(spec)
    matrix = kernel_matrix(nodes, weights, spec.bandwidth)
    return KernelMatrix(matrix=matrix, nodes=nodes, weights=weights)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude entry of every column positive."""
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs[None, :]


def eigendecompose(spec: KernelSpec) -> EigenSpectrum:
    """Full symmetric eigendecomposition of the Nystrom matrix.

    Raises:
        EigenSolverError: If LAPACK does not converge
        SpectrumRangeError: If an eigenvalue leaves (-1e-8, 1 + 1e-8)
    """
    km = build_kernel_matrix(spec)
    n = km.matrix.shape[0]
    logger.debug(
        f"Eigendecomposing {n}x{n} sinc kernel (W={spec.bandwidth:g}, "
        f"|A|W={spec.dof:.3f}, {spec.grid_points_per_unit} pts/unit)"
    )
    try:
        values, vectors = scipy.linalg.eigh(km.matrix)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise EigenSolverError(
            str(e),
            {
                "size": n,
                "frobenius_norm": float(np.linalg.norm(km.matrix)),
                "symmetry_defect": float(np.abs(km.matrix - km.matrix.T).max()),
                "trace": float(np.trace(km.matrix)),
                "finite": bool(np.isfinite(km.matrix).all()),
            },
        ) from e

    low, high = float(values.min()), float(values.max())
    if low <= -EIGENVALUE_TOLERANCE or high >= 1.0 + EIGENVALUE_TOLERANCE:
        raise SpectrumRangeError(low, high, EIGENVALUE_TOLERANCE)

    values = values[::-1]
    vectors = _fix_signs(vectors[:, ::-1])
    clipped_values = np.clip(values, 0.0, 1.0)
    clipped = float(np.abs(values - clipped_values).sum())

    eigenvalues = np.ascontiguousarray(clipped_values)
    eigenvectors = np.ascontiguousarray(vectors / np.sqrt(km.weights)[:, None])
    for array in (eigenvalues, eigenvectors, km.weights, km.nodes):
        array.flags.writeable = False
    return EigenSpectrum(
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        weights=km.weights,
        nodes=km.nodes,
        spec=spec,
        clipped=clipped,
    )


def leading_eigenvalues(spec: KernelSpec, top: int) -> np.ndarray:
    """Descending top eigenvalues without eigenvectors.

    Raises:
        EigenSolverError: If LAPACK does not converge
    """
    km = build_kernel_matrix(spec)
    n = km.matrix.shape[0]
    top = min(top, n)
    try:
        values = scipy.linalg.eigh(
            km.matrix,
            eigvals_only=True,
            subset_by_index=[n - top, n - 1],
            overwrite_a=True,
            check_finite=False,
        )
    except (np.linalg.LinAlgError, ValueError) as e:
        raise EigenSolverError(str(e), {"size": n, "top": top}) from e
    return values[::-1]


def refinement_deviation(
    spec: KernelSpec, top: Optional[int] = None, extrapolate: bool = True
) -> float:
    """Largest change of the top eigenvalues when the grid is doubled.

    With extrapolation the spectrum at resolution r is the Richardson value
    (4 lambda(2r) - lambda(r)) / 3, which cancels the h^2 midpoint term, and
    it is compared with the same estimate at 2r. Without it the raw midpoint
    spectra at r and 2r are compared.

    Args:
        spec: Kernel at the base resolution
        top: Number of leading eigenvalues compared, default ceil(|A|W) + 5
        extrapolate: Compare Richardson-extrapolated spectra

    Returns:
        Max absolute difference over the compared eigenvalues
    """
    spec.check()
    if top is None:
        top = math.ceil(spec.dof) + 5
    base = spec.grid_points_per_unit
    levels = (1, 2, 4) if extrapolate else (1, 2)
    spectra = [leading_eigenvalues(spec.with_resolution(m * base), top) for m in levels]
    top = min(values.size for values in spectra)
    spectra = [values[:top] for values in spectra]
    if extrapolate:
        spectra = [
            (4.0 * fine - coarse) / 3.0 for coarse, fine in zip(spectra[:-1], spectra[1:])
        ]
    deviation = float(np.abs(spectra[0] - spectra[1]).max())
    logger.debug(
        f"Refinement of top {top} eigenvalues at W={spec.bandwidth:g}, {base} pts/unit: "
        f"{deviation:.2e}{' (extrapolated)' if extrapolate else ''}"
    )
    return deviation


def merged_interval_spectrum(spec: KernelSpec) -> np.ndarray:
    """Sorted union of the spectra of each interval on its own.

    Clusters far apart behave as independent problems, so this approximates
    the spectrum of the full support.
    """
    per_cluster = [
        eigendecompose(
            KernelSpec(spec.support.cluster(i), spec.bandwidth, spec.grid_points_per_unit)
        ).eigenvalues
        for i in range(spec.support.cluster_count())
    ]
    return np.sort(np.concatenate(per_cluster))[::-1]
