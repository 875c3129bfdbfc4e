"""Expansion of a narrow-band eigenbasis in a wider-band one.

For bandwidths W2 <= W1 on the same support, every eigenfunction phi_m of
the W2 operator is also W1-bandlimited and so expands in the W1
eigenfunctions psi_n with coefficients c_{m,n} = (1/lambda_n) * integral
over A of phi_m psi_n, where psi_n is normalized to unit energy on the
real line. The coefficients then satisfy

    sum_n c_{m1,n} c_{m2,n}            = delta_{m1,m2}
    sum_n lambda_n c_{m1,n} c_{m2,n}   = gamma_{m1} delta_{m1,m2}

The stored eigenfunctions have unit energy on A instead, which introduces
the factors sqrt(gamma_m) and 1/sqrt(lambda_n) below.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from colored_scatter.errors import ExpansionMismatchError
from colored_scatter.kernel.spectrum import EigenSpectrum

logger = logging.getLogger(__name__)

# Rows whose coarse eigenvalue reaches this level are concentrated on the
# support and are fully represented by the truncated fine basis. The weighted
# identity loses at most the first dropped fine eigenvalue and is checked on every row.
CONCENTRATED_ROW_LEVEL = 0.999


@dataclass(frozen=True)
class CrossExpansion:
    """Coefficients c_{m,n} with the residuals of both identities.

    Attributes:
        coefficients: N x N real matrix, rows index the coarse basis
        truncation: N
        orthonormality_residual: max |sum_n c c - delta| over concentrated rows
        weighted_residual: max |sum_n lambda_n c c - gamma delta| over all N rows
        checked_rows: Number of concentrated rows
        orthonormality_residual_all: Same as orthonormality_residual over all N rows
    """

    coefficients: np.ndarray
    truncation: int
    orthonormality_residual: float
    weighted_residual: float
    checked_rows: int
    orthonormality_residual_all: float


def _require_same_grid(fine: EigenSpectrum, coarse: EigenSpectrum) -> None:
    if fine.spec.support != coarse.spec.support:
        raise ExpansionMismatchError(
            f"supports differ: {fine.spec.support} vs {coarse.spec.support}"
        )
    if coarse.spec.bandwidth > fine.spec.bandwidth:
        raise ExpansionMismatchError(
            f"coarse bandwidth {coarse.spec.bandwidth:g} exceeds fine bandwidth "
            f"{fine.spec.bandwidth:g}"
        )
    if fine.nodes.shape != coarse.nodes.shape or not (
        np.allclose(fine.nodes, coarse.nodes, rtol=0.0, atol=1e-12)
        and np.allclose(fine.weights, coarse.weights, rtol=0.0, atol=1e-12)
    ):
        raise ExpansionMismatchError(
            "quadrature grids differ; build both specs with KernelSpec.default("
            "..., reference_bandwidth=W1)"
        )


def cross_expansion_coefficients(
    fine: EigenSpectrum,
    coarse: EigenSpectrum,
    truncation: Optional[int] = None,
) -> CrossExpansion:
    """Expand the coarse (W2) eigenbasis in the fine (W1) one.

    Args:
        fine: Spectrum at bandwidth W1, eigenvalues lambda_n
        coarse: Spectrum at bandwidth W2 <= W1 on the same grid, eigenvalues gamma_m
        truncation: N; defaults to the 99.99% spectral-mass truncation of ``fine``

    Returns:
        CrossExpansion with the N x N coefficients and identity residuals

    Raises:
        ExpansionMismatchError: For different supports, grids or W2 > W1
    """
    _require_same_grid(fine, coarse)
    n = fine.truncation() if truncation is None else int(truncation)
    if not 0 < n <= min(fine.size, coarse.size):
        raise ExpansionMismatchError(
            f"truncation {n} outside 1..{min(fine.size, coarse.size)}"
        )

    lam = fine.eigenvalues[:n]
    gam = coarse.eigenvalues[:n]
    if lam[-1] <= 0.0:
        raise ExpansionMismatchError(f"fine eigenvalue {n - 1} vanishes; lower the truncation")

    # quadrature inner products of unit-energy-on-A eigenfunctions
    overlap = coarse.orthonormal_vectors()[:, :n].T @ fine.orthonormal_vectors()[:, :n]
    coefficients = np.sqrt(gam)[:, None] * overlap / np.sqrt(lam)[None, :]

    gram = coefficients @ coefficients.T
    weighted = (coefficients * lam[None, :]) @ coefficients.T
    identity = np.eye(n)

    rows = np.flatnonzero(gam >= CONCENTRATED_ROW_LEVEL)
    block = np.ix_(rows, rows)
    ortho = float(np.abs(gram[block] - identity[block]).max()) if rows.size else float("nan")
    weighted_res = float(np.abs(weighted - np.diag(gam)).max())
    ortho_all = float(np.abs(gram - identity).max())

    logger.debug(
        f"Cross expansion W1={fine.spec.bandwidth:g}, W2={coarse.spec.bandwidth:g}: "
        f"N={n}, {rows.size} concentrated rows, residuals {ortho:.2e}/{weighted_res:.2e}"
    )
    coefficients.flags.writeable = False
    return CrossExpansion(
        coefficients=coefficients,
        truncation=n,
        orthonormality_residual=ortho,
        weighted_residual=weighted_res,
        checked_rows=int(rows.size),
        orthonormality_residual_all=ortho_all,
    )
