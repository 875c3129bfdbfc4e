"""Statistical check that Karhunen-Loeve coefficients of the field are white."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Any, Optional

import numpy as np

from colored_scatter.scatter.acf import CovarianceFactor, covariance_factor
from colored_scatter.scatter.field import ScatterConfig, build_synthesizer, trial_rng

logger = logging.getLogger(__name__)

SIGMA_LEVEL = 5.0
# Basis eigenvalues at or above this share of the largest count as degrees of freedom.
DOF_LEVEL = 0.5


@dataclass(frozen=True)
class WhitenessReport:
    """Moments of the projected coefficients h_{m,n} against their thresholds."""

    trials: int
    coefficients: int
    threshold: float
    properness_threshold: float
    max_mean: float
    max_off_diagonal: float
    max_diagonal_deviation: float
    max_pseudo_covariance: float
    basis_gamma_t: float
    basis_gamma_r: float

    @property
    def passed(self) -> bool:
        return (
            self.max_mean < self.threshold
            and self.max_off_diagonal < self.threshold
            and self.max_diagonal_deviation < self.threshold
            and self.max_pseudo_covariance < self.properness_threshold
        )

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["passed"] = self.passed
        return data


def _basis(factor: CovarianceFactor) -> tuple[np.ndarray, np.ndarray]:
    """Leading eigenvectors of a covariance and their eigenvalues."""
    count = int(np.count_nonzero(factor.eigenvalues >= DOF_LEVEL * factor.eigenvalues[0]))
    return factor.eigenvectors[:, :count], factor.eigenvalues[:count]


def kl_whiteness_check(
    config: ScatterConfig,
    trials: int,
    rng_seed: int,
    basis_gamma: Optional[float] = None,
) -> WhitenessReport:
    """Project sampled fields on the covariance eigenvectors and test the moments.

    Each field block is projected on the leading eigenvector pairs of its
    receive and transmit covariances and normalized by the square roots of
    the eigenvalues. For a matched basis the coefficients are i.i.d.
    CN(0, 1): zero mean, identity covariance, zero pseudo-covariance.

    Args:
        config: Field to test
        trials: Number of sampled fields
        rng_seed: Base seed, trial t uses seed XOR t
        basis_gamma: Correlation width used to build the basis instead of
            the configured one (a mismatched basis must fail)

    Returns:
        WhitenessReport with 5-sigma thresholds 5/sqrt(trials) and, for the
        pseudo-covariance, 5*sqrt(2/trials)
    """
    synthesizer = build_synthesizer(config)
    gamma_r = config.gamma_r if basis_gamma is None else basis_gamma
    gamma_t = config.gamma_t if basis_gamma is None else basis_gamma

    projections = []
    for block in synthesizer.blocks:
        rx_basis = covariance_factor(block.rx_support, gamma_r, config.grid_k)
        tx_basis = covariance_factor(block.tx_support, gamma_t, config.grid_k)
        u_r, d_r = _basis(rx_basis)
        u_t, d_t = _basis(tx_basis)
        scale = 1.0 / np.sqrt(np.outer(d_r, d_t))
        projections.append((block, u_r, u_t, scale))

    total = sum(p[1].shape[1] * p[2].shape[1] for p in projections)
    samples = np.empty((trials, total), dtype=np.complex128)
    for t in range(trials):
        field = synthesizer.draw(trial_rng(rng_seed, t))
        offset = 0
        for block, u_r, u_t, scale in projections:
            values = field.values[np.ix_(block.rows, block.cols)]
            coeff = (u_r.T @ values @ u_t) * scale
            samples[t, offset : offset + coeff.size] = coeff.ravel()
            offset += coeff.size

    mean = samples.mean(axis=0)
    covariance = samples.T @ samples.conj() / trials
    pseudo = (samples**2).mean(axis=0)
    diagonal = np.real(np.diag(covariance))
    off_diagonal = covariance - np.diag(np.diag(covariance))

    report = WhitenessReport(
        trials=trials,
        coefficients=total,
        threshold=float(SIGMA_LEVEL / np.sqrt(trials)),
        properness_threshold=float(SIGMA_LEVEL * np.sqrt(2.0 / trials)),
        max_mean=float(np.abs(mean).max()),
        max_off_diagonal=float(np.abs(off_diagonal).max()) if total > 1 else 0.0,
        max_diagonal_deviation=float(np.abs(diagonal - 1.0).max()),
        max_pseudo_covariance=float(np.abs(pseudo).max()),
        basis_gamma_t=float(gamma_t),
        basis_gamma_r=float(gamma_r),
    )
    logger.debug(
        f"KL whiteness over {trials} trials, {total} coefficients: "
        f"mean {report.max_mean:.3f}, off-diag {report.max_off_diagonal:.3f}, "
        f"diag {report.max_diagonal_deviation:.3f} (threshold {report.threshold:.3f})"
    )
    return report

