"""Theoretical capacity limits: degrees of freedom, eigenvalue and asymptotic bounds."""

from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING, Sequence

import numpy as np
from scipy.integrate import quad

from colored_scatter.capacity.mutual_info import SnrPoint
from colored_scatter.capacity.waterfill import LN2
from colored_scatter.errors import DomainError, InvalidConfigError
from colored_scatter.kernel.counting import epsilon_transition
from colored_scatter.kernel.spectrum import (
    DEFAULT_POINTS_PER_WIDTH,
    EigenSpectrum,
    KernelSpec,
    eigendecompose,
)
from colored_scatter.kernel.support import AngularSupport
from colored_scatter.scatter.field import Bounce

if TYPE_CHECKING:
    from colored_scatter.capacity.sweep import CapacitySweepResult

logger = logging.getLogger(__name__)

EIGEN_FLOOR = 1e-12
ENVELOPE_CI_FACTOR = 3.0


def snr_correction(ratio: float) -> float:
    """f(rho) = ln(rho) / (2 pi^2), clamped at 0 for rho <= 1."""
    if ratio <= 1.0:
        return 0.0
    return math.log(ratio) / (2.0 * math.pi**2)


def effective_width(gamma: float, half_count: float) -> float:
    """Delta = min{L, 1/Gamma}; Gamma = 0 means white scattering."""
    if gamma < 0:
        raise DomainError("gamma", gamma, "must be nonnegative")
    if half_count < 0:
        raise DomainError("L", half_count, "must be nonnegative")
    if gamma == 0:
        return float(half_count)
    return min(float(half_count), 1.0 / gamma)


def dof_limit(support: AngularSupport, gamma: float, half_count: float) -> float:
    """Saturation level |Omega| min{L, 1/Gamma} of the normalized capacity.

    With |Omega| = 0.9 and Gamma = 0.1 every array with L >= 10 saturates at 9.
    """
    return support.measure() * effective_width(gamma, half_count)


def receive_spectrum(
    support: AngularSupport,
    gamma: float,
    half_count: float,
    points_per_width: int = DEFAULT_POINTS_PER_WIDTH,
) -> EigenSpectrum:
    """Spectrum of the receive-side kernel with W = min{L, 1/Gamma}."""
    width = effective_width(gamma, half_count)
    if width <= 0:
        raise DomainError("min{L, 1/Gamma}", width, "must be positive")
    return eigendecompose(KernelSpec.default(support, width, points_per_width=points_per_width))


def capacity_bound_eigen(spectrum: EigenSpectrum, snr: SnrPoint) -> float:
    """sum_l log2(1 + (P/sigma^2) e_l) over eigenvalues above 1e-12."""
    values = np.asarray(spectrum.eigenvalues)
    values = values[values > EIGEN_FLOOR]
    if values.size == 0:
        return 0.0
    return float(np.log1p(snr.ratio * values).sum() / LN2)


def capacity_bound_closed_form(
    support: AngularSupport,
    width: float,
    snr: SnrPoint,
    bounce: Bounce = Bounce.MULTI,
) -> float:
    """Leading-order capacity bound with the SNR-dependent pre-log.

    Multi-bounce: [|Omega|D + M ln(2 pi |Omega| D) f(rho)] log2(1 + rho).
    Single-bounce splits the power over the M clusters:
    [|Omega|D + sum_i ln(2 pi |Omega_i| D) f(rho/M)] log2(1 + rho/M).

    Args:
        support: Angular support Omega
        width: D = min{L, 1/Gamma}
        snr: Operating point
        bounce: Scattering mechanism

    Raises:
        DomainError: If |Omega| D <= 1
    """
    dof = support.measure() * width
    if dof <= 1.0:
        raise DomainError("|Omega|D", dof, "must exceed 1")
    clusters = support.cluster_count()

    if Bounce(bounce) is Bounce.MULTI:
        ratio = snr.ratio
        correction = clusters * math.log(2.0 * math.pi * dof) * snr_correction(ratio)
    else:
        ratio = snr.ratio / clusters
        correction = sum(
            math.log(2.0 * math.pi * measure * width) for measure in support.cluster_measures()
        ) * snr_correction(ratio)
    return (dof + correction) * math.log1p(ratio) / LN2


def capacity_bound_integral(support: AngularSupport, width: float, snr: SnrPoint) -> float:
    """Integral of log2(1 + x rho) against the asymptotic eigenvalue density.

    The density is M ln(2 pi |Omega| D) / (pi^2 x (1 - x)) on (0, 1 - eps),
    with eps the transition level where the asymptotic count reaches zero.

    Raises:
        TransitionUndefinedError: If |Omega| D <= 1
    """
    dof = support.measure() * width
    eps = epsilon_transition(support, width)
    scale = support.cluster_count() * math.log(2.0 * math.pi * dof) / math.pi**2
    ratio = snr.ratio

    def integrand(x: float) -> float:
        return math.log1p(x * ratio) / (x * (1.0 - x))

    upper = 1.0 - eps
    lower_part, _ = quad(integrand, 0.0, 0.5, limit=200)
    upper_part, _ = quad(integrand, 0.5, upper, limit=200)
    return scale * (lower_part + upper_part) / LN2


def dof_envelope(
    support: AngularSupport, gamma: float, half_count: float, snr: SnrPoint
) -> float:
    """dof_limit + M ln+(2 pi |Omega| D) f(rho), a ceiling for the normalized capacity."""
    width = effective_width(gamma, half_count)
    dof = support.measure() * width
    spread = math.log(2.0 * math.pi * dof) if dof > 0 else 0.0
    return dof + support.cluster_count() * max(0.0, spread) * snr_correction(snr.ratio)


def envelope_excess(
    results: Sequence["CapacitySweepResult"], support: AngularSupport
) -> list[tuple["CapacitySweepResult", float]]:
    """Swept points whose C/C0 minus 3 CI sits above the dof envelope.

    Returns:
        (result, excess) pairs, excess in normalized units
    """
    exceeding = []
    for result in results:
        snr = SnrPoint.from_db(result.snr_db)
        envelope = dof_envelope(support, result.gamma, result.half_count, snr)
        slack = ENVELOPE_CI_FACTOR * result.ci_cap / result.c0
        excess = result.cap_norm - slack - envelope
        if excess > 0:
            exceeding.append((result, float(excess)))
    return exceeding


def diversity_limits(
    tx_support: AngularSupport,
    rx_support: AngularSupport,
    gamma_t: float,
    gamma_r: float,
    bounce: Bounce = Bounce.MULTI,
) -> float:
    """Diversity gain limit of the scattering channel.

    Multi-bounce: |Omega_t||Omega_r| / (Gamma_t Gamma_r).
    Single-bounce: sum_i |Omega_t,i||Omega_r,i| / (Gamma_t Gamma_r).

    Raises:
        DomainError: If a gamma is not positive
        InvalidConfigError: If single-bounce cluster counts differ
    """
    for name, gamma in (("gamma_t", gamma_t), ("gamma_r", gamma_r)):
        if not gamma > 0:
            raise DomainError(name, gamma, "must be positive")
    scale = 1.0 / (gamma_t * gamma_r)
    if Bounce(bounce) is Bounce.MULTI:
        return tx_support.measure() * rx_support.measure() * scale

    if tx_support.cluster_count() != rx_support.cluster_count():
        raise InvalidConfigError(
            "bounce",
            Bounce.SINGLE.value,
            f"single bounce needs equal cluster counts, got "
            f"{tx_support.cluster_count()} and {rx_support.cluster_count()}",
        )
    paired = zip(tx_support.cluster_measures(), rx_support.cluster_measures())
    return sum(t * r for t, r in paired) * scale
