"""Asymptotic eigenvalue counting for sinc kernels on unions of intervals."""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.optimize import bisect

from colored_scatter.errors import DomainError, TransitionUndefinedError
from colored_scatter.kernel.support import AngularSupport

logger = logging.getLogger(__name__)

# Bracket for the transition root; below it the root underflows.
EPSILON_FLOOR = 1e-300
# Absolute floor only; the relative tolerance drives convergence.
EPSILON_XTOL = 1e-300
EPSILON_RTOL = 4 * float(np.finfo(float).eps)


def _log_correction_scale(clusters: int, dof: float) -> float:
    """(M / pi^2) * ln(2 pi |A| W)."""
    return clusters / math.pi**2 * math.log(2.0 * math.pi * dof)


def landau_widom_count(support: AngularSupport, bandwidth: float, x: float) -> float:
    """Two-term asymptotic number of eigenvalues above x.

    G(x) = |A|W + (M / pi^2) ln((1 - x) / x) ln(2 pi |A| W)

    Args:
        support: Support A with M clusters
        bandwidth: Kernel bandwidth W
        x: Threshold in (0, 1)

    Returns:
        The asymptotic count (remainder term omitted)

    Raises:
        DomainError: If x is outside (0, 1) or |A|W < 1
    """
    if not 0.0 < x < 1.0:
        raise DomainError("x", x, "must lie in (0, 1)")
    dof = support.measure() * bandwidth
    if dof < 1.0:
        raise DomainError("|A|W", dof, "must be at least 1")
    return dof + _log_correction_scale(support.cluster_count(), dof) * math.log((1.0 - x) / x)


def landau_widom_tolerance(clusters: int, x: float) -> float:
    """Acceptance band max(2, 3 M |ln((1 - x)/x)|) for empirical counts."""
    return max(2.0, 3.0 * clusters * abs(math.log((1.0 - x) / x)))


def epsilon_transition(support: AngularSupport, bandwidth: float) -> float:
    """Eigenvalue level eps at which the asymptotic count reaches zero.

    Solves |A|W + (M / pi^2) ln(eps / (1 - eps)) ln(2 pi |A| W) = 0 by
    bisection on (1e-300, 0.5). The left side increases with eps, so the
    root is unique. 1 - eps approximates the largest eigenvalue.

    Raises:
        TransitionUndefinedError: If |A|W <= 1 or the root underflows
    """
    dof = support.measure() * bandwidth
    clusters = support.cluster_count()
    if dof <= 1.0 or clusters == 0:
        raise TransitionUndefinedError(dof, clusters)
    scale = _log_correction_scale(clusters, dof)

    def residual(eps: float) -> float:
        return dof + scale * (math.log(eps) - math.log1p(-eps))

    lower, upper = residual(EPSILON_FLOOR), residual(0.5)
    if not (lower < 0.0 < upper):
        raise TransitionUndefinedError(dof, clusters)

    root = bisect(
        residual, EPSILON_FLOOR, 0.5, xtol=EPSILON_XTOL, rtol=EPSILON_RTOL, maxiter=4000
    )
    logger.debug(
        f"Transition eps={root:.6e} for |A|W={dof:g}, M={clusters} "
        f"(residual {residual(root):.2e})"
    )
    return float(root)


def epsilon_closed_form(support: AngularSupport, bandwidth: float) -> float:
    """eps = 1 / (1 + exp(|A|W pi^2 / (M ln(2 pi |A| W))))."""
    dof = support.measure() * bandwidth
    exponent = dof * math.pi**2 / (support.cluster_count() * math.log(2.0 * math.pi * dof))
    tail = math.exp(-exponent)
    return tail / (1.0 + tail)
