"""Waterfilling power allocation over parallel Gaussian channels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from colored_scatter.errors import DomainError

LN2 = float(np.log(2.0))


@dataclass(frozen=True)
class WaterfillResult:
    """Optimal allocation p_i = max(0, mu - 1/g_i) with sum p_i = P."""

    allocation: np.ndarray
    capacity_bits: float
    water_level: float
    active: int


def waterfill(gains: np.ndarray, power: float) -> WaterfillResult:
    """Allocate ``power`` over channels with the given gains.

    The water level comes from the sorted gains directly: with the k
    strongest channels active, mu_k = (P + sum of their 1/g) / k, and the
    largest k whose weakest channel still sits below mu_k is optimal.

    Args:
        gains: Nonnegative channel gains (squared singular values / noise)
        power: Total power P > 0

    Returns:
        WaterfillResult in the input order; all-zero gains give zero
        allocation and zero capacity
    """
    g = np.asarray(gains, dtype=float)
    if power <= 0 or not np.isfinite(power):
        raise DomainError("power", power, "must be positive and finite")
    if (g < 0).any() or not np.isfinite(g).all():
        raise DomainError("gains", g.tolist()[:8], "must be finite and nonnegative")

    positive = g > 0
    if not positive.any():
        return WaterfillResult(np.zeros_like(g), 0.0, 0.0, 0)

    inverse = np.sort(1.0 / g[positive])
    levels = (power + np.cumsum(inverse)) / np.arange(1, inverse.size + 1)
    feasible = np.flatnonzero(levels > inverse)
    active = int(feasible[-1]) + 1
    mu = float(levels[active - 1])

    allocation = np.zeros_like(g)
    allocation[positive] = np.maximum(0.0, mu - 1.0 / g[positive])
    capacity = float(np.log1p(g * allocation).sum() / LN2)
    return WaterfillResult(allocation, capacity, mu, active)


def kkt_residual(gains: np.ndarray, allocation: np.ndarray, power: float) -> float:
    """Largest violation of the waterfilling optimality conditions.

    Checks the power budget, a common level mu = p_i + 1/g_i over active
    channels, mu <= 1/g_i over inactive ones and p_i >= 0, all relative to mu.
    """
    g = np.asarray(gains, dtype=float)
    p = np.asarray(allocation, dtype=float)
    active = p > 0
    if not active.any():
        return 0.0 if not (g > 0).any() else float("inf")
    levels = p[active] + 1.0 / g[active]
    mu = float(levels.mean())
    inactive = ~active & (g > 0)
    violations = [
        abs(p.sum() - power) / power,
        float(np.abs(levels - mu).max()) / mu,
        float(np.maximum(0.0, -p).max()) / mu,
    ]
    if inactive.any():
        violations.append(float(np.maximum(0.0, mu - 1.0 / g[inactive]).max()) / mu)
    return max(violations)
