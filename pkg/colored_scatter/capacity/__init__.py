"""Capacity functionals, Monte Carlo sweeps and theoretical bounds."""

from .bounds import (
    capacity_bound_closed_form,
    capacity_bound_eigen,
    capacity_bound_integral,
    diversity_limits,
    dof_envelope,
    dof_limit,
    effective_width,
    envelope_excess,
    receive_spectrum,
    snr_correction,
)
from .mutual_info import (
    SnrPoint,
    channel_rates,
    equal_power_bits,
    mi_equal_power,
    squared_singular_values,
)
from .sweep import (
    CapacitySweepResult,
    ChannelSampler,
    build_sampler,
    ergodic_sweep,
    sample_trials,
)
from .waterfill import WaterfillResult, kkt_residual, waterfill

__all__ = [
    "CapacitySweepResult",
    "ChannelSampler",
    "SnrPoint",
    "WaterfillResult",
    "build_sampler",
    "capacity_bound_closed_form",
    "capacity_bound_eigen",
    "capacity_bound_integral",
    "channel_rates",
    "diversity_limits",
    "dof_envelope",
    "dof_limit",
    "effective_width",
    "equal_power_bits",
    "envelope_excess",
    "ergodic_sweep",
    "kkt_residual",
    "mi_equal_power",
    "receive_spectrum",
    "sample_trials",
    "snr_correction",
    "squared_singular_values",
    "waterfill",
]
