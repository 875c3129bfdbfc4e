"""Colored scattering fields: correlation, synthesis and whiteness checks."""

from .acf import CovarianceFactor, acf_value, correlation_matrix, covariance_factor
from .dump import read_field_dump, write_field_dump
from .field import (
    Bounce,
    FieldBlock,
    FieldSynthesizer,
    ScatterConfig,
    ScatterField,
    build_synthesizer,
    sample_field,
    trial_rng,
)
from .whiteness import WhitenessReport, kl_whiteness_check

__all__ = [
    "Bounce",
    "CovarianceFactor",
    "FieldBlock",
    "FieldSynthesizer",
    "ScatterConfig",
    "ScatterField",
    "WhitenessReport",
    "acf_value",
    "build_synthesizer",
    "correlation_matrix",
    "covariance_factor",
    "kl_whiteness_check",
    "read_field_dump",
    "sample_field",
    "trial_rng",
    "write_field_dump",
]
