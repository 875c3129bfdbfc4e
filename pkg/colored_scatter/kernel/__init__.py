"""Spectral analysis of sinc kernels on unions of intervals."""

from .counting import (
    epsilon_closed_form,
    epsilon_transition,
    landau_widom_count,
    landau_widom_tolerance,
)
from .expansion import CrossExpansion, cross_expansion_coefficients
from .spectrum import (
    EigenSpectrum,
    KernelMatrix,
    KernelSpec,
    build_kernel_matrix,
    eigendecompose,
    kernel_matrix,
    leading_eigenvalues,
    merged_interval_spectrum,
    quadrature_grid,
    refinement_deviation,
)
from .support import AngularSupport

__all__ = [
    "AngularSupport",
    "CrossExpansion",
    "EigenSpectrum",
    "KernelMatrix",
    "KernelSpec",
    "build_kernel_matrix",
    "cross_expansion_coefficients",
    "eigendecompose",
    "epsilon_closed_form",
    "epsilon_transition",
    "kernel_matrix",
    "leading_eigenvalues",
    "landau_widom_count",
    "landau_widom_tolerance",
    "merged_interval_spectrum",
    "quadrature_grid",
    "refinement_deviation",
]
