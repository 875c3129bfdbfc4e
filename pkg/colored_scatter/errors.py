"""Centralized exception hierarchy for colored-scatter.

Every error raised by the library derives from ColoredScatterError and
carries a stable code, so the CLI and the validation report can handle
failures uniformly.
"""

from __future__ import annotations

from typing import Any, Optional


class ColoredScatterError(Exception):
    """Base exception for all colored-scatter errors.

    Attributes:
        message: Human-readable error message.
        code: Optional error code for programmatic handling.
        details: Optional dictionary with additional error context.
    """

    def __init__(
        self,
        message: str,
        code: Optional[str] = None,
        details: Optional[dict[str, Any]] = None,
    ):
        self.message = message
        self.code = code
        self.details = details or {}
        super().__init__(message)

    def __str__(self) -> str:
        if self.code:
            return f"[{self.code}] {self.message}"
        return self.message

    def to_dict(self) -> dict[str, Any]:
        """Convert exception to dictionary for logging/serialization."""
        return {
            "error_type": self.__class__.__name__,
            "message": self.message,
            "code": self.code,
            "details": self.details,
        }


# =============================================================================
# Configuration Errors
# =============================================================================

class ConfigurationError(ColoredScatterError):
    """Raised when there's a configuration problem."""
    pass


class InvalidConfigError(ConfigurationError):
    """Raised when configuration values are invalid."""

    def __init__(self, field: str, value: Any, reason: str):
        super().__init__(
            message=f"Invalid configuration for '{field}': {reason}",
            code="INVALID_CONFIG",
            details={"field": field, "value": str(value)[:100], "reason": reason},
        )


class OutputNotWritableError(ConfigurationError):
    """Raised when a result path cannot be written."""

    def __init__(self, path: str, reason: str):
        super().__init__(
            message=f"Cannot write output '{path}': {reason}",
            code="OUTPUT_NOT_WRITABLE",
            details={"path": path, "reason": reason},
        )


# =============================================================================
# Kernel Errors
# =============================================================================

class KernelError(ColoredScatterError):
    """Base exception for support and sinc-kernel errors."""
    pass


class InvalidSupportError(KernelError):
    """Raised when an interval list does not describe a valid support."""

    def __init__(self, reason: str, intervals: Any = None):
        super().__init__(
            message=f"Invalid angular support: {reason}",
            code="INVALID_SUPPORT",
            details={"reason": reason, "intervals": str(intervals)[:200]},
        )


class EmptySupportError(KernelError):
    """Raised when a kernel is requested on a support of zero measure."""

    def __init__(self) -> None:
        super().__init__(message="empty support", code="EMPTY_SUPPORT")


class UnderResolvedError(KernelError):
    """Raised when a grid cannot resolve the sinc main lobe."""

    def __init__(self, reason: str, required: float, actual: float):
        super().__init__(
            message=f"under-resolved kernel: {reason}",
            code="UNDER_RESOLVED",
            details={"required": required, "actual": actual},
        )


class EigenSolverError(KernelError):
    """Raised when the symmetric eigensolver fails to converge."""

    def __init__(self, reason: str, diagnostics: dict[str, Any]):
        super().__init__(
            message=f"Eigendecomposition failed: {reason}",
            code="EIGEN_SOLVER",
            details=diagnostics,
        )


class SpectrumRangeError(KernelError):
    """Raised when a concentration eigenvalue falls outside [0, 1]."""

    def __init__(self, minimum: float, maximum: float, tolerance: float):
        super().__init__(
            message=(
                f"eigenvalues outside (-{tolerance:g}, 1+{tolerance:g}): "
                f"min={minimum:.3e}, max={maximum:.12f}"
            ),
            code="SPECTRUM_RANGE",
            details={"min": minimum, "max": maximum, "tolerance": tolerance},
        )


class TransitionUndefinedError(KernelError):
    """Raised when the eigenvalue transition equation has no root."""

    def __init__(self, dof: float, clusters: int):
        super().__init__(
            message=f"transition undefined for |Omega|*Delta={dof:g}, M={clusters}",
            code="TRANSITION_UNDEFINED",
            details={"dof": dof, "clusters": clusters},
        )


class DomainError(KernelError):
    """Raised when an argument lies outside its mathematical domain."""

    def __init__(self, name: str, value: Any, reason: str):
        super().__init__(
            message=f"'{name}'={value} {reason}",
            code="DOMAIN",
            details={"name": name, "value": str(value), "reason": reason},
        )


class ExpansionMismatchError(KernelError):
    """Raised when two spectra cannot be related by a cross expansion."""

    def __init__(self, reason: str):
        super().__init__(message=f"mismatched spectra: {reason}", code="EXPANSION_MISMATCH")


# =============================================================================
# Scatter Errors
# =============================================================================

class ScatterError(ColoredScatterError):
    """Base exception for scattering-field synthesis errors."""
    pass


class IllConditionedCovarianceError(ScatterError):
    """Raised when too much covariance mass is clipped by the square root."""

    def __init__(self, clipped: float, trace: float, gamma: float, grid_k: int):
        super().__init__(
            message="covariance ill-conditioned at this resolution",
            code="COVARIANCE_ILL_CONDITIONED",
            details={
                "clipped_mass": clipped,
                "trace": trace,
                "gamma": gamma,
                "grid_k": grid_k,
            },
        )


class FieldDumpError(ScatterError):
    """Raised when a binary field dump is malformed."""

    def __init__(self, path: str, reason: str):
        super().__init__(
            message=f"Bad field dump '{path}': {reason}",
            code="FIELD_DUMP",
            details={"path": path, "reason": reason},
        )


# =============================================================================
# Channel Errors
# =============================================================================

class ChannelError(ColoredScatterError):
    """Base exception for antenna-domain channel errors."""
    pass


class DimensionMismatchError(ChannelError):
    """Raised when operands disagree on grid or matrix shape."""

    def __init__(self, what: str, expected: Any, actual: Any):
        super().__init__(
            message=f"dimension mismatch in {what}: expected {expected}, got {actual}",
            code="DIMENSION_MISMATCH",
            details={"what": what, "expected": str(expected), "actual": str(actual)},
        )


class ZeroPowerError(ChannelError):
    """Raised when the expected channel power vanishes."""

    def __init__(self, reason: str):
        super().__init__(message=f"zero expected power: {reason}", code="ZERO_POWER")


# =============================================================================
# Capacity Errors
# =============================================================================

class CapacityError(ColoredScatterError):
    """Base exception for capacity evaluation errors."""
    pass


class NonFiniteChannelError(CapacityError):
    """Raised when a channel matrix contains NaN or infinite entries."""

    def __init__(self, shape: tuple[int, ...]):
        super().__init__(
            message=f"channel matrix of shape {shape} has non-finite entries",
            code="NON_FINITE_CHANNEL",
            details={"shape": list(shape)},
        )
