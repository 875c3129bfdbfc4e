"""Property suites run by --validate: eigenvalue counting, cross expansion, whiteness."""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable

import yaml

from colored_scatter.config.settings import RunConfig
from colored_scatter.errors import ColoredScatterError
from colored_scatter.kernel.counting import landau_widom_count, landau_widom_tolerance
from colored_scatter.kernel.expansion import cross_expansion_coefficients
from colored_scatter.kernel.spectrum import (
    EigenSpectrum,
    KernelSpec,
    eigendecompose,
    refinement_deviation,
)
from colored_scatter.scatter.acf import covariance_factor
from colored_scatter.scatter.whiteness import kl_whiteness_check

logger = logging.getLogger(__name__)

PLATEAU_TOLERANCE = 2.0
TRACE_TOLERANCE = 1e-8
REFINEMENT_TOLERANCE = 1e-6
EXPANSION_TOLERANCE = 1e-3
RECONSTRUCTION_TOLERANCE = 1e-8
TRANSITION_LEVELS = (0.1, 0.9)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one property check."""

    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["passed"] = bool(self.passed)
        data["measured"] = float(self.measured)
        data["threshold"] = float(self.threshold)
        return data


@dataclass
class ValidationReport:
    """All checks of one validation run."""

    config_hash: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def get(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def to_dict(self) -> dict[str, Any]:
        return {
            "config_hash": self.config_hash,
            "passed": self.passed,
            "checks": [check.to_dict() for check in self.checks],
        }

    def write(self, path: Path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            yaml.safe_dump(self.to_dict(), f, sort_keys=False)


def _failure(name: str, error: ColoredScatterError) -> CheckResult:
    logger.debug(f"{name} failed: {error}")
    return CheckResult(name, False, math.nan, math.nan, str(error))


def _guarded(report: ValidationReport, name: str, check: Callable[[], CheckResult]) -> None:
    try:
        result = check()
    except ColoredScatterError as e:
        result = _failure(name, e)
    report.checks.append(result)


def _bounded(name: str, measured: float, threshold: float, detail: str = "") -> CheckResult:
    return CheckResult(name, bool(measured <= threshold), float(measured), float(threshold), detail)


def _kernel_checks(
    report: ValidationReport, config: RunConfig, gamma: float, tag: str
) -> None:
    support = config.support
    width = 1.0 / gamma
    spec = KernelSpec.default(support, width, points_per_width=config.kernel_resolution)
    try:
        spectrum = eigendecompose(spec)
    except ColoredScatterError as e:
        report.checks.append(_failure(f"kernel_spectrum[{tag}]", e))
        return

    dof = spec.dof
    report.checks.append(
        _bounded(
            f"plateau_count[{tag}]",
            abs(spectrum.count_above(0.5) - dof),
            PLATEAU_TOLERANCE,
            f"{spectrum.count_above(0.5)} eigenvalues above 0.5, |Omega|W={dof:g}",
        )
    )
    for x in TRANSITION_LEVELS:
        _guarded(
            report,
            f"landau_widom[{tag},x={x:g}]",
            lambda x=x: _transition_check(spectrum, x, tag),
        )
    report.checks.append(
        _bounded(
            f"trace_identity[{tag}]",
            abs(spectrum.total_mass - dof) / dof,
            TRACE_TOLERANCE,
            f"trace {spectrum.total_mass:.12g} vs |Omega|W={dof:g}",
        )
    )
    _guarded(
        report,
        f"grid_refinement[{tag}]",
        lambda: _bounded(
            f"grid_refinement[{tag}]",
            refinement_deviation(spec),
            REFINEMENT_TOLERANCE,
            f"top {math.ceil(dof) + 5} eigenvalues, extrapolated from "
            f"{spec.grid_points_per_unit}, {2 * spec.grid_points_per_unit} and "
            f"{4 * spec.grid_points_per_unit} points per unit",
        ),
    )
    _guarded(report, f"cross_expansion[{tag}]", lambda: _expansion_check(spectrum, config, tag))


def _transition_check(spectrum: EigenSpectrum, x: float, tag: str) -> CheckResult:
    support = spectrum.spec.support
    expected = landau_widom_count(support, spectrum.spec.bandwidth, x)
    count = spectrum.count_above(x)
    return _bounded(
        f"landau_widom[{tag},x={x:g}]",
        abs(count - expected),
        landau_widom_tolerance(support.cluster_count(), x),
        f"{count} eigenvalues above {x:g}, asymptotic {expected:.2f}",
    )


def _expansion_check(fine: EigenSpectrum, config: RunConfig, tag: str) -> CheckResult:
    width = fine.spec.bandwidth
    coarse = eigendecompose(
        KernelSpec.default(
            config.support,
            width / 2.0,
            reference_bandwidth=width,
            points_per_width=config.kernel_resolution,
        )
    )
    expansion = cross_expansion_coefficients(fine, coarse)
    worst = expansion.weighted_residual
    if expansion.checked_rows:
        worst = max(worst, expansion.orthonormality_residual)
    return _bounded(
        f"cross_expansion[{tag}]",
        worst,
        EXPANSION_TOLERANCE,
        f"W1={width:g}, W2={width / 2:g}, N={expansion.truncation}, "
        f"{expansion.checked_rows} concentrated rows, "
        f"orthonormality {expansion.orthonormality_residual:.2e}, "
        f"weighted {expansion.weighted_residual:.2e}",
    )


def _reconstruction_check(config: RunConfig, gamma: float, tag: str) -> CheckResult:
    factor = covariance_factor(config.support, gamma, config.grid_k)
    return _bounded(
        f"covariance_reconstruction[{tag}]",
        factor.reconstruction_error(),
        RECONSTRUCTION_TOLERANCE,
        f"{factor.size} nodes, rank {factor.rank()}, clipped {factor.clipped_mass:.2e}",
    )


def _whiteness_checks(report: ValidationReport, config: RunConfig, gamma: float, tag: str) -> None:
    scatter = config.scatter_config(gamma)

    def matched() -> CheckResult:
        result = kl_whiteness_check(scatter, config.trials, config.seed)
        worst = max(
            result.max_mean / result.threshold,
            result.max_off_diagonal / result.threshold,
            result.max_diagonal_deviation / result.threshold,
            result.max_pseudo_covariance / result.properness_threshold,
        )
        return CheckResult(
            f"kl_whiteness[{tag}]",
            result.passed,
            float(worst),
            1.0,
            f"{result.coefficients} coefficients over {result.trials} fields, "
            "worst moment in units of its 5-sigma threshold",
        )

    def mismatched() -> CheckResult:
        result = kl_whiteness_check(scatter, config.trials, config.seed, basis_gamma=gamma / 2.0)
        ratio = result.max_diagonal_deviation / result.threshold
        return CheckResult(
            f"kl_whiteness_mismatched_basis[{tag}]",
            not result.passed,
            float(ratio),
            1.0,
            f"basis built for Gamma={gamma / 2:g} must be rejected",
        )

    _guarded(report, f"kl_whiteness[{tag}]", matched)
    _guarded(report, f"kl_whiteness_mismatched_basis[{tag}]", mismatched)


def validate(config: RunConfig) -> ValidationReport:
    """Run every property suite for the configured support and correlation widths.

    Kernel suites run at W = 1/Gamma for each Gamma; the whiteness suite
    runs on the configured grid for the widest Gamma (fewest coefficients).
    Errors raised by a check become failed entries.

    Args:
        config: Run configuration

    Returns:
        ValidationReport with one CheckResult per property
    """
    report = ValidationReport(config_hash=config.config_hash())
    for gamma in config.gamma:
        tag = f"gamma={gamma:g}"
        logger.info(f"Validating kernel and covariance at {tag}")
        try:
            _kernel_checks(report, config, gamma, tag)
        except ColoredScatterError as e:
            report.checks.append(_failure(f"kernel_spectrum[{tag}]", e))
        _guarded(
            report,
            f"covariance_reconstruction[{tag}]",
            lambda gamma=gamma, tag=tag: _reconstruction_check(config, gamma, tag),
        )

    widest = max(config.gamma)
    _whiteness_checks(report, config, widest, f"gamma={widest:g}")

    failed = len(report.failures)
    if failed:
        logger.warning(f"{failed} of {len(report.checks)} checks failed")
    else:
        logger.info(f"All {len(report.checks)} checks passed")
    return report


__all__ = ["CheckResult", "ValidationReport", "validate"]
