"""Sweep execution: CSV results plus a run manifest."""

from __future__ import annotations

import csv
import logging
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import yaml

from colored_scatter import __version__
from colored_scatter.capacity.bounds import envelope_excess
from colored_scatter.capacity.sweep import CapacitySweepResult, ergodic_sweep
from colored_scatter.channel.assembly import calibrate_eta
from colored_scatter.config.settings import RunConfig
from colored_scatter.errors import OutputNotWritableError

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "gamma",
    "antennas",
    "snr_db",
    "mi_equal_power_bits",
    "capacity_wf_bits",
    "c0_bits",
    "mi_norm",
    "cap_norm",
    "ci_mi",
    "ci_cap",
    "dof_limit",
    "trials",
    "seed",
)


@dataclass
class RunSummary:
    """What a run produced."""

    csv_path: Path
    manifest_path: Path
    results: list[CapacitySweepResult]
    etas: dict[float, float]
    wall_time: float
    dominance_violations: int = 0
    envelope_exceedances: list[tuple[CapacitySweepResult, float]] = field(default_factory=list)


def sibling_path(output: Path, suffix: str) -> Path:
    """``results.csv`` -> ``results.<suffix>``."""
    return output.with_name(f"{output.stem}.{suffix}")


def ensure_writable(path: Path) -> None:
    """Create the parent directory and open the file for append, or fail.

    Raises:
        OutputNotWritableError: If the path cannot be written
    """
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "a", encoding="utf-8"):
            pass
    except OSError as e:
        raise OutputNotWritableError(str(path), e.strerror or str(e)) from e


def _format(value: Any) -> str:
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


def csv_row(result: CapacitySweepResult, seed: int) -> list[str]:
    values = (
        result.gamma,
        result.antennas,
        result.snr_db,
        result.mean_mi_equal_power,
        result.mean_capacity_wf,
        result.c0,
        result.mi_norm,
        result.cap_norm,
        result.ci_mi,
        result.ci_cap,
        result.dof_limit,
        result.trials,
        seed,
    )
    return [_format(v) for v in values]


def write_csv(results: list[CapacitySweepResult], seed: int, path: Path) -> None:
    """Write rows sorted by (gamma, antennas, snr_db) with a fixed header."""
    ordered = sorted(results, key=lambda r: (r.gamma, r.antennas, r.snr_db))
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for result in ordered:
            writer.writerow(csv_row(result, seed))


def write_manifest(config: RunConfig, summary: RunSummary) -> None:
    """Flat key: value record of the run."""
    manifest: dict[str, Any] = {
        "version": __version__,
        "config_hash": config.config_hash(),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "wall_time_s": round(summary.wall_time, 3),
        "csv": str(summary.csv_path),
        "rows": len(summary.results),
    }
    manifest.update(config.echo())
    for gamma, eta in summary.etas.items():
        manifest[f"eta[{gamma:g}]"] = float(eta)
    manifest["dominance_violations"] = summary.dominance_violations
    manifest["envelope_exceedances"] = len(summary.envelope_exceedances)
    with open(summary.manifest_path, "w", encoding="utf-8") as f:
        yaml.safe_dump(manifest, f, sort_keys=False)


def run(config: RunConfig) -> RunSummary:
    """Run the Monte Carlo sweep for every Gamma and write CSV + manifest.

    Args:
        config: Validated run configuration

    Returns:
        RunSummary with output paths, results and calibration values

    Raises:
        OutputNotWritableError: Before any computation, if an output path
            cannot be written
    """
    csv_path = Path(config.output)
    manifest_path = sibling_path(csv_path, "manifest.yaml")
    ensure_writable(csv_path)
    ensure_writable(manifest_path)

    start = time.perf_counter()
    results: list[CapacitySweepResult] = []
    etas: dict[float, float] = {}
    for index, gamma in enumerate(config.gamma, start=1):
        scatter = config.scatter_config(gamma)
        etas[gamma] = calibrate_eta(scatter, config.eta_reference)
        logger.info(
            f"[{index}/{len(config.gamma)}] Gamma={gamma:g}: {config.trials} trials, "
            f"{len(config.antennas)} arrays, {len(config.snr_db)} SNRs (eta={etas[gamma]:.4g})"
        )
        results.extend(
            ergodic_sweep(
                scatter,
                config.half_counts,
                config.snr_points,
                trials=config.trials,
                seed=config.seed,
                workers=config.workers,
                eta=etas[gamma],
            )
        )
    wall_time = time.perf_counter() - start

    exceedances = envelope_excess(results, config.support)
    for result, excess in exceedances:
        logger.warning(
            f"C/C0={result.cap_norm:.3f} at Gamma={result.gamma:g}, "
            f"{result.antennas} antennas, {result.snr_db:g} dB is {excess:.3f} above "
            "the dof envelope (the envelope omits the array gain of the eta normalization)"
        )

    summary = RunSummary(
        csv_path=csv_path,
        manifest_path=manifest_path,
        results=results,
        etas=etas,
        wall_time=wall_time,
        dominance_violations=sum(r.dominance_violations for r in results),
        envelope_exceedances=exceedances,
    )
    write_csv(results, config.seed, csv_path)
    write_manifest(config, summary)
    logger.info(f"Wrote {len(results)} rows to {csv_path} in {wall_time:.1f}s")
    return summary
