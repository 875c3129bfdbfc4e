"""CLI entry point for colored-scatter."""

from pathlib import Path
from typing import NoReturn, Optional

import typer
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from colored_scatter import __version__
from colored_scatter.capacity import (
    capacity_bound_closed_form,
    capacity_bound_eigen,
    capacity_bound_integral,
    diversity_limits,
    dof_envelope,
    dof_limit,
    effective_width,
    receive_spectrum,
)
from colored_scatter.config import RunConfig, parse_config
from colored_scatter.errors import ColoredScatterError
from colored_scatter.experiment import ensure_writable, run, sibling_path, validate
from colored_scatter.utils.logging import setup_logging

app = typer.Typer(
    name="colored-scatter",
    help="Capacity of MIMO channels with colored diffuse scattering",
    add_completion=True,
    no_args_is_help=False,
)

console = Console()


def version_callback(value: bool) -> None:
    """Print version and exit."""
    if value:
        console.print(f"[bold]colored-scatter[/bold] version {__version__}")
        raise typer.Exit()


def _fail(error: Exception) -> NoReturn:
    console.print(f"[red]Error: {escape(str(error))}[/red]")
    raise typer.Exit(1)


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    omega: Optional[str] = typer.Option(
        None, "--omega", help="Angular support as a:b,c:d,... in directional cosines"
    ),
    gamma: Optional[str] = typer.Option(
        None, "--gamma", help="Correlation widths Gamma, comma separated"
    ),
    snr_db: Optional[str] = typer.Option(None, "--snr-db", help="SNRs in dB, comma separated"),
    antennas: Optional[str] = typer.Option(
        None, "--antennas", help="Odd antenna counts 2L+1, comma separated"
    ),
    grid_k: Optional[int] = typer.Option(None, "--grid-k", help="Angular grid size K"),
    trials: Optional[int] = typer.Option(None, "--trials", help="Monte Carlo trials"),
    seed: Optional[int] = typer.Option(
        None, "--seed", help="Base seed (falls back to COLORED_SCATTER_SEED)"
    ),
    bounce: Optional[str] = typer.Option(None, "--bounce", help="multi or single"),
    workers: Optional[int] = typer.Option(None, "--workers", help="Parallel worker processes"),
    kernel_resolution: Optional[int] = typer.Option(
        None, "--kernel-resolution", help="Kernel grid points per 1/W for --validate and bounds"
    ),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="CSV output path"),
    full_scale: bool = typer.Option(
        False, "--full-scale", help="K=2048 and 10000 trials (hours of compute)"
    ),
    run_validation: bool = typer.Option(
        False, "--validate", help="Run the property suites instead of the sweep"
    ),
    config: Optional[Path] = typer.Option(
        None,
        "--config",
        "-c",
        help="Path to a flat YAML config keyed by flag names",
    ),
    verbose: bool = typer.Option(
        False,
        "--verbose",
        "-v",
        help="Enable debug output",
    ),
    log_file: Optional[Path] = typer.Option(None, "--log-file", help="Also log to this file"),
    version: bool = typer.Option(
        None,
        "--version",
        "-V",
        callback=version_callback,
        is_eager=True,
        help="Show version and exit",
    ),
) -> None:
    """colored-scatter - ergodic capacity sweeps and degrees-of-freedom checks.

    Without a subcommand, runs the Monte Carlo sweep (or --validate) and
    writes the CSV and its manifest.
    """
    setup_logging(log_file=log_file, verbose=verbose)

    flags = {
        "omega": omega,
        "gamma": gamma,
        "snr_db": snr_db,
        "antennas": antennas,
        "grid_k": grid_k,
        "trials": trials,
        "seed": seed,
        "bounce": bounce,
        "workers": workers,
        "kernel_resolution": kernel_resolution,
        "output": output,
        "full_scale": True if full_scale else None,
    }
    try:
        run_config = parse_config(config_path=config, flags=flags)
    except ColoredScatterError as e:
        _fail(e)
    ctx.obj = run_config

    # subcommands only need the parsed configuration
    if ctx.invoked_subcommand is not None:
        return

    if run_validation:
        _validate(run_config)
    else:
        _sweep(run_config)


def _sweep(run_config: RunConfig) -> None:
    try:
        summary = run(run_config)
    except ColoredScatterError as e:
        _fail(e)

    largest = max(run_config.antennas)
    table = Table(title=f"Normalized capacity at {largest} antennas")
    table.add_column("Gamma", style="cyan", justify="right")
    table.add_column("SNR (dB)", justify="right")
    table.add_column("I/C0", justify="right")
    table.add_column("C/C0", style="green", justify="right")
    table.add_column("DoF limit", style="yellow", justify="right")
    for result in summary.results:
        if result.antennas != largest:
            continue
        table.add_row(
            f"{result.gamma:g}",
            f"{result.snr_db:g}",
            f"{result.mi_norm:.3f} ± {result.ci_mi / result.c0:.3f}",
            f"{result.cap_norm:.3f} ± {result.ci_cap / result.c0:.3f}",
            f"{result.dof_limit:.3g}",
        )
    console.print(table)
    console.print(f"[green]Wrote {summary.csv_path} and {summary.manifest_path}[/green]")
    if summary.dominance_violations:
        console.print(
            f"[yellow]{summary.dominance_violations} realization(s) with "
            "waterfilling below equal power[/yellow]"
        )


def _validate(run_config: RunConfig) -> None:
    report_path = sibling_path(Path(run_config.output), "validation.yaml")
    try:
        ensure_writable(report_path)
        report = validate(run_config)
    except ColoredScatterError as e:
        _fail(e)
    report.write(report_path)

    table = Table(title="Validation")
    table.add_column("Check", style="cyan")
    table.add_column("Status", justify="center")
    table.add_column("Measured", justify="right")
    table.add_column("Threshold", justify="right")
    for check in report.checks:
        table.add_row(
            check.name,
            "[green]pass[/green]" if check.passed else "[red]FAIL[/red]",
            f"{check.measured:.3g}",
            f"{check.threshold:.3g}",
        )
    console.print(table)
    for check in report.failures:
        console.print(f"[red]{escape(check.name)}: {escape(check.detail)}[/red]")
    console.print(f"Report written to {report_path}")
    if not report.passed:
        raise typer.Exit(1)


@app.command()
def config(ctx: typer.Context) -> None:
    """Show the effective configuration."""
    run_config: RunConfig = ctx.obj
    table = Table(title="Effective Configuration")
    table.add_column("Setting", style="bold")
    table.add_column("Value", style="green")
    for key, value in run_config.echo().items():
        table.add_row(key, escape(str(value)))
    console.print(table)

    support = run_config.support
    console.print(
        f"\n[bold]Support:[/bold] {escape(str(support))} (M={support.cluster_count()}, "
        f"|Omega|={support.measure():g})"
    )
    console.print(f"[bold]Config hash:[/bold] {run_config.config_hash()}")


@app.command()
def bounds(
    ctx: typer.Context,
    eigen: bool = typer.Option(
        True, "--eigen/--no-eigen", help="Include the eigenvalue-sum bound"
    ),
) -> None:
    """Tabulate theoretical bounds without Monte Carlo, normalized by C0."""
    run_config: RunConfig = ctx.obj
    support = run_config.support

    table = Table(title=escape(f"Capacity bounds / C0 on {support}"))
    table.add_column("Gamma", style="cyan", justify="right")
    table.add_column("Antennas", justify="right")
    table.add_column("SNR (dB)", justify="right")
    table.add_column("DoF limit", style="yellow", justify="right")
    table.add_column("Envelope", justify="right")
    table.add_column("Closed form", justify="right")
    table.add_column("Integral", justify="right")
    if eigen:
        table.add_column("Eigen-sum", style="green", justify="right")

    try:
        for gamma in run_config.gamma:
            for half in run_config.half_counts:
                width = effective_width(gamma, half)
                spectrum = (
                    receive_spectrum(support, gamma, half, run_config.kernel_resolution)
                    if eigen and width > 0
                    else None
                )
                for snr in run_config.snr_points:
                    c0 = snr.c0_bits
                    dof = support.measure() * width
                    row = [
                        f"{gamma:g}",
                        str(2 * half + 1),
                        f"{snr.snr_db:g}",
                        f"{dof_limit(support, gamma, half):.3g}",
                        f"{dof_envelope(support, gamma, half, snr):.3g}",
                    ]
                    if dof > 1.0:
                        closed = capacity_bound_closed_form(
                            support, width, snr, run_config.bounce
                        )
                        integral = capacity_bound_integral(support, width, snr)
                        row += [f"{closed / c0:.3g}", f"{integral / c0:.3g}"]
                    else:
                        row += ["-", "-"]
                    if eigen and spectrum is not None:
                        row.append(f"{capacity_bound_eigen(spectrum, snr) / c0:.3g}")
                    elif eigen:
                        row.append("-")
                    table.add_row(*row)
        console.print(table)

        for gamma in run_config.gamma:
            limit = diversity_limits(support, support, gamma, gamma, run_config.bounce)
            console.print(f"Diversity limit at Gamma={gamma:g}: [bold]{limit:.4g}[/bold]")
    except ColoredScatterError as e:
        _fail(e)


if __name__ == "__main__":
    app()
