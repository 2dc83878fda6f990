"""
steinpp CLI
Main entry point for the command line interface
"""

import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import click
from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from ..core.carrier import variation_norm_diff
from ..core.config.loader import ConfigLoader
from ..core.config.schema import ExperimentConfig, ExperimentKind
from ..core.config.settings import SteinppSettings
from ..core.exceptions import ConfigError, SteinppError
from ..core.matching import d1, d1_prime
from ..core.renewal import check_lemma41, solve_renewal
from ..experiments import VerificationReport, build_experiment, run_experiment
from ..experiments.base import VerificationStatus

console = Console()
logger = logging.getLogger(__name__)

STATUS_STYLES = {
    VerificationStatus.SATISFIED: "green",
    VerificationStatus.INCONCLUSIVE: "yellow",
    VerificationStatus.FAILED: "red",
    VerificationStatus.SKIPPED: "dim",
}


def setup_logging(level: str) -> None:
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _fmt(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.6g}"


def _load(config: str, seed: Optional[int] = None, output_dir: Optional[str] = None) -> ExperimentConfig:
    return ConfigLoader().load_experiment(config, seed=seed, output_dir=output_dir)


def print_report(report: VerificationReport) -> None:
    table = Table(title=f"{report.experiment} (seed {report.seed})")
    table.add_column("Param", style="cyan")
    table.add_column("Metric")
    table.add_column("Distance", justify="right")
    table.add_column("± Halfwidth", justify="right")
    table.add_column("Bound", justify="right")
    table.add_column("Margin", justify="right")
    table.add_column("Status", style="bold")
    for row in report.rows:
        style = STATUS_STYLES[row.status]
        table.add_row(row.param, row.metric.value, _fmt(row.distance), _fmt(row.halfwidth),
                      _fmt(row.bound), _fmt(row.margin), f"[{style}]{row.status.value}[/{style}]")
    console.print(table)


@click.group()
@click.option('--log-level', default=None, help='Logging level (defaults to STEINPP_LOG_LEVEL)')
@click.pass_context
def cli(ctx, log_level: Optional[str]):
    """steinpp: Poisson process approximation bounds and their verification"""
    settings = SteinppSettings()
    setup_logging(log_level or settings.log_level)
    ctx.obj = settings


@cli.command()
@click.option('--config', '-c', 'config_path', required=True, help='Experiment configuration file')
@click.option('--seed', type=int, default=None, help='Override the config seed')
@click.pass_obj
def bound(settings: SteinppSettings, config_path: str, seed: Optional[int]):
    """Evaluate the bounds an experiment config describes"""
    experiment = build_experiment(_load(config_path, seed), settings)
    reports = experiment.bounds()
    if not reports:
        console.print("[yellow]No bound applies to this configuration[/yellow]")
        return 0

    table = Table(title=f"Bounds: {experiment.name}")
    table.add_column("Formula", style="cyan")
    table.add_column("Metric")
    table.add_column("Value", justify="right")
    table.add_column("MC stderr", justify="right")
    table.add_column("Flags", style="dim")
    for report in reports:
        table.add_row(report.formula_id, report.metric.value, f"{report.value:.6g}",
                      _fmt(report.mc_stderr), ", ".join(flag.value for flag in report.flags))
    console.print(table)
    return 0


@cli.command()
@click.option('--config', '-c', 'config_path', required=True, help='Experiment configuration file')
@click.option('--seed', type=int, default=None, help='Override the config seed')
@click.option('--count', '-n', type=click.IntRange(min=1), default=1, help='Number of configurations')
@click.option('--output', '-o', type=click.Path(dir_okay=False), default=None,
              help='Write JSON lines here instead of stdout')
@click.pass_obj
def simulate(settings: SteinppSettings, config_path: str, seed: Optional[int], count: int, output: Optional[str]):
    """Emit sampled configurations as JSON lines of [position, multiplicity] pairs"""
    experiment = build_experiment(_load(config_path, seed), settings)
    stream = experiment.stream.spawn("simulate")
    lines = [experiment.sample(stream.spawn(k)).to_json() for k in range(count)]
    if output:
        Path(output).write_text("\n".join(lines) + "\n")
        logger.info(f"Wrote {count} configurations to {output}")
    else:
        click.echo("\n".join(lines))
    return 0


@cli.command()
@click.option('--config', '-c', 'config_path', required=True, help='Experiment configuration file')
@click.option('--seed', type=int, default=None, help='Override the config seed')
@click.option('--output-dir', '-o', default=None, help='Directory for report.json and tables/')
@click.pass_obj
def verify(settings: SteinppSettings, config_path: str, seed: Optional[int], output_dir: Optional[str]):
    """Run a verification experiment and emit its report"""
    config = _load(config_path, seed, output_dir)
    report = run_experiment(config, settings)
    print_report(report)
    if config.output_dir:
        report.write(config.output_dir)
    if report.failed:
        console.print("[red]Verification failed[/red]")
    return report.exit_code


@cli.command()
@click.option('--config', '-c', 'config_path', required=True, help='Renewal experiment configuration file')
@click.option('--step', type=float, default=None, help='Override the grid step')
@click.option('--output-dir', '-o', default=None, help='Directory for the solution CSV files')
def renewal(config_path: str, step: Optional[float], output_dir: Optional[str]):
    """Solve the renewal equations and export the solutions"""
    config = _load(config_path)
    if config.experiment is not ExperimentKind.RENEWAL:
        raise ConfigError(f"{config_path} is a {config.experiment.value} config, not a renewal config")
    params = config.typed_params()
    h = step or params.step

    table = Table(title=f"Renewal solutions on [0, {params.T}], step {h}")
    table.add_column("Process", style="cyan")
    table.add_column("Copies", justify="right")
    table.add_column("F(T)", justify="right")
    table.add_column("G(T)", justify="right")
    table.add_column("V(T)", justify="right")
    table.add_column("E N(N-1)", justify="right")
    table.add_column("Inequalities")
    for k, proc in enumerate(params.processes):
        spec = proc.build(params.T)
        solution = solve_renewal(spec, h)
        checks = check_lemma41(spec, solution)
        table.add_row(str(k), str(proc.copies), f"{spec.F_T:.6g}", f"{spec.G_T:.6g}", f"{solution.V_T:.6g}",
                      f"{solution.factorial_moment[-1]:.6g}",
                      "[green]hold[/green]" if checks.all_hold else "[red]violated[/red]")
        if output_dir:
            Path(output_dir).mkdir(parents=True, exist_ok=True)
            solution.to_csv(Path(output_dir) / f"renewal_{k}.csv")
    console.print(table)
    return 0


@cli.command()
@click.option('--a', 'a_path', required=True, help='First configuration file')
@click.option('--b', 'b_path', required=True, help='Second configuration file')
@click.option('--metric', '-m', type=click.Choice(['d1', 'd1prime', 'variation', 'all']), default='all')
def metrics(a_path: str, b_path: str, metric: str):
    """Distances between two configuration files"""
    loader = ConfigLoader()
    a, b = loader.load_configuration(a_path), loader.load_configuration(b_path)
    values = {
        'd1': lambda: d1(a, b),
        'd1prime': lambda: d1_prime(a, b),
        'variation': lambda: float(variation_norm_diff(a, b)),
    }
    if metric != 'all':
        click.echo(f"{values[metric]():.12g}")
        return 0
    for name, value in values.items():
        click.echo(f"{name} {value():.12g}")
    return 0


@cli.command()
@click.argument('directory', type=click.Path(exists=True, file_okay=False))
@click.option('--seed', type=int, default=None, help='Override every config seed')
@click.option('--output-dir', '-o', default=None, help='One report directory per config below this')
@click.pass_obj
def suite(settings: SteinppSettings, directory: str, seed: Optional[int], output_dir: Optional[str]):
    """Run every experiment config in a directory"""
    loader = ConfigLoader()
    exit_code = 0
    paths = sorted(p for p in Path(directory).iterdir() if p.suffix in ('.json', '.yaml', '.yml'))
    for path in paths:
        data = loader.read(path)
        if not isinstance(data, dict) or 'experiment' not in data:
            logger.debug(f"Skipping {path}: not an experiment config")
            continue
        target = str(Path(output_dir) / path.stem) if output_dir else None
        config = loader.load_experiment(path, seed=seed, output_dir=target)
        report = run_experiment(config, settings)
        print_report(report)
        if config.output_dir:
            report.write(config.output_dir)
        exit_code = max(exit_code, report.exit_code)
    return exit_code


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI; 0 on success, 1 on usage or config errors, 2 on failed verification."""
    args: List[str] = list(sys.argv[1:] if argv is None else argv)
    try:
        result = cli.main(args=args, prog_name="steinpp", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return 1
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except SteinppError as e:
        logger.error(str(e))
        click.echo(f"Error: {e}", err=True)
        return 1
    return result if isinstance(result, int) else 0


def main():
    load_dotenv()
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
