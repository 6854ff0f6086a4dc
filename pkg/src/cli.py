"""
src/cli.py

Command line entry point:

    chronolapse run --config FILE [--out-dir DIR] [--seed-override N] [--quiet]
    chronolapse validate --config FILE
    chronolapse estimate <calculator> ...

Exit codes: 0 pass, 2 a verdict failed, 1 error.
"""

import logging
import sys
from pathlib import Path

import click

from src import __version__, config
from src.errors import ChronolapseError
from src.estimators import bounds
from src.runner.config_parser import load_config
from src.runner.scenarios import run_scenario
from src.units import get_units

EXIT_OK, EXIT_ERROR, EXIT_VERDICT = 0, 1, 2

config_option = click.option(
    "--config", "config_path", required=True, type=click.Path(dir_okay=False, path_type=Path), help="Scenario file."
)
units_option = click.option("--units", type=click.Choice(["cgs", "natural"]), default="cgs", show_default=True)


def _fail(exc: Exception):
    click.echo(f"❌ {type(exc).__name__}: {exc}", err=True)
    sys.exit(EXIT_ERROR)


@click.group()
@click.version_option(__version__, prog_name="chronolapse")
def cli():
    """Random microscopic time: averaged quantum and classical dynamics."""


@cli.command()
@config_option
@click.option("--out-dir", type=click.Path(file_okay=False, path_type=Path), default=None, help="Base for relative output paths.")
@click.option("--seed-override", type=click.IntRange(0, 2**64 - 1), default=None)
@click.option("--quiet", is_flag=True, help="Only log warnings and errors.")
def run(config_path, out_dir, seed_override, quiet):
    """Run one scenario and write CSV, summary and optional SVG."""
    logging.basicConfig(
        level=logging.WARNING if quiet else config.LOG_LEVEL,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg, text = load_config(config_path)
        summary, written = run_scenario(cfg, out_dir, text, seed_override)
    except ChronolapseError as exc:
        _fail(exc)
    except Exception as exc:  # noqa: BLE001
        logging.getLogger(__name__).exception("unexpected failure")
        _fail(exc)

    if not quiet:
        for path in written:
            click.echo(f"✅ Saved: {path}")
    if summary.passed:
        click.echo(f"✅ {summary.scenario}: pass")
        sys.exit(EXIT_OK)
    bad = ", ".join(name for name, ok in summary.verdicts.items() if not ok)
    click.echo(f"⚠️ {summary.scenario}: verdict failed ({bad})", err=True)
    sys.exit(EXIT_VERDICT)


@cli.command()
@config_option
def validate(config_path):
    """Check a scenario file without running it."""
    try:
        cfg, _ = load_config(config_path)
    except ChronolapseError as exc:
        _fail(exc)
    click.echo(f"✅ {config_path}: valid {cfg.scenario.kind} scenario")


@cli.group()
def estimate():
    """Order-of-magnitude calculators (CGS by default)."""


def _report(name: str, value: float, unit: str = ""):
    click.echo(f"{name} = {value:.6e}{' ' + unit if unit else ''}")


def _guarded(fn):
    try:
        return fn()
    except ChronolapseError as exc:
        _fail(exc)


@estimate.command("decoherence-time")
@click.option("--tau", type=float, required=True)
@click.option("--delta-e", type=float, required=True, help="Energy split.")
@units_option
def decoherence_time(tau, delta_e, units):
    _report("decoherence_time", _guarded(lambda: bounds.decoherence_time(tau, delta_e, get_units(units))))


@estimate.command("flow-stddev")
@click.option("--t", "t", type=float, required=True)
@click.option("--tau", type=float, required=True)
def flow_stddev(t, tau):
    _report("flow_stddev", _guarded(lambda: bounds.flow_stddev(t, tau)))


@estimate.command("beam-threshold")
@click.option("--l", "l", type=float, required=True, help="Flight length.")
@click.option("--tau0", type=float, required=True)
@click.option("--gamma", type=float, required=True, help="mc^2 / E")
@units_option
def beam_threshold(l, tau0, gamma, units):
    _report("beam_threshold", _guarded(lambda: bounds.beam_threshold(l, tau0, gamma, get_units(units))))


@estimate.command("oscillation-bounds")
@click.option("--t-os", type=float, default=None)
@click.option("--t-f", type=float, default=None)
@click.option("--preset", type=click.Choice(sorted(bounds.PRESETS)), default=None)
def oscillation_bounds(t_os, t_f, preset):
    if preset:
        click.echo(f"ℹ️ {bounds.PRESETS[preset].note}")
        result = _guarded(lambda: bounds.preset_bounds(preset))
    elif t_os is not None and t_f is not None:
        result = _guarded(lambda: bounds.oscillation_bounds(t_os, t_f))
    else:
        raise click.UsageError("give --t-os and --t-f, or --preset")
    _report("tau_weak", result.tau_weak, "s")
    _report("tau_strong", result.tau_strong, "s")


@estimate.command("energy-split")
@click.option("--delta-m", type=float, required=True)
@click.option("--energy", "E", type=float, required=True)
@click.option("--regime", type=click.Choice(["non_relativistic", "ultra_relativistic"]), default="non_relativistic")
@units_option
def energy_split(delta_m, E, regime, units):
    result = _guarded(lambda: bounds.oscillation_energy_split(delta_m, E, regime, get_units(units)))
    _report("energy_split", result.delta_E)
    _report("oscillation_half_period", result.t_os)


@estimate.command("lifetime-bound")
@click.option("--lifetime", type=float, required=True, help="Shortest observed lifetime.")
def lifetime_bound(lifetime):
    _report("tau_upper_bound", _guarded(lambda: bounds.lifetime_tau_bound(lifetime)), "s")


@estimate.command("aharonov-bohm")
@click.option("--tau", type=float, required=True)
@click.option("--potential-energy", type=float, required=True, help="eV for the applied potential V.")
@units_option
def aharonov_bohm(tau, potential_energy, units):
    _report("aharonov_bohm_time", _guarded(lambda: bounds.aharonov_bohm_time(tau, potential_energy, get_units(units))))


def main():
    cli()


if __name__ == "__main__":
    main()
