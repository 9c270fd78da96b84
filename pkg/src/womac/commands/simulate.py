import os
from typing import Any, Dict, List, Optional, Tuple

import click
from rich import box
from rich.table import Table

from womac.constants import DEFAULT_OUTPUT_DIR, DEFAULT_REPLICATES, DEFAULT_SEED, SIMULATION_CSV, SIMULATION_JSON
from womac.commands.common import (
    check_known,
    config_option,
    guarded,
    load_params,
    out_option,
    pick,
    seed_option,
    threads_option,
    write_config,
)
from womac.errors import ValidationError
from womac.logger import logger as console
from womac.sim.presets import PRESETS, resolve_overrides, run_preset
from womac.utils.config import RunConfig, parse_overrides, resolve_threads
from womac.utils.output import ensure_dir, write_csv, write_json


def _show_rows(title: str, rows: List[Dict[str, Any]]) -> None:
    if not rows:
        return
    table = Table(title=title, box=box.SIMPLE)
    columns = list(rows[0])
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*(f"{v:.4f}" if isinstance(v, float) else str(v) for v in (row[c] for c in columns)))
    console.show(table)


def resolve_simulate_params(
    preset: Optional[str], replicates: Optional[int], overrides: Dict[str, Any], config: Dict[str, Any]
) -> Tuple[str, int, Dict[str, Any]]:
    check_known(config, ("preset", "replicates", "params"), "simulate")
    name = pick(preset, config, "preset", None)
    if name is None:
        raise ValidationError(f"a preset is required, one of {sorted(PRESETS)}")
    if name not in PRESETS:
        raise ValidationError(f"unknown preset '{name}', expected one of {sorted(PRESETS)}")
    replicates = int(pick(replicates, config, "replicates", DEFAULT_REPLICATES))
    if replicates < 1:
        raise ValidationError(f"replicates must be at least 1, got {replicates}")
    merged = dict(config.get("params", {}))
    merged.update(overrides)
    return name, replicates, resolve_overrides(name, merged)


def execute_simulate(
    preset: Optional[str],
    replicates: Optional[int],
    seed: Optional[int],
    set_pairs: Tuple[str, ...],
    config_path: Optional[str],
    out_dir: Optional[str],
    threads: Optional[int],
) -> Dict[str, Any]:
    """
    Run a named simulation and write simulation.json and simulation.csv.

    Returns:
        The simulation.json payload
    """
    config, config_seed = load_params(config_path, "simulate")
    name, replicates, params = resolve_simulate_params(preset, replicates, parse_overrides(set_pairs), config)
    seed = seed if seed is not None else (config_seed if config_seed is not None else DEFAULT_SEED)
    threads = resolve_threads(threads)
    out_dir = out_dir or DEFAULT_OUTPUT_DIR

    console.info(f"Simulating [bold]{name}[/bold] with {replicates} replicates (seed {seed})")
    with console.status(f"Running {name}..."):
        payload, rows = run_preset(name, replicates, seed, threads, params)

    run_config = RunConfig(
        "simulate", seed=seed, params={"preset": name, "replicates": replicates, "params": params}
    )
    payload = {**payload, "replicates": replicates, "config": run_config.to_dict()}

    ensure_dir(out_dir)
    write_json(os.path.join(out_dir, SIMULATION_JSON), payload)
    write_csv(os.path.join(out_dir, SIMULATION_CSV), rows, list(rows[0]) if rows else [])
    write_config(out_dir, run_config)

    _show_rows(name, rows)
    console.print(f"[green]Simulation complete[/green] (results in {out_dir})")
    return payload


@click.command()
@click.option("--preset", type=click.Choice(sorted(PRESETS)), default=None, help="Named simulation setup.")
@click.option("--replicates", type=int, default=None, help=f"Monte Carlo replicates per arm (default {DEFAULT_REPLICATES}).")
@seed_option
@click.option("--set", "set_pairs", multiple=True, metavar="KEY=VALUE", help="Override a preset parameter.")
@out_option
@threads_option
@config_option
@guarded("simulate")
def simulate(
    preset: Optional[str],
    replicates: Optional[int],
    seed: Optional[int],
    set_pairs: Tuple[str, ...],
    out_dir: Optional[str],
    threads: Optional[int],
    config_path: Optional[str],
) -> None:
    """Estimate win probabilities for a named simulation setup.

    Presets: fig1-outflank, thm2-precision, efficiency-curve.
    Use --set to override parameters, e.g. --set n=20 --set offsets=[2,4].
    """
    execute_simulate(preset, replicates, seed, set_pairs, config_path, out_dir, threads)
