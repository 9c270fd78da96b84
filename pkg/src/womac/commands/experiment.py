from typing import Any, Dict, List, Optional, Tuple

import click
from rich import box
from rich.table import Table

from womac.constants import (
    DEFAULT_OUTPUT_DIR,
    DEFAULT_SEED,
    HFC_MIN_EXPERT_COMPLETION,
    HFC_MIN_TASK_RESPONSES,
)
from womac.commands.common import (
    check_known,
    config_option,
    guarded,
    load_params,
    out_option,
    seed_option,
    threads_option,
    write_config,
)
from womac.commands.score import FILTERS, load_dataset
from womac.data import summarize
from womac.errors import ValidationError
from womac.experiments import CorrelationReport, ExperimentConfig, KPolicy, run_correlation_experiment
from womac.experiments.report import write_reports
from womac.logger import logger as console
from womac.meta.weights import validate_k
from womac.utils.config import RunConfig, resolve_threads
from womac.utils.output import ensure_dir

EXPERIMENT_KEYS = (
    "m_train_grid",
    "n_subsamples",
    "m_test",
    "k_policy",
    "k_sweep",
    "expert_subsample",
    "filter",
    "min_task_responses",
    "min_expert_completion",
)


def resolve_experiment_params(config: Dict[str, Any]) -> Dict[str, Any]:
    """Expand a config mapping into fully resolved experiment parameters."""
    check_known(config, EXPERIMENT_KEYS, "experiment")
    base = ExperimentConfig.from_dict({k: v for k, v in config.items() if k != "expert_subsample"})

    pools = config.get("expert_subsample")
    if pools is None or isinstance(pools, int):
        pools = [pools]
    elif not isinstance(pools, list) or not pools:
        raise ValidationError("expert_subsample must be an integer, a non-empty list of integers, or null")

    k_sweep = config.get("k_sweep")
    if k_sweep is not None:
        if not isinstance(k_sweep, list) or not k_sweep:
            raise ValidationError("k_sweep must be a non-empty list of cutoffs")
        k_sweep = [validate_k(float(k)) for k in k_sweep]

    params = {
        "m_train_grid": list(base.m_train_grid),
        "n_subsamples": base.n_subsamples,
        "m_test": base.m_test,
        "k_policy": base.k_policy.to_dict(),
        "k_sweep": k_sweep,
        "expert_subsample": pools if len(pools) > 1 else pools[0],
        "filter": config.get("filter", "complete"),
    }
    if params["filter"] not in FILTERS:
        raise ValidationError(f"unknown filter '{params['filter']}', expected one of {list(FILTERS)}")
    if params["filter"] == "hfc":
        params["min_task_responses"] = int(config.get("min_task_responses", HFC_MIN_TASK_RESPONSES))
        params["min_expert_completion"] = float(config.get("min_expert_completion", HFC_MIN_EXPERT_COMPLETION))
    return params


def experiment_arms(params: Dict[str, Any], seed: int) -> List[Tuple[str, ExperimentConfig]]:
    """
    One labelled ExperimentConfig per (k, pool size) combination.

    Without a k sweep the configured k policy is used and labelled by it.
    """
    pools = params["expert_subsample"]
    pools = pools if isinstance(pools, list) else [pools]
    if params["k_sweep"]:
        policies = [(f"k={k:g}", KPolicy.fixed(k)) for k in params["k_sweep"]]
    else:
        policy = KPolicy.from_dict(params["k_policy"])
        policies = [("tuned" if policy.kind == "tuned" else f"k={policy.k:g}", policy)]

    arms = []
    for label, policy in policies:
        for pool in pools:
            name = label if pool is None or len(pools) == 1 else f"{label},n={pool}"
            arms.append((name, ExperimentConfig(
                m_train_grid=tuple(params["m_train_grid"]),
                n_subsamples=params["n_subsamples"],
                m_test=params["m_test"],
                k_policy=policy,
                expert_subsample=pool,
                seed=seed,
            )))
    return arms


def _show_gaps(label: str, report: CorrelationReport) -> None:
    table = Table(title=f"WOMAC minus MSE correlation ({label})", box=box.SIMPLE)
    table.add_column("m_train", justify="right")
    table.add_column("pearson gap", justify="right")
    table.add_column("spearman gap", justify="right")
    for result in report.results:
        cells = []
        for correlation in ("pearson", "spearman"):
            stats = result.stats(correlation, "gap")
            if stats.mean is None:
                cells.append("n/a")
            elif stats.se is None:
                cells.append(f"{stats.mean:+.4f}")
            else:
                cells.append(f"{stats.mean:+.4f} ± {stats.se:.4f}")
        table.add_row(str(result.m_train), *cells)
    console.show(table)


def execute_experiment(
    predictions: str,
    outcomes: str,
    config_path: Optional[str],
    seed: Optional[int],
    out_dir: Optional[str],
    threads: Optional[int],
) -> Dict[str, CorrelationReport]:
    """
    Run the train/test correlation protocol for every configured arm and write
    report.json, report.csv and optimal_k.csv.
    """
    config, config_seed = load_params(config_path, "experiment")
    params = resolve_experiment_params(config)
    seed = seed if seed is not None else (config_seed if config_seed is not None else DEFAULT_SEED)
    threads = resolve_threads(threads)
    out_dir = out_dir or DEFAULT_OUTPUT_DIR

    dataset = load_dataset(predictions, outcomes, params)
    arms = experiment_arms(params, seed)
    console.info(f"Experiment on {dataset.W.m} tasks x {dataset.W.n} experts, {len(arms)} arm(s), seed {seed}")

    reports: Dict[str, CorrelationReport] = {}
    for label, cfg in arms:
        console.info(f"Arm [bold]{label}[/bold]")
        reports[label] = run_correlation_experiment(dataset.W, dataset.y, cfg, threads=threads)

    run_config = RunConfig("experiment", seed=seed, params=params)
    ensure_dir(out_dir)
    write_reports(reports, out_dir, extra={"data": summarize(dataset), "config": run_config.to_dict()})
    write_config(out_dir, run_config)

    for label, report in reports.items():
        _show_gaps(label, report)
    console.print(f"[green]Experiment complete[/green] (results in {out_dir})")
    return reports


@click.command()
@click.argument("predictions")
@click.argument("outcomes")
@config_option
@seed_option
@out_option
@threads_option
@guarded("experiment")
def experiment(
    predictions: str,
    outcomes: str,
    config_path: Optional[str],
    seed: Optional[int],
    out_dir: Optional[str],
    threads: Optional[int],
) -> None:
    """Correlate in-sample scores with out-of-sample accuracy over train/test splits.

    PREDICTIONS: CSV with task_id,expert_id,prediction.
    OUTCOMES: CSV with task_id,outcome.
    """
    execute_experiment(predictions, outcomes, config_path, seed, out_dir, threads)
