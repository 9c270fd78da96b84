import os
from typing import Any, Dict, List, Optional, Tuple

import click
from rich import box
from rich.table import Table

from womac.constants import (
    DEFAULT_K,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_RIDGE,
    DEFAULT_SCREEN_SIZE,
    HFC_MIN_EXPERT_COMPLETION,
    HFC_MIN_TASK_RESPONSES,
    LEADERBOARD_CSV,
    RESULT_JSON,
)
from womac.commands.common import (
    check_known,
    config_option,
    guarded,
    load_params,
    out_option,
    pick,
    threads_option,
    write_config,
)
from womac.core import CompetitionResult, ReferenceMatrix
from womac.data import Dataset, filter_complete, filter_hfc, load_csv, summarize
from womac.errors import ValidationError
from womac.logger import logger as console
from womac.mechanisms import WomacConfig, run_standard, run_womac
from womac.utils.config import RunConfig, resolve_threads
from womac.utils.output import ensure_dir, write_csv, write_json

MECHANISMS = ("standard", "womac-topk", "womac-lsq")
FILTERS = ("complete", "hfc")
SCORE_KEYS = ("mechanism", "k", "screen_size", "ridge", "filter", "min_task_responses", "min_expert_completion")
LEADERBOARD_COLUMNS = ["rank", "expert_id", "score", "mean_score"]


def load_dataset(predictions: str, outcomes: str, params: Dict[str, Any]) -> Dataset:
    """Load the CSV pair and apply the configured filter."""
    raw = load_csv(predictions, outcomes)
    if params["filter"] == "complete":
        return filter_complete(raw)
    if params["filter"] == "hfc":
        return filter_hfc(raw, params["min_task_responses"], params["min_expert_completion"])
    raise ValidationError(f"unknown filter '{params['filter']}', expected one of {list(FILTERS)}")


def resolve_score_params(flags: Dict[str, Any], config: Dict[str, Any]) -> Dict[str, Any]:
    check_known(config, SCORE_KEYS, "score")
    defaults = {
        "mechanism": "womac-topk",
        "k": DEFAULT_K,
        "screen_size": DEFAULT_SCREEN_SIZE,
        "ridge": DEFAULT_RIDGE,
        "filter": "complete",
        "min_task_responses": HFC_MIN_TASK_RESPONSES,
        "min_expert_completion": HFC_MIN_EXPERT_COMPLETION,
    }
    params = {key: pick(flags.get(key), config, key, default) for key, default in defaults.items()}
    if params["mechanism"] not in MECHANISMS:
        raise ValidationError(f"unknown mechanism '{params['mechanism']}', expected one of {list(MECHANISMS)}")
    # Echo only the parameters the chosen mechanism actually uses.
    if params["mechanism"] != "womac-topk":
        params.pop("k")
    if params["mechanism"] != "womac-lsq":
        params.pop("screen_size")
        params.pop("ridge")
    if params["filter"] != "hfc":
        params.pop("min_task_responses")
        params.pop("min_expert_completion")
    return params


def score_dataset(dataset: Dataset, params: Dict[str, Any], threads: int) -> Tuple[CompetitionResult, ReferenceMatrix]:
    mechanism = params["mechanism"]
    if mechanism == "standard":
        result = run_standard(dataset.W, dataset.y)
        return result, ReferenceMatrix.shared(dataset.y.values, dataset.W.n)
    if mechanism == "womac-topk":
        cfg = WomacConfig.topk(float(params["k"]))
    else:
        cfg = WomacConfig.least_squares(int(params["screen_size"]), float(params["ridge"]))
    return run_womac(dataset.W, dataset.y, cfg, threads=threads)


def leaderboard_rows(dataset: Dataset, result: CompetitionResult) -> List[Dict[str, Any]]:
    rows = []
    for rank, j in enumerate(result.ranking(), start=1):
        score = float(result.scores[j])
        rows.append({
            "rank": rank,
            "expert_id": dataset.W.expert_ids[j],
            "score": score,
            "mean_score": score / dataset.W.m,
        })
    return rows


def _show_leaderboard(rows: List[Dict[str, Any]], limit: int = 10) -> None:
    table = Table(title="Leaderboard", box=box.SIMPLE)
    table.add_column("Rank", justify="right")
    table.add_column("Expert")
    table.add_column("Score", justify="right")
    table.add_column("Mean", justify="right")
    for row in rows[:limit]:
        table.add_row(str(row["rank"]), row["expert_id"], f"{row['score']:.6g}", f"{row['mean_score']:.6g}")
    console.show(table)


def execute_score(
    predictions: str,
    outcomes: str,
    flags: Dict[str, Any],
    config_path: Optional[str],
    out_dir: Optional[str],
    threads: Optional[int],
) -> Dict[str, Any]:
    """
    Score a competition end to end and write its leaderboard files.

    Returns:
        The result.json payload
    """
    config, _ = load_params(config_path, "score")
    params = resolve_score_params(flags, config)
    threads = resolve_threads(threads)
    out_dir = out_dir or DEFAULT_OUTPUT_DIR

    dataset = load_dataset(predictions, outcomes, params)
    console.info(f"Scoring {dataset.W.n} experts on {dataset.W.m} tasks with [bold]{params['mechanism']}[/bold]")
    result, reference = score_dataset(dataset, params, threads)
    rows = leaderboard_rows(dataset, result)

    run_config = RunConfig("score", params=params)
    payload = {
        "mechanism": result.mechanism_tag.value,
        "winner": dataset.W.expert_ids[result.winner],
        "ties": [dataset.W.expert_ids[j] for j in result.tied_winners],
        "n_tasks": dataset.W.m,
        "n_experts": dataset.W.n,
        "data": summarize(dataset),
        "reference_checksum": reference.checksum(),
        "config": run_config.to_dict(),
    }

    ensure_dir(out_dir)
    write_csv(os.path.join(out_dir, LEADERBOARD_CSV), rows, LEADERBOARD_COLUMNS)
    write_json(os.path.join(out_dir, RESULT_JSON), payload)
    write_config(out_dir, run_config)

    _show_leaderboard(rows)
    if len(result.tied_winners) > 1:
        console.warning(f"{len(result.tied_winners)} experts tie for first place; lowest index wins")
    console.print(f"[green]Winner: {payload['winner']}[/green] (results in {out_dir})")
    return payload


@click.command()
@click.argument("predictions")
@click.argument("outcomes")
@click.option("--mechanism", type=click.Choice(MECHANISMS), default=None, help="Scoring mechanism (default womac-topk).")
@click.option("--k", type=float, default=None, help=f"Top-k cutoff fraction in (0, 1] (default {DEFAULT_K}).")
@click.option("--screen-size", type=int, default=None, help=f"Least-squares screened peers (default {DEFAULT_SCREEN_SIZE}).")
@click.option("--ridge", type=float, default=None, help="Least-squares ridge penalty (default 0).")
@click.option("--filter", "filter_", type=click.Choice(FILTERS), default=None, help="Missing-data rule (default complete).")
@click.option("--min-task-responses", type=int, default=None, help="HFC task response threshold.")
@click.option("--min-expert-completion", type=float, default=None, help="HFC expert completion threshold.")
@out_option
@threads_option
@config_option
@guarded("score")
def score(
    predictions: str,
    outcomes: str,
    mechanism: Optional[str],
    k: Optional[float],
    screen_size: Optional[int],
    ridge: Optional[float],
    filter_: Optional[str],
    min_task_responses: Optional[int],
    min_expert_completion: Optional[float],
    out_dir: Optional[str],
    threads: Optional[int],
    config_path: Optional[str],
) -> None:
    """Score a competition and write leaderboard.csv and result.json.

    PREDICTIONS: CSV with task_id,expert_id,prediction.
    OUTCOMES: CSV with task_id,outcome.
    """
    flags = {
        "mechanism": mechanism,
        "k": k,
        "screen_size": screen_size,
        "ridge": ridge,
        "filter": filter_,
        "min_task_responses": min_task_responses,
        "min_expert_completion": min_expert_completion,
    }
    execute_score(predictions, outcomes, flags, config_path, out_dir, threads)
