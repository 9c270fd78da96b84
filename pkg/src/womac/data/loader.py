"""
Long-form CSV ingestion.

predictions CSV: ``task_id,expert_id,prediction``; outcomes CSV: ``task_id,outcome``.
A missing prediction is an absent row. Records are validated row by row and
reported with their 1-based file line (the header is line 1).
"""
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
import pandas as pd

from womac.core import OutcomeKind
from womac.errors import DataFormatError, DuplicateCellError, InputIOError, ValidationError
from womac.logger import logger as console

PREDICTION_COLUMNS = ["task_id", "expert_id", "prediction"]
OUTCOME_COLUMNS = ["task_id", "outcome"]


@dataclass(frozen=True, eq=False)
class RawDataset:
    """Validated long-form records in canonical order.

    Tasks are ordered by first appearance in the outcomes file, experts
    lexicographically by id; predictions are sorted by (task, expert).
    """

    predictions: pd.DataFrame
    outcomes: pd.DataFrame
    kind: OutcomeKind
    sources: Dict[str, Optional[str]] = field(default_factory=dict)

    @property
    def task_ids(self) -> Tuple[str, ...]:
        return tuple(self.outcomes["task_id"])

    @property
    def expert_ids(self) -> Tuple[str, ...]:
        return tuple(sorted(self.predictions["expert_id"].unique()))

    @property
    def n_records(self) -> int:
        return len(self.predictions)

    def wide(self) -> pd.DataFrame:
        """Task x expert table with NaN where a prediction is absent."""
        table = self.predictions.pivot(index="task_id", columns="expert_id", values="prediction")
        return table.reindex(index=list(self.task_ids), columns=list(self.expert_ids))


def _read_table(path: str, columns, what: str) -> pd.DataFrame:
    if not os.path.isfile(path):
        raise InputIOError(f"{what} file not found: {path}", path=path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise DataFormatError(f"{what} file is empty", path=path, line=1)
    except pd.errors.ParserError as e:
        raise DataFormatError(f"could not parse {what} file: {e}", path=path)
    except (UnicodeDecodeError, OSError) as e:
        raise InputIOError(f"could not read {what} file '{path}': {e}", path=path)

    header = [str(c).strip() for c in frame.columns]
    if header != list(columns):
        raise DataFormatError(
            f"{what} header must be '{','.join(columns)}', got '{','.join(header)}'", path=path, line=1
        )
    frame.columns = header
    for column in frame.columns:
        frame[column] = frame[column].str.strip()
    return frame


def _line(index: int) -> int:
    return int(index) + 2


def _check_ids(frame: pd.DataFrame, columns, path: str) -> None:
    for column in columns:
        empty = frame.index[frame[column] == ""]
        if len(empty):
            raise DataFormatError(f"empty {column}", path=path, line=_line(empty[0]))


def _to_numbers(frame: pd.DataFrame, column: str, path: str) -> pd.Series:
    # float() is correctly rounded; pandas' fast parser is not.
    values = []
    for index, raw in frame[column].items():
        try:
            value = float(raw)
        except ValueError:
            value = np.nan
        if not np.isfinite(value):
            raise DataFormatError(f"{column} '{raw}' is not a finite number", path=path, line=_line(index))
        values.append(value)
    return pd.Series(values, index=frame.index, dtype=np.float64)


def _infer_kind(outcomes: pd.Series) -> OutcomeKind:
    if outcomes.isin([0.0, 1.0]).all():
        return OutcomeKind.BINARY
    return OutcomeKind.CONTINUOUS


def load_csv(
    predictions_path: str, outcomes_path: str, kind: Optional[Union[str, OutcomeKind]] = None
) -> RawDataset:
    """
    Load and validate a long-form predictions file and its outcomes file.

    Args:
        predictions_path: CSV with header task_id,expert_id,prediction
        outcomes_path: CSV with header task_id,outcome
        kind: Outcome kind; inferred as binary when every outcome is 0 or 1

    Returns:
        RawDataset in canonical order

    Raises:
        InputIOError: a file is missing or unreadable
        DataFormatError: parse failure, unknown task or out-of-range value (with line number)
        DuplicateCellError: a (task, expert) pair appears twice
    """
    outcomes = _read_table(outcomes_path, OUTCOME_COLUMNS, "outcomes")
    _check_ids(outcomes, ["task_id"], outcomes_path)
    outcomes["outcome"] = _to_numbers(outcomes, "outcome", outcomes_path)
    repeated = outcomes.index[outcomes["task_id"].duplicated()]
    if len(repeated):
        task = outcomes.at[repeated[0], "task_id"]
        raise DataFormatError(f"task '{task}' has more than one outcome", path=outcomes_path, line=_line(repeated[0]))
    if outcomes.empty:
        raise ValidationError("outcomes file has no tasks", path=outcomes_path)

    kind = _infer_kind(outcomes["outcome"]) if kind is None else OutcomeKind(kind)
    if kind is OutcomeKind.BINARY:
        bad = outcomes.index[~outcomes["outcome"].isin([0.0, 1.0])]
        if len(bad):
            raise DataFormatError("binary outcomes must be 0 or 1", path=outcomes_path, line=_line(bad[0]))

    predictions = _read_table(predictions_path, PREDICTION_COLUMNS, "predictions")
    _check_ids(predictions, ["task_id", "expert_id"], predictions_path)
    predictions["prediction"] = _to_numbers(predictions, "prediction", predictions_path)

    unknown = predictions.index[~predictions["task_id"].isin(outcomes["task_id"])]
    if len(unknown):
        task = predictions.at[unknown[0], "task_id"]
        raise DataFormatError(f"prediction for unknown task '{task}'", path=predictions_path, line=_line(unknown[0]))

    duplicated = predictions.index[predictions.duplicated(["task_id", "expert_id"])]
    if len(duplicated):
        row = predictions.loc[duplicated[0]]
        raise DuplicateCellError(
            f"duplicate prediction for task '{row['task_id']}' and expert '{row['expert_id']}'",
            path=predictions_path,
            line=_line(duplicated[0]),
        )

    if kind is OutcomeKind.BINARY:
        values = predictions["prediction"]
        out_of_range = predictions.index[(values < 0.0) | (values > 1.0)]
        if len(out_of_range):
            raw = predictions.at[out_of_range[0], "prediction"]
            raise DataFormatError(
                f"prediction {raw} outside [0, 1] for binary outcomes", path=predictions_path, line=_line(out_of_range[0])
            )

    task_rank = {task: position for position, task in enumerate(outcomes["task_id"])}
    predictions = predictions.assign(_task_rank=predictions["task_id"].map(task_rank))
    predictions = predictions.sort_values(["_task_rank", "expert_id"], kind="stable")
    predictions = predictions.drop(columns="_task_rank").reset_index(drop=True)
    outcomes = outcomes.reset_index(drop=True)

    console.debug(
        f"Loaded {len(predictions)} predictions over {len(outcomes)} tasks from {predictions_path}"
    )
    return RawDataset(
        predictions=predictions,
        outcomes=outcomes,
        kind=kind,
        sources={"predictions": predictions_path, "outcomes": outcomes_path},
    )


def _format_number(value: float, kind: OutcomeKind, is_outcome: bool) -> str:
    if is_outcome and kind is OutcomeKind.BINARY:
        return str(int(value))
    return repr(float(value))


def write_csv(data: Any, predictions_path: str, outcomes_path: str) -> None:
    """
    Write a RawDataset or Dataset back to the long-form schema in canonical order.

    Imputed cells of a Dataset are written as absent rows, so a write/load
    cycle reproduces the records that were actually observed.
    """
    if isinstance(data, RawDataset):
        predictions = data.predictions
        outcomes = data.outcomes
        kind = data.kind
    else:
        predictions, outcomes = data.to_records()
        kind = data.y.kind

    predictions = predictions.assign(
        prediction=[_format_number(v, kind, False) for v in predictions["prediction"]]
    )
    outcomes = outcomes.assign(outcome=[_format_number(v, kind, True) for v in outcomes["outcome"]])
    try:
        predictions[PREDICTION_COLUMNS].to_csv(predictions_path, index=False, lineterminator="\n")
        outcomes[OUTCOME_COLUMNS].to_csv(outcomes_path, index=False, lineterminator="\n")
    except OSError as e:
        raise InputIOError(f"could not write dataset: {e}")
