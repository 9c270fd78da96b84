"""
Turning raw long-form records into complete prediction matrices.
"""
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np
import pandas as pd

from womac.constants import HFC_MIN_EXPERT_COMPLETION, HFC_MIN_TASK_RESPONSES
from womac.core import OutcomeVector, PredictionMatrix
from womac.data.loader import RawDataset
from womac.errors import DimensionError, ValidationError
from womac.logger import logger as console


@dataclass(frozen=True, eq=False)
class Dataset:
    """A complete matrix ready for scoring, plus which cells were filled in."""

    W: PredictionMatrix
    y: OutcomeVector
    imputed_mask: np.ndarray
    fill_value: Optional[float] = None

    def __post_init__(self) -> None:
        mask = np.array(self.imputed_mask, dtype=bool)
        if mask.shape != self.W.values.shape:
            raise DimensionError(f"imputed_mask shape {mask.shape} does not match W {self.W.values.shape}")
        if len(self.y) != self.W.m:
            raise DimensionError(f"{len(self.y)} outcomes for {self.W.m} tasks")
        mask.setflags(write=False)
        object.__setattr__(self, "imputed_mask", mask)

    @property
    def n_imputed(self) -> int:
        return int(self.imputed_mask.sum())

    def to_records(self) -> Tuple[pd.DataFrame, pd.DataFrame]:
        """Observed (non-imputed) cells as long-form frames in canonical order."""
        tasks, experts = np.nonzero(~self.imputed_mask)
        predictions = pd.DataFrame({
            "task_id": [self.W.task_ids[i] for i in tasks],
            "expert_id": [self.W.expert_ids[j] for j in experts],
            "prediction": self.W.values[tasks, experts],
        })
        outcomes = pd.DataFrame({"task_id": list(self.W.task_ids), "outcome": self.y.values})
        return predictions, outcomes


def _finalize(raw: RawDataset, table: pd.DataFrame, fill_value: Optional[float]) -> Dataset:
    missing = table.isna().to_numpy()
    values = table.to_numpy(dtype=np.float64, na_value=np.nan)
    if fill_value is not None:
        values = np.where(missing, fill_value, values)
    y = raw.outcomes.set_index("task_id").loc[list(table.index), "outcome"].to_numpy(dtype=np.float64)
    return Dataset(
        W=PredictionMatrix(values, tuple(table.index), tuple(table.columns)),
        y=OutcomeVector(y, raw.kind),
        imputed_mask=missing if fill_value is not None else np.zeros_like(missing),
        fill_value=fill_value,
    )


def filter_complete(raw: RawDataset) -> Dataset:
    """Keep only experts with a prediction on every task; nothing is imputed."""
    table = raw.wide()
    complete = table.columns[table.notna().all(axis=0)]
    if len(complete) < 2:
        raise ValidationError(
            f"only {len(complete)} experts answered every task; at least 2 are required",
            n_tasks=len(table.index),
            n_complete=len(complete),
        )
    dropped = len(table.columns) - len(complete)
    if dropped:
        console.info(f"Dropped {dropped} experts with incomplete predictions")
    return _finalize(raw, table[complete], None)


def filter_hfc(
    raw: RawDataset,
    min_task_responses: int = HFC_MIN_TASK_RESPONSES,
    min_expert_completion: float = HFC_MIN_EXPERT_COMPLETION,
) -> Dataset:
    """
    Threshold tasks, then experts, then impute what is still missing.

    Tasks with fewer than ``min_task_responses`` predictions are dropped first.
    Experts who then answered less than ``min_expert_completion`` of the
    remaining tasks are dropped. Every remaining gap is filled with the mean
    realized outcome over the surviving tasks.
    """
    if min_task_responses < 0:
        raise ValidationError(f"min_task_responses must be non-negative, got {min_task_responses}")
    if not 0.0 <= min_expert_completion <= 1.0:
        raise ValidationError(f"min_expert_completion must lie in [0, 1], got {min_expert_completion}")

    table = raw.wide()
    responses = table.notna().sum(axis=1)
    table = table.loc[responses >= min_task_responses]
    if table.empty:
        raise ValidationError(f"no task has at least {min_task_responses} responses")

    completion = table.notna().sum(axis=0) / len(table.index)
    table = table.loc[:, completion >= min_expert_completion]
    if len(table.columns) < 2:
        raise ValidationError(
            f"{len(table.columns)} experts answered at least {min_expert_completion:.0%} of the remaining tasks; "
            "at least 2 are required"
        )

    y = raw.outcomes.set_index("task_id").loc[list(table.index), "outcome"].to_numpy(dtype=np.float64)
    fill_value = float(np.mean(y))
    dataset = _finalize(raw, table, fill_value)
    console.info(
        f"HFC filter kept {dataset.W.m} tasks and {dataset.W.n} experts; imputed {dataset.n_imputed} cells with {fill_value:.6g}"
    )
    return dataset


def summarize(data: Any) -> Dict[str, Any]:
    """Provenance counts for a RawDataset or Dataset."""
    if isinstance(data, RawDataset):
        m, n = len(data.task_ids), len(data.expert_ids)
        return {
            "n_tasks": m,
            "n_experts": n,
            "n_records": data.n_records,
            "missing_cells": m * n - data.n_records,
            "kind": data.kind.value,
            "sources": dict(data.sources),
        }
    return {
        "n_tasks": data.W.m,
        "n_experts": data.W.n,
        "n_imputed": data.n_imputed,
        "fill_value": data.fill_value,
        "kind": data.y.kind.value,
        "outcome_mean": float(np.mean(data.y.values)),
    }
