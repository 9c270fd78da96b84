"""
In-sample tuning of the top-k fraction.

The objective pools every expert: for each task, average the top-k experts
ranked on the other tasks and score that aggregate against the held-out outcome.
"""
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Optional, Tuple

import numpy as np

from womac.constants import DEFAULT_K_GRID
from womac.core import OutcomeVector, PredictionMatrix
from womac.errors import DimensionError, ValidationError
from womac.meta.weights import leave_one_task_out_sse, pooled_selection, validate_k


@dataclass(frozen=True)
class KTuneReport:
    k_grid: Tuple[float, ...]
    objective: Tuple[float, ...]
    best_k: float

    def to_dict(self) -> Dict[str, Any]:
        return {"k_grid": list(self.k_grid), "objective": list(self.objective), "best_k": self.best_k}


def normalize_grid(k_grid: Optional[Iterable[float]]) -> Tuple[float, ...]:
    """Validated, de-duplicated, ascending grid."""
    grid = tuple(sorted({validate_k(k) for k in (DEFAULT_K_GRID if k_grid is None else k_grid)}))
    if not grid:
        raise ValidationError("k grid must not be empty")
    return grid


def pooled_aggregates(W: np.ndarray, y: np.ndarray, k_grid: Tuple[float, ...]) -> np.ndarray:
    """
    Leave-one-task-out top-k aggregate for every task and k.

    Returns:
        (len(k_grid), m) matrix of aggregates
    """
    errors = leave_one_task_out_sse(W, y)
    m = W.shape[0]
    out = np.empty((len(k_grid), m), dtype=np.float64)
    for i in range(m):
        for g, k in enumerate(k_grid):
            sel = pooled_selection(errors[i], k)
            out[g, i] = W[i, sel].mean()
    return out


def tune_k(W: PredictionMatrix, y: OutcomeVector, k_grid: Optional[Iterable[float]] = None) -> KTuneReport:
    """
    Pick the k minimizing the pooled leave-one-task-out squared error.

    Ties go to the smallest k.
    """
    if W.m != len(y):
        raise DimensionError(f"{W.m} tasks of predictions but {len(y)} outcomes")
    if W.m < 2:
        raise ValidationError("tuning k needs at least two tasks")
    grid = normalize_grid(k_grid)

    aggregates = pooled_aggregates(W.values, y.values, grid)
    objective = []
    for g in range(len(grid)):
        diff = y.values - aggregates[g]
        total = 0.0
        for d in diff:
            total += float(d * d)
        objective.append(total)

    best = min(range(len(grid)), key=lambda g: (objective[g], grid[g]))
    return KTuneReport(grid, tuple(objective), grid[best])
