"""
WOMAC: score each expert against a jackknifed aggregate of peer reports.

For every cell (i, j) the meta-learner is fitted on all tasks except i and all
experts except j, then applied to the peers' reports on task i. Tasks are
independent, so they may be evaluated by a thread pool; each task writes its own
row of the reference matrix.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np

from womac.core import (
    CompetitionResult,
    OutcomeVector,
    PredictionMatrix,
    ReferenceMatrix,
    column_sse,
    result_from_scores,
)
from womac.errors import DimensionError, ValidationError
from womac.logger import logger as console
from womac.mechanisms.config import LeastSquares, TopKAverage, WomacConfig
from womac.meta import least_squares
from womac.meta.weights import leave_one_task_out_sse, selection_mask


def _validate(W: PredictionMatrix, y: OutcomeVector, cfg: WomacConfig) -> None:
    if W.m != len(y):
        raise DimensionError(f"{W.m} tasks of predictions but {len(y)} outcomes")
    if W.m < 2:
        raise ValidationError(f"WOMAC needs at least two tasks, got {W.m}")
    learner = cfg.meta_learner
    if isinstance(learner, TopKAverage) and W.n < 3:
        raise ValidationError(f"top-k WOMAC needs at least three experts, got {W.n}")
    if isinstance(learner, LeastSquares):
        least_squares.validate_lsq(learner.screen_size, learner.ridge, W.n)


class _ReferenceBuilder:
    """Fills the reference matrix task by task."""

    def __init__(self, W: np.ndarray, y: np.ndarray, cfg: WomacConfig, keep_weights: bool) -> None:
        self.W = W
        self.y = y
        self.learner = cfg.meta_learner
        self.errors = leave_one_task_out_sse(W, y)
        m, n = W.shape
        self.reference = np.empty((m, n), dtype=np.float64)
        self.weights: Optional[np.ndarray] = None
        if keep_weights and isinstance(self.learner, TopKAverage):
            self.weights = np.zeros((m, n, n), dtype=np.float64)

    def fill_task(self, i: int) -> None:
        if isinstance(self.learner, TopKAverage):
            row = self.W[i]
            mask = selection_mask(self.errors[i], self.learner.k)
            counts = mask.sum(axis=1)
            # Average deviations from the first selected peer so that equal
            # reports average to exactly that report.
            anchor = row[np.argmax(mask, axis=1)]
            deviations = np.where(mask, row[np.newaxis, :] - anchor[:, np.newaxis], 0.0)
            self.reference[i] = anchor + deviations.sum(axis=1) / counts
            if self.weights is not None:
                self.weights[i] = mask / counts[:, np.newaxis]
        else:
            self.reference[i] = least_squares.task_references(
                self.W, self.y, i, self.errors[i], self.learner.screen_size, self.learner.ridge
            )

    def build(self, threads: int) -> None:
        m = self.W.shape[0]
        if threads <= 1:
            for i in range(m):
                self.fill_task(i)
            return

        with ThreadPoolExecutor(max_workers=threads) as executor:
            futures = [executor.submit(self.fill_task, i) for i in range(m)]
            exceptions: List[BaseException] = []
            for future in futures:
                try:
                    future.result()
                except Exception as e:
                    exceptions.append(e)
                    console.error(f"WOMAC: Worker failed: {e}")
        if exceptions:
            raise exceptions[0]


def womac_references(
    W: PredictionMatrix,
    y: OutcomeVector,
    cfg: WomacConfig,
    threads: int = 1,
    return_weights: bool = False,
) -> Tuple[ReferenceMatrix, Optional[np.ndarray]]:
    """
    Compute the jackknifed reference matrix.

    Args:
        W: expert reports
        y: realized outcomes
        cfg: meta-learner configuration
        threads: worker threads (results do not depend on it)
        return_weights: also return the (m, n, n) top-k weight tensor

    Returns:
        (ReferenceMatrix, weight tensor or None)
    """
    _validate(W, y, cfg)
    builder = _ReferenceBuilder(W.values, y.values, cfg, return_weights)
    builder.build(max(1, int(threads)))
    return ReferenceMatrix(builder.reference), builder.weights


def run_womac(
    W: PredictionMatrix,
    y: OutcomeVector,
    cfg: WomacConfig,
    threads: int = 1,
    return_weights: bool = False,
) -> Tuple[CompetitionResult, ReferenceMatrix]:
    """
    Run the WOMAC competition.

    Returns:
        (CompetitionResult, ReferenceMatrix); the weight tensor, when requested,
        is in result.extras["weights"]
    """
    T, weights = womac_references(W, y, cfg, threads=threads, return_weights=return_weights)
    extras = {"weights": weights} if weights is not None else {}
    return result_from_scores(column_sse(W.values, T.values), cfg.tag, extras), T


def womac_score_only(W: PredictionMatrix, y: OutcomeVector, cfg: WomacConfig, threads: int = 1) -> np.ndarray:
    """Per-expert WOMAC scores without winner selection."""
    T, _ = womac_references(W, y, cfg, threads=threads)
    return column_sse(W.values, T.values)
