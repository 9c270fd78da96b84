"""
Screened ridge least-squares meta-learner.

Peers are screened by their leave-one-task-out error, the best `screen_size`
are kept, and outcomes are regressed on their reports with an unpenalized
intercept. The system is solved with a minimum-norm least-squares driver, so
rank-deficient fits at ridge=0 are still defined.
"""
from typing import Dict, FrozenSet

import numpy as np
from scipy import linalg

from womac.errors import ValidationError


def fit_ridge(X: np.ndarray, y: np.ndarray, ridge: float) -> np.ndarray:
    """
    Fit [intercept, coefficients] of y on X.

    Args:
        X: (rows, p) design without intercept
        y: (rows,) targets
        ridge: penalty on the non-intercept coefficients

    Returns:
        (p + 1,) coefficient vector, intercept first
    """
    rows, p = X.shape
    design = np.hstack([np.ones((rows, 1)), X])
    target = y
    if ridge > 0.0:
        penalty = np.hstack([np.zeros((p, 1)), np.sqrt(ridge) * np.eye(p)])
        design = np.vstack([design, penalty])
        target = np.concatenate([y, np.zeros(p)])
    beta, _, _, _ = linalg.lstsq(design, target, lapack_driver="gelsd")
    return beta


def predict(beta: np.ndarray, row: np.ndarray) -> float:
    return float(beta[0] + row @ beta[1:])


def validate_lsq(screen_size: int, ridge: float, n: int) -> None:
    if not (1 <= screen_size <= n - 1):
        raise ValidationError(
            f"screen_size must be in [1, n-1] = [1, {n - 1}], got {screen_size}", screen_size=screen_size
        )
    if not (ridge >= 0.0 and np.isfinite(ridge)):
        raise ValidationError(f"ridge must be a finite nonnegative number, got {ridge}", ridge=ridge)


def task_references(
    W: np.ndarray,
    y: np.ndarray,
    i: int,
    errors: np.ndarray,
    screen_size: int,
    ridge: float,
) -> np.ndarray:
    """
    References t_ij for every expert j on task i.

    Excluding j only changes the screened set when j is itself among the best
    `screen_size` peers, so at most screen_size + 1 distinct fits are needed.
    """
    m, n = W.shape
    train_rows = np.arange(m) != i
    X_train = W[train_rows]
    y_train = y[train_rows]

    order = [int(l) for l in np.argsort(errors, kind="stable")[: screen_size + 1]]
    top = set(order[:screen_size])

    fits: Dict[FrozenSet[int], float] = {}
    out = np.empty(n, dtype=np.float64)
    for j in range(n):
        if j in top:
            peers = tuple(sorted(l for l in order if l != j))
        else:
            peers = tuple(sorted(top))
        key = frozenset(peers)
        if key not in fits:
            cols = list(peers)
            beta = fit_ridge(X_train[:, cols], y_train, ridge)
            fits[key] = predict(beta, W[i, cols])
        out[j] = fits[key]
    return out
