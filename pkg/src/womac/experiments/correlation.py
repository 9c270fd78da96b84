"""Pearson and Spearman correlation with explicit handling of constant inputs."""
from typing import Optional, Sequence

import numpy as np
from scipy.stats import rankdata

from womac.errors import DimensionError, ValidationError


def _pair(x: Sequence[float], y: Sequence[float]):
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.ndim != 1 or ya.ndim != 1 or xa.shape != ya.shape:
        raise DimensionError(f"correlation needs equal-length vectors, got {xa.shape} and {ya.shape}")
    if xa.shape[0] < 2:
        raise ValidationError("correlation needs at least two points")
    if not (np.all(np.isfinite(xa)) and np.all(np.isfinite(ya))):
        raise ValidationError("correlation inputs must be finite")
    return xa, ya


def _pearson(xa: np.ndarray, ya: np.ndarray) -> Optional[float]:
    if np.all(xa == xa[0]) or np.all(ya == ya[0]):
        return None
    dx = xa - xa.mean()
    dy = ya - ya.mean()
    # Rescale so the squared sums neither underflow nor overflow.
    dx = dx / np.max(np.abs(dx))
    dy = dy / np.max(np.abs(dy))
    r = float(dx @ dy) / (np.sqrt(float(dx @ dx)) * np.sqrt(float(dy @ dy)))
    return float(min(1.0, max(-1.0, r)))


def pearson(x: Sequence[float], y: Sequence[float]) -> Optional[float]:
    """
    Sample Pearson correlation.

    Returns:
        Correlation in [-1, 1], or None when either input is constant
    """
    return _pearson(*_pair(x, y))


def spearman(x: Sequence[float], y: Sequence[float]) -> Optional[float]:
    """Pearson correlation of mid-ranks (ties share their average rank)."""
    xa, ya = _pair(x, y)
    return _pearson(rankdata(xa, method="average"), rankdata(ya, method="average"))
