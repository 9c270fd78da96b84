"""
Top-k peer weights.

A peer is selected when the fraction of pool members with a strictly smaller
error is below k; every selected peer gets the same weight, so the weights
always form a simple average over the selected set.
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from womac.errors import ValidationError


@dataclass(frozen=True)
class WeightAssignment:
    selected_peers: Tuple[int, ...]
    weight_per_peer: float
    excluded_expert: Optional[int] = None

    def as_vector(self, n: int) -> np.ndarray:
        """Dense probability vector over n experts (zero at the excluded expert)."""
        out = np.zeros(n, dtype=np.float64)
        out[list(self.selected_peers)] = self.weight_per_peer
        return out


def validate_k(k: float) -> float:
    k = float(k)
    if not (0.0 < k <= 1.0):
        raise ValidationError(f"k must be in (0, 1], got {k}", k=k)
    return k


def leave_one_task_out_sse(W: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    E[i, l] = sum over tasks r != i of (y_r - W[r, l])^2.

    Each entry is accumulated over r in increasing order, matching a
    plain per-cell loop bit for bit.
    """
    m, n = W.shape
    diff = y[:, np.newaxis] - W
    sq = diff * diff
    out = np.zeros((m, n), dtype=np.float64)
    for r in range(m):
        out[:r] += sq[r]
        out[r + 1:] += sq[r]
    return out


def selection_mask(errors: np.ndarray, k: float) -> np.ndarray:
    """
    Jackknifed top-k selection for every excluded expert at once.

    Args:
        errors: length-n peer errors for one task
        k: selection fraction

    Returns:
        (n, n) boolean matrix; row j marks the peers selected when expert j is excluded
    """
    n = errors.shape[0]
    n_peers = n - 1
    # less[a, b]: expert a strictly beats expert b
    less = errors[:, np.newaxis] < errors[np.newaxis, :]
    count_all = less.sum(axis=0)
    counts = count_all[np.newaxis, :] - less
    mask = (counts / n_peers) < k
    np.fill_diagonal(mask, False)

    empty = ~mask.any(axis=1)
    if empty.any():
        # Fallback: best-ranked peer, lowest index among ties.
        order = np.argsort(errors, kind="stable")
        for j in np.flatnonzero(empty):
            best = order[0] if order[0] != j else order[1]
            mask[j, best] = True
    return mask


def pooled_selection(errors: np.ndarray, k: float) -> np.ndarray:
    """Top-k selection over the whole pool with nobody excluded."""
    n = errors.shape[0]
    counts = (errors[:, np.newaxis] < errors[np.newaxis, :]).sum(axis=0)
    mask = (counts / n) < k
    if not mask.any():
        mask[int(np.argsort(errors, kind="stable")[0])] = True
    return mask


def topk_weights(peer_mses: Sequence[float], k: float, excluded: Optional[int] = None) -> WeightAssignment:
    """
    Select the top-k peers and weight them uniformly.

    Args:
        peer_mses: errors against outcomes, indexed by expert
        k: fraction in (0, 1]
        excluded: expert whose entry is dropped from the pool (None keeps every entry)

    Returns:
        WeightAssignment over the original indices
    """
    k = validate_k(k)
    errors = np.asarray(peer_mses, dtype=np.float64)
    if errors.ndim != 1:
        raise ValidationError("peer_mses must be a vector")
    pool = [l for l in range(errors.shape[0]) if l != excluded]
    if not pool:
        raise ValidationError("topk_weights needs at least one peer")
    if excluded is not None and not (0 <= excluded < errors.shape[0]):
        raise ValidationError(f"excluded index {excluded} out of range")
    if not np.all(np.isfinite(errors[pool])):
        raise ValidationError("peer errors must be finite")

    peer_errors = errors[pool]
    selected_local = np.flatnonzero(pooled_selection(peer_errors, k))
    selected = tuple(pool[int(s)] for s in selected_local)
    return WeightAssignment(selected, 1.0 / len(selected), excluded)
