"""
Core data types and squared-error scoring shared by every competition mechanism.

Scores are sums of squared errors accumulated task by task in index order,
so every code path that scores a column produces bit-identical results.
"""
import hashlib
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from womac.errors import DimensionError, ValidationError


class OutcomeKind(str, Enum):
    BINARY = "binary"
    CONTINUOUS = "continuous"


class MechanismTag(str, Enum):
    STANDARD = "standard"
    ORACULAR = "oracular"
    WOMAC_TOPK = "womac-topk"
    WOMAC_LSQ = "womac-lsq"


def as_frozen_array(values: Any, ndim: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != ndim:
        raise DimensionError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}", shape=list(arr.shape))
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


def _check_unique(ids: Sequence[str], name: str) -> None:
    if len(set(ids)) != len(ids):
        raise ValidationError(f"{name} must be unique")


@dataclass(frozen=True)
class PredictionMatrix:
    """Expert reports: rows are tasks, columns are experts."""

    values: np.ndarray
    task_ids: Tuple[str, ...] = ()
    expert_ids: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        values = as_frozen_array(self.values, 2, "PredictionMatrix")
        m, n = values.shape
        if m < 1:
            raise ValidationError("PredictionMatrix needs at least one task")
        if n < 2:
            raise ValidationError(f"PredictionMatrix needs at least two experts, got {n}")
        task_ids = tuple(str(t) for t in self.task_ids) or tuple(f"t{i}" for i in range(m))
        expert_ids = tuple(str(e) for e in self.expert_ids) or tuple(f"e{j}" for j in range(n))
        if len(task_ids) != m or len(expert_ids) != n:
            raise DimensionError(
                f"ids do not match matrix shape {values.shape}: {len(task_ids)} task ids, {len(expert_ids)} expert ids"
            )
        _check_unique(task_ids, "task_ids")
        _check_unique(expert_ids, "expert_ids")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "task_ids", task_ids)
        object.__setattr__(self, "expert_ids", expert_ids)

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]

    def take_tasks(self, rows: Sequence[int]) -> "PredictionMatrix":
        rows = list(rows)
        return PredictionMatrix(
            self.values[rows, :], tuple(self.task_ids[i] for i in rows), self.expert_ids
        )

    def take_experts(self, cols: Sequence[int]) -> "PredictionMatrix":
        cols = list(cols)
        return PredictionMatrix(
            self.values[:, cols], self.task_ids, tuple(self.expert_ids[j] for j in cols)
        )


@dataclass(frozen=True)
class OutcomeVector:
    """Realized outcomes, one per task."""

    values: np.ndarray
    kind: OutcomeKind = OutcomeKind.CONTINUOUS

    def __post_init__(self) -> None:
        values = as_frozen_array(self.values, 1, "OutcomeVector")
        kind = OutcomeKind(self.kind)
        if kind is OutcomeKind.BINARY and not np.all((values == 0.0) | (values == 1.0)):
            raise ValidationError("binary outcomes must be 0 or 1")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "kind", kind)

    def __len__(self) -> int:
        return self.values.shape[0]

    def take(self, rows: Sequence[int]) -> "OutcomeVector":
        return OutcomeVector(self.values[list(rows)], self.kind)


@dataclass(frozen=True)
class ReferenceMatrix:
    """Per-expert per-task reference solutions t_ij."""

    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", as_frozen_array(self.values, 2, "ReferenceMatrix"))

    @classmethod
    def shared(cls, reference: np.ndarray, n: int) -> "ReferenceMatrix":
        """Broadcast one reference vector to every expert column."""
        reference = np.asarray(reference, dtype=np.float64)
        return cls(np.repeat(reference[:, np.newaxis], n, axis=1))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    def is_shared(self) -> bool:
        return bool(np.all(self.values == self.values[:, :1]))

    def checksum(self) -> str:
        """SHA-256 of the little-endian float64 bytes, used to fingerprint runs."""
        data = np.ascontiguousarray(self.values, dtype="<f8").tobytes()
        return hashlib.sha256(data).hexdigest()


@dataclass(frozen=True)
class CompetitionResult:
    scores: np.ndarray
    winner: int
    tied_winners: Tuple[int, ...]
    mechanism_tag: MechanismTag
    extras: Dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return self.scores.shape[0]

    def ranking(self) -> List[int]:
        """Expert indices from best to worst; equal scores keep index order."""
        return [int(j) for j in np.argsort(self.scores, kind="stable")]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mechanism": self.mechanism_tag.value,
            "winner": self.winner,
            "tied_winners": list(self.tied_winners),
            "scores": [float(s) for s in self.scores],
        }


def column_sse(pred: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """
    Column-wise sum of squared errors, accumulated over tasks in index order.

    Args:
        pred: (m, n) predictions
        ref: (m, n) references

    Returns:
        Length-n vector of sums
    """
    diff = pred - ref
    sq = diff * diff
    acc = np.zeros(sq.shape[1], dtype=np.float64)
    for row in sq:
        acc += row
    return acc


def sum_squared_error(pred: Sequence[float], ref: Sequence[float]) -> float:
    """Sum over tasks of (pred_i - ref_i)^2."""
    pred_arr = np.asarray(pred, dtype=np.float64)
    ref_arr = np.asarray(ref, dtype=np.float64)
    if pred_arr.ndim != 1 or ref_arr.ndim != 1 or pred_arr.shape != ref_arr.shape:
        raise DimensionError(
            f"sum_squared_error needs equal-length vectors, got {pred_arr.shape} and {ref_arr.shape}"
        )
    if not (np.all(np.isfinite(pred_arr)) and np.all(np.isfinite(ref_arr))):
        raise ValidationError("sum_squared_error inputs must be finite")
    return float(column_sse(pred_arr[:, np.newaxis], ref_arr[:, np.newaxis])[0])


def select_winner(scores: Sequence[float]) -> Tuple[int, List[int]]:
    """
    Lowest index attaining the minimal score, plus every index tied with it.

    Ties are exact float equality.
    """
    arr = np.asarray(scores, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValidationError("select_winner needs a non-empty score vector")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("scores must be finite")
    best = arr.min()
    tied = [int(j) for j in np.flatnonzero(arr == best)]
    return tied[0], tied


def result_from_scores(
    scores: np.ndarray, tag: MechanismTag, extras: Optional[Dict[str, Any]] = None
) -> CompetitionResult:
    winner, tied = select_winner(scores)
    scores = np.array(scores, dtype=np.float64)
    scores.setflags(write=False)
    return CompetitionResult(scores, winner, tuple(tied), MechanismTag(tag), extras or {})


def score_all(
    W: PredictionMatrix, T: ReferenceMatrix, tag: MechanismTag = MechanismTag.STANDARD
) -> CompetitionResult:
    """
    Score every expert against its reference column and pick the winner.

    Raises:
        DimensionError: W and T differ in shape
    """
    if W.values.shape != T.values.shape:
        raise DimensionError(
            f"prediction matrix {W.values.shape} and reference matrix {T.values.shape} differ in shape"
        )
    return result_from_scores(column_sse(W.values, T.values), tag)
