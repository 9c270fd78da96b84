"""
Configuration types for the competition mechanisms.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Union

import numpy as np

from womac.constants import DEFAULT_K, DEFAULT_RIDGE, DEFAULT_SCREEN_SIZE
from womac.core import MechanismTag, as_frozen_array
from womac.errors import ValidationError
from womac.meta.weights import validate_k


@dataclass(frozen=True)
class TopKAverage:
    k: float = DEFAULT_K

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", validate_k(self.k))


@dataclass(frozen=True)
class LeastSquares:
    screen_size: int = DEFAULT_SCREEN_SIZE
    ridge: float = DEFAULT_RIDGE

    def __post_init__(self) -> None:
        if int(self.screen_size) != self.screen_size or self.screen_size < 1:
            raise ValidationError(f"screen_size must be a positive integer, got {self.screen_size}")
        ridge = float(self.ridge)
        if not (ridge >= 0.0 and np.isfinite(ridge)):
            raise ValidationError(f"ridge must be a finite nonnegative number, got {self.ridge}")
        object.__setattr__(self, "screen_size", int(self.screen_size))
        object.__setattr__(self, "ridge", ridge)


MetaLearner = Union[TopKAverage, LeastSquares]


@dataclass(frozen=True)
class WomacConfig:
    meta_learner: MetaLearner = field(default_factory=TopKAverage)
    missing_policy: str = "error"

    def __post_init__(self) -> None:
        if not isinstance(self.meta_learner, (TopKAverage, LeastSquares)):
            raise ValidationError(f"unknown meta learner {self.meta_learner!r}")
        if self.missing_policy != "error":
            raise ValidationError(f"unsupported missing_policy '{self.missing_policy}'")

    @property
    def tag(self) -> MechanismTag:
        if isinstance(self.meta_learner, TopKAverage):
            return MechanismTag.WOMAC_TOPK
        return MechanismTag.WOMAC_LSQ

    @classmethod
    def topk(cls, k: float = DEFAULT_K) -> "WomacConfig":
        return cls(TopKAverage(k))

    @classmethod
    def least_squares(cls, screen_size: int = DEFAULT_SCREEN_SIZE, ridge: float = DEFAULT_RIDGE) -> "WomacConfig":
        return cls(LeastSquares(screen_size, ridge))

    def to_dict(self) -> Dict[str, Any]:
        if isinstance(self.meta_learner, TopKAverage):
            learner = {"kind": "topk", "k": self.meta_learner.k}
        else:
            learner = {
                "kind": "lsq",
                "screen_size": self.meta_learner.screen_size,
                "ridge": self.meta_learner.ridge,
            }
        return {"meta_learner": learner, "missing_policy": self.missing_policy}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "WomacConfig":
        learner = dict(data.get("meta_learner", {}))
        kind = learner.pop("kind", "topk")
        if kind == "topk":
            meta: MetaLearner = TopKAverage(**learner)
        elif kind == "lsq":
            meta = LeastSquares(**learner)
        else:
            raise ValidationError(f"unknown meta learner kind '{kind}'")
        return cls(meta, data.get("missing_policy", "error"))


@dataclass(frozen=True)
class OracleVector:
    """Ground-truth value per task."""

    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", as_frozen_array(self.values, 1, "OracleVector"))

    def __len__(self) -> int:
        return self.values.shape[0]
