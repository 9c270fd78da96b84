"""
Synthetic prediction worlds.

A world draws a ground truth per task, one conditionally independent Gaussian
report per (task, expert) and one outcome per task. Worlds with Bernoulli
outcomes live on the probability scale: the ground truth returned is
sigmoid(theta) and reports are sigmoid(theta + tau * eps).
"""
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import expit

from womac.constants import OUTFLANK_OFFSET_SDS
from womac.core import OutcomeKind, OutcomeVector, PredictionMatrix
from womac.errors import DimensionError, ValidationError
from womac.mechanisms.config import OracleVector
from womac.sim.rng import SeedLike, make_rng


def _positive(value: float, name: str) -> float:
    value = float(value)
    if not (value > 0.0 and np.isfinite(value)):
        raise ValidationError(f"{name} must be a positive finite number, got {value}")
    return value


@dataclass(frozen=True)
class FixedTheta:
    values: Tuple[float, ...]

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in np.atleast_1d(self.values))
        if not all(np.isfinite(values)):
            raise ValidationError("fixed theta must be finite")
        object.__setattr__(self, "values", values)

    @property
    def center(self) -> np.ndarray:
        return np.asarray(self.values)


@dataclass(frozen=True)
class GaussianPrior:
    mean: float = 0.0
    sd: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "sd", _positive(self.sd, "prior sd"))


@dataclass(frozen=True)
class GaussianOutcome:
    sd: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "sd", _positive(self.sd, "outcome sd"))


@dataclass(frozen=True)
class BernoulliLogistic:
    pass


ThetaPrior = Union[FixedTheta, GaussianPrior]
OutcomeModel = Union[GaussianOutcome, BernoulliLogistic]


@dataclass(frozen=True)
class WorldConfig:
    m: int
    expert_sds: Tuple[float, ...]
    theta_prior: ThetaPrior = field(default_factory=GaussianPrior)
    outcome_model: OutcomeModel = field(default_factory=GaussianOutcome)

    def __post_init__(self) -> None:
        if int(self.m) != self.m or self.m < 1:
            raise ValidationError(f"world needs m >= 1 tasks, got {self.m}")
        sds = tuple(_positive(s, "expert sd") for s in self.expert_sds)
        if len(sds) < 2:
            raise ValidationError(f"world needs at least two experts, got {len(sds)}")
        if isinstance(self.theta_prior, FixedTheta) and len(self.theta_prior.values) != self.m:
            raise DimensionError(
                f"fixed theta has length {len(self.theta_prior.values)} but the world has {self.m} tasks"
            )
        if not isinstance(self.theta_prior, (FixedTheta, GaussianPrior)):
            raise ValidationError(f"unknown theta prior {self.theta_prior!r}")
        if not isinstance(self.outcome_model, (GaussianOutcome, BernoulliLogistic)):
            raise ValidationError(f"unknown outcome model {self.outcome_model!r}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "expert_sds", sds)

    @property
    def n(self) -> int:
        return len(self.expert_sds)

    @property
    def is_binary(self) -> bool:
        return isinstance(self.outcome_model, BernoulliLogistic)

    @property
    def best_expert(self) -> int:
        """Lowest-noise expert, lowest index among ties."""
        return int(np.argmin(self.expert_sds))

    def prior_center(self) -> np.ndarray:
        """Where truthful reports cluster before any signal, on the report scale."""
        if isinstance(self.theta_prior, FixedTheta):
            center = self.theta_prior.center
        else:
            center = np.full(self.m, self.theta_prior.mean)
        return expit(center) if self.is_binary else center

    def with_tasks(self, m: int) -> "WorldConfig":
        if isinstance(self.theta_prior, FixedTheta):
            raise ValidationError("a world with fixed theta cannot change its task count")
        return replace(self, m=m)

    def to_dict(self) -> Dict[str, Any]:
        if isinstance(self.theta_prior, FixedTheta):
            prior: Dict[str, Any] = {"kind": "fixed", "values": list(self.theta_prior.values)}
        else:
            prior = {"kind": "gaussian", "mean": self.theta_prior.mean, "sd": self.theta_prior.sd}
        if isinstance(self.outcome_model, GaussianOutcome):
            outcome: Dict[str, Any] = {"kind": "gaussian", "sd": self.outcome_model.sd}
        else:
            outcome = {"kind": "bernoulli"}
        return {"m": self.m, "expert_sds": list(self.expert_sds), "theta_prior": prior, "outcome_model": outcome}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "WorldConfig":
        prior = dict(data.get("theta_prior", {"kind": "gaussian"}))
        prior_kind = prior.pop("kind", "gaussian")
        if prior_kind == "fixed":
            theta_prior: ThetaPrior = FixedTheta(tuple(prior["values"]))
        elif prior_kind == "gaussian":
            theta_prior = GaussianPrior(**prior)
        else:
            raise ValidationError(f"unknown theta prior kind '{prior_kind}'")
        outcome = dict(data.get("outcome_model", {"kind": "gaussian"}))
        outcome_kind = outcome.pop("kind", "gaussian")
        if outcome_kind == "gaussian":
            outcome_model: OutcomeModel = GaussianOutcome(**outcome)
        elif outcome_kind == "bernoulli":
            outcome_model = BernoulliLogistic()
        else:
            raise ValidationError(f"unknown outcome model kind '{outcome_kind}'")
        return cls(int(data["m"]), tuple(data["expert_sds"]), theta_prior, outcome_model)


@dataclass(frozen=True)
class ReferenceNoiseModel:
    """Noise added to the ground truth to form the reference; sd=None means exact."""

    sd: Optional[float] = None

    def __post_init__(self) -> None:
        if self.sd is not None:
            object.__setattr__(self, "sd", _positive(self.sd, "reference noise sd"))

    @property
    def is_exact(self) -> bool:
        return self.sd is None

    @classmethod
    def exact(cls) -> "ReferenceNoiseModel":
        return cls(None)

    @classmethod
    def gaussian(cls, sd: float) -> "ReferenceNoiseModel":
        return cls(sd)

    def apply(self, theta: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        if self.sd is None:
            return theta
        return theta + self.sd * rng.standard_normal(theta.shape[0])

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "exact"} if self.sd is None else {"kind": "gaussian", "sd": self.sd}


@dataclass(frozen=True)
class DeviationStrategy:
    """
    How an expert turns their signal into a report.

    kind "truthful": w = x
    kind "outflank": w = anchor + offset * direction, anchor is the signal x
        ("signal") or the prior centre ("prior"); offset defaults to twice the
        expert's own noise sd
    kind "shift": w = x + shift
    """

    kind: str = "truthful"
    offset: Optional[float] = None
    direction: int = 1
    anchor: str = "signal"
    shift: Tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("truthful", "outflank", "shift"):
            raise ValidationError(f"unknown strategy kind '{self.kind}'")
        if self.direction not in (1, -1):
            raise ValidationError(f"outflank direction must be +1 or -1, got {self.direction}")
        if self.anchor not in ("signal", "prior"):
            raise ValidationError(f"outflank anchor must be 'signal' or 'prior', got '{self.anchor}'")
        if self.offset is not None and not np.isfinite(self.offset):
            raise ValidationError("outflank offset must be finite")
        shift = tuple(float(s) for s in self.shift)
        if not all(np.isfinite(shift)):
            raise ValidationError("shift must be finite")
        object.__setattr__(self, "shift", shift)

    @classmethod
    def truthful(cls) -> "DeviationStrategy":
        return cls()

    @classmethod
    def outflank(cls, offset: Optional[float] = None, direction: int = 1, anchor: str = "signal") -> "DeviationStrategy":
        return cls("outflank", offset=offset, direction=direction, anchor=anchor)

    @classmethod
    def shifted(cls, shift: Sequence[float]) -> "DeviationStrategy":
        return cls("shift", shift=tuple(shift))

    def apply(self, x: np.ndarray, expert_sd: float, prior_center: np.ndarray) -> np.ndarray:
        if self.kind == "truthful":
            return x
        if self.kind == "shift":
            if len(self.shift) != x.shape[0]:
                raise DimensionError(f"shift has length {len(self.shift)} but there are {x.shape[0]} tasks")
            return x + np.asarray(self.shift)
        offset = OUTFLANK_OFFSET_SDS * expert_sd if self.offset is None else self.offset
        base = x if self.anchor == "signal" else prior_center
        return base + offset * self.direction

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == "truthful":
            return {"kind": "truthful"}
        if self.kind == "shift":
            return {"kind": "shift", "shift": list(self.shift)}
        return {"kind": "outflank", "offset": self.offset, "direction": self.direction, "anchor": self.anchor}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DeviationStrategy":
        data = dict(data)
        if "shift" in data:
            data["shift"] = tuple(data["shift"])
        return cls(**data)


def draw_world(cfg: WorldConfig, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Raw arrays (theta on the report scale, X, y) for one world.

    Draw order is fixed: theta, then the (m, n) report noise, then outcomes.
    """
    m, n = cfg.m, cfg.n
    if isinstance(cfg.theta_prior, FixedTheta):
        latent = cfg.theta_prior.center.astype(np.float64)
    else:
        latent = cfg.theta_prior.mean + cfg.theta_prior.sd * rng.standard_normal(m)

    noise = rng.standard_normal((m, n)) * np.asarray(cfg.expert_sds)[np.newaxis, :]
    reports = latent[:, np.newaxis] + noise

    if isinstance(cfg.outcome_model, BernoulliLogistic):
        theta = expit(latent)
        y = (rng.random(m) < theta).astype(np.float64)
        return theta, expit(reports), y

    y = latent + cfg.outcome_model.sd * rng.standard_normal(m)
    return latent, reports, y


def sample_world(cfg: WorldConfig, seed: SeedLike) -> Tuple[OracleVector, PredictionMatrix, OutcomeVector]:
    """
    Sample one world deterministically from `seed`.

    Returns:
        (theta, X, y)
    """
    theta, X, y = draw_world(cfg, make_rng(seed))
    kind = OutcomeKind.BINARY if cfg.is_binary else OutcomeKind.CONTINUOUS
    return OracleVector(theta), PredictionMatrix(X), OutcomeVector(y, kind)
