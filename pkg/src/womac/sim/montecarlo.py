"""
Monte Carlo estimation of win probabilities.

Replicate r draws its world from make_rng(seed, *stream, r), so a replicate's
winner does not depend on evaluation order or thread count; winners land in a
slot per replicate and are tallied with integer counts.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import norm

from womac.constants import CI_LEVEL
from womac.core import OutcomeKind, OutcomeVector, PredictionMatrix, column_sse, select_winner
from womac.errors import ValidationError
from womac.logger import logger as console
from womac.mechanisms.config import WomacConfig
from womac.mechanisms.womac import womac_score_only
from womac.sim.rng import make_rng
from womac.sim.world import DeviationStrategy, ReferenceNoiseModel, WorldConfig, draw_world

MECHANISM_KINDS = ("standard", "oracular", "womac")


@dataclass(frozen=True)
class MechanismSpec:
    kind: str = "oracular"
    womac: Optional[WomacConfig] = None

    def __post_init__(self) -> None:
        if self.kind not in MECHANISM_KINDS:
            raise ValidationError(f"unknown mechanism '{self.kind}', expected one of {MECHANISM_KINDS}")
        if self.kind == "womac" and self.womac is None:
            object.__setattr__(self, "womac", WomacConfig())

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"kind": self.kind}
        if self.womac is not None:
            out["womac"] = self.womac.to_dict()
        return out

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MechanismSpec":
        womac = WomacConfig.from_dict(data["womac"]) if data.get("womac") else None
        return cls(data.get("kind", "oracular"), womac)


def z_value(level: float) -> float:
    if not (0.0 < level < 1.0):
        raise ValidationError(f"confidence level must be in (0, 1), got {level}")
    return float(norm.ppf(0.5 + level / 2.0))


@dataclass(frozen=True)
class WinProbEstimate:
    counts: Tuple[int, ...]
    replicates: int
    oracle_best_agreement: int = 0
    level: float = CI_LEVEL

    @property
    def per_expert_freq(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=np.float64) / self.replicates

    def ci_halfwidth_at(self, level: float) -> np.ndarray:
        p = self.per_expert_freq
        return z_value(level) * np.sqrt(p * (1.0 - p) / self.replicates)

    @property
    def ci_halfwidth(self) -> np.ndarray:
        return self.ci_halfwidth_at(self.level)

    def interval(self, expert: int, level: Optional[float] = None) -> Tuple[float, float]:
        p = float(self.per_expert_freq[expert])
        h = float(self.ci_halfwidth_at(self.level if level is None else level)[expert])
        return p - h, p + h

    def to_dict(self) -> Dict[str, Any]:
        return {
            "replicates": self.replicates,
            "counts": list(self.counts),
            "per_expert_freq": [float(p) for p in self.per_expert_freq],
            "ci_level": self.level,
            "ci_halfwidth": [float(h) for h in self.ci_halfwidth],
            "winner_is_oracle_best": self.oracle_best_agreement / self.replicates,
        }


def intervals_disjoint(a: Tuple[float, float], b: Tuple[float, float]) -> bool:
    return a[1] < b[0] or b[1] < a[0]


def _validate_combo(mechanism: MechanismSpec, ref_noise: ReferenceNoiseModel) -> None:
    if mechanism.kind != "oracular" and not ref_noise.is_exact:
        raise ValidationError(
            f"reference noise only applies to the oracular mechanism, not '{mechanism.kind}'"
        )


class _Replicator:
    """Runs single replicates of one simulation setting."""

    def __init__(
        self,
        cfg: WorldConfig,
        mechanism: MechanismSpec,
        ref_noise: ReferenceNoiseModel,
        strategies: Sequence[DeviationStrategy],
        seed: int,
        stream: Tuple[int, ...],
    ) -> None:
        self.cfg = cfg
        self.mechanism = mechanism
        self.ref_noise = ref_noise
        self.strategies = list(strategies)
        self.seed = seed
        self.stream = stream
        self.center = cfg.prior_center()
        self.kind = OutcomeKind.BINARY if cfg.is_binary else OutcomeKind.CONTINUOUS

    def reports(self, X: np.ndarray) -> np.ndarray:
        W = X.copy()
        for j, strategy in enumerate(self.strategies):
            if strategy.kind != "truthful":
                W[:, j] = strategy.apply(X[:, j], self.cfg.expert_sds[j], self.center)
        return W

    def run(self, r: int) -> Tuple[int, bool]:
        rng = make_rng(self.seed, *self.stream, r)
        theta, X, y = draw_world(self.cfg, rng)
        W = self.reports(X)

        if self.mechanism.kind == "standard":
            scores = column_sse(W, np.broadcast_to(y[:, np.newaxis], W.shape))
        elif self.mechanism.kind == "oracular":
            ref = self.ref_noise.apply(theta, rng)
            scores = column_sse(W, np.broadcast_to(ref[:, np.newaxis], W.shape))
        else:
            scores = womac_score_only(PredictionMatrix(W), OutcomeVector(y, self.kind), self.mechanism.womac)

        winner, _ = select_winner(scores)
        oracle_best, _ = select_winner(column_sse(W, np.broadcast_to(theta[:, np.newaxis], W.shape)))
        return winner, winner == oracle_best


def estimate_win_prob(
    cfg: WorldConfig,
    mechanism: MechanismSpec,
    ref_noise: Optional[ReferenceNoiseModel] = None,
    strategies: Optional[Sequence[DeviationStrategy]] = None,
    replicates: int = 1000,
    seed: int = 0,
    stream: Tuple[int, ...] = (),
    threads: int = 1,
    level: float = CI_LEVEL,
) -> WinProbEstimate:
    """
    Estimate each expert's probability of winning.

    Args:
        cfg: world to sample
        mechanism: how the winner is chosen
        ref_noise: reference noise for the oracular mechanism (exact by default)
        strategies: one per expert, truthful by default
        replicates: number of independent worlds
        seed: run seed
        stream: extra counters prefixed to the replicate index
        threads: worker threads (results do not depend on it)
        level: confidence level for the reported half-widths

    Returns:
        WinProbEstimate with integer win counts
    """
    ref_noise = ref_noise or ReferenceNoiseModel.exact()
    _validate_combo(mechanism, ref_noise)
    if int(replicates) != replicates or replicates < 1:
        raise ValidationError(f"replicates must be a positive integer, got {replicates}")
    strategies = list(strategies) if strategies is not None else [DeviationStrategy.truthful()] * cfg.n
    if len(strategies) != cfg.n:
        raise ValidationError(f"need one strategy per expert ({cfg.n}), got {len(strategies)}")

    replicator = _Replicator(cfg, mechanism, ref_noise, strategies, seed, tuple(stream))
    winners = np.empty(replicates, dtype=np.int64)
    agrees = np.zeros(replicates, dtype=bool)

    def run_chunk(indices: range) -> None:
        for r in indices:
            winners[r], agrees[r] = replicator.run(r)

    threads = max(1, int(threads))
    if threads == 1:
        run_chunk(range(replicates))
    else:
        size = -(-replicates // threads)
        chunks = [range(s, min(s + size, replicates)) for s in range(0, replicates, size)]
        with ThreadPoolExecutor(max_workers=threads) as executor:
            futures = [executor.submit(run_chunk, chunk) for chunk in chunks]
            exceptions: List[BaseException] = []
            for future in futures:
                try:
                    future.result()
                except Exception as e:
                    exceptions.append(e)
                    console.error(f"Simulate: Worker failed: {e}")
        if exceptions:
            raise exceptions[0]

    counts = np.bincount(winners, minlength=cfg.n)
    return WinProbEstimate(tuple(int(c) for c in counts), int(replicates), int(agrees.sum()), level)


@dataclass(frozen=True)
class EfficiencyRow:
    m: int
    arm: str
    noise_sd: Optional[float]
    best_freq: float
    ci_halfwidth: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "arm": self.arm,
            "noise_sd": self.noise_sd,
            "best_freq": self.best_freq,
            "ci_halfwidth": self.ci_halfwidth,
        }


@dataclass(frozen=True)
class EfficiencyCurve:
    rows: Tuple[EfficiencyRow, ...]
    best_expert: int
    tasks_needed: Dict[int, Optional[int]] = field(default_factory=dict)

    def arm(self, name: str) -> List[EfficiencyRow]:
        return [row for row in self.rows if row.arm == name]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "best_expert": self.best_expert,
            "rows": [row.to_dict() for row in self.rows],
            "tasks_needed": {str(m): v for m, v in self.tasks_needed.items()},
        }


def efficiency_curve(
    cfg: WorldConfig,
    ref_noise_a: ReferenceNoiseModel,
    ref_noise_b: ReferenceNoiseModel,
    m_grid: Sequence[int],
    replicates: int = 1000,
    seed: int = 0,
    threads: int = 1,
    level: float = CI_LEVEL,
) -> EfficiencyCurve:
    """
    Best-expert identification probability against task count for two references.

    Both arms at the same m share worlds (common random numbers), so identical
    reference models give identical curves. `tasks_needed[m_b]` is the smallest
    grid m at which arm A matches arm B's frequency at m_b.
    """
    grid = sorted({int(m) for m in m_grid})
    if not grid:
        raise ValidationError("m_grid must not be empty")

    best = cfg.best_expert
    mechanism = MechanismSpec("oracular")
    rows: List[EfficiencyRow] = []
    for g, m in enumerate(grid):
        world = cfg.with_tasks(m)
        for arm, noise in (("A", ref_noise_a), ("B", ref_noise_b)):
            est = estimate_win_prob(
                world, mechanism, noise, None, replicates, seed, stream=(g,), threads=threads, level=level
            )
            rows.append(EfficiencyRow(
                m, arm, noise.sd, float(est.per_expert_freq[best]), float(est.ci_halfwidth[best])
            ))
            console.debug(f"efficiency m={m} arm={arm}: {est.per_expert_freq[best]:.4f}")

    a_rows = [row for row in rows if row.arm == "A"]
    tasks_needed: Dict[int, Optional[int]] = {}
    for row in rows:
        if row.arm != "B":
            continue
        matches = [a.m for a in a_rows if a.best_freq >= row.best_freq]
        tasks_needed[row.m] = min(matches) if matches else None
    return EfficiencyCurve(tuple(rows), best, tasks_needed)
