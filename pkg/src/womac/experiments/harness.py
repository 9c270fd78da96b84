"""
Out-of-sample correlation experiment.

For each training size, sub-sample train/test task splits, score experts in
sample with WOMAC and with the standard MSE, score them out of sample with the
standard MSE, and correlate in-sample scores with out-of-sample scores across
experts. Splits run independently and fill one slot each; aggregation walks the
slots in split order.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from womac.constants import DEFAULT_K_GRID, DEFAULT_M_TEST, DEFAULT_M_TRAIN_GRID, DEFAULT_N_SUBSAMPLES, DEFAULT_SEED
from womac.core import OutcomeVector, PredictionMatrix, column_sse
from womac.errors import DimensionError, ValidationError
from womac.experiments.correlation import pearson, spearman
from womac.experiments.splits import Split, check_feasible, draw_split
from womac.logger import logger as console
from womac.mechanisms.config import WomacConfig
from womac.mechanisms.womac import womac_score_only
from womac.meta.tuning import normalize_grid, tune_k
from womac.meta.weights import validate_k
from womac.sim.rng import make_rng

CORRELATIONS = ("pearson", "spearman")
SCORE_KINDS = ("womac", "mse", "gap")


@dataclass(frozen=True)
class KPolicy:
    """Either tune k in sample over `grid`, or use a fixed `k`."""

    kind: str = "tuned"
    grid: Tuple[float, ...] = DEFAULT_K_GRID
    k: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind == "tuned":
            object.__setattr__(self, "grid", normalize_grid(self.grid))
        elif self.kind == "fixed":
            if self.k is None:
                raise ValidationError("a fixed k policy needs k")
            object.__setattr__(self, "k", validate_k(self.k))
        else:
            raise ValidationError(f"unknown k policy '{self.kind}', expected 'tuned' or 'fixed'")

    @classmethod
    def tuned(cls, grid: Sequence[float] = DEFAULT_K_GRID) -> "KPolicy":
        return cls("tuned", tuple(grid))

    @classmethod
    def fixed(cls, k: float) -> "KPolicy":
        return cls("fixed", k=k)

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == "tuned":
            return {"kind": "tuned", "grid": list(self.grid)}
        return {"kind": "fixed", "k": self.k}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "KPolicy":
        if data.get("kind", "tuned") == "fixed":
            return cls.fixed(data["k"])
        return cls.tuned(tuple(data.get("grid", DEFAULT_K_GRID)))


@dataclass(frozen=True)
class ExperimentConfig:
    m_train_grid: Tuple[int, ...] = DEFAULT_M_TRAIN_GRID
    n_subsamples: int = DEFAULT_N_SUBSAMPLES
    m_test: int = DEFAULT_M_TEST
    k_policy: KPolicy = field(default_factory=KPolicy)
    expert_subsample: Optional[int] = None
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        object.__setattr__(self, "m_train_grid", tuple(int(m) for m in self.m_train_grid))
        if self.expert_subsample is not None and self.expert_subsample < 3:
            raise ValidationError(f"expert_subsample must be at least 3, got {self.expert_subsample}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m_train_grid": list(self.m_train_grid),
            "n_subsamples": self.n_subsamples,
            "m_test": self.m_test,
            "k_policy": self.k_policy.to_dict(),
            "expert_subsample": self.expert_subsample,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        defaults = cls()
        return cls(
            m_train_grid=tuple(data.get("m_train_grid", defaults.m_train_grid)),
            n_subsamples=int(data.get("n_subsamples", defaults.n_subsamples)),
            m_test=int(data.get("m_test", defaults.m_test)),
            k_policy=KPolicy.from_dict(data.get("k_policy", {})),
            expert_subsample=data.get("expert_subsample"),
            seed=int(data.get("seed", defaults.seed)),
        )


@dataclass(frozen=True)
class SplitScores:
    womac_in: np.ndarray
    mse_in: np.ndarray
    mse_out: np.ndarray
    k: float


def score_split(W: PredictionMatrix, y: OutcomeVector, split: Split, k_policy: KPolicy) -> SplitScores:
    """
    In-sample WOMAC and MSE scores on the train tasks, MSE on the test tasks.
    """
    if W.m != len(y):
        raise DimensionError(f"{W.m} tasks of predictions but {len(y)} outcomes")
    W_train, y_train = W.take_tasks(split.train), y.take(split.train)
    W_test, y_test = W.values[split.test], y.values[split.test]

    if k_policy.kind == "tuned":
        k = tune_k(W_train, y_train, k_policy.grid).best_k
    else:
        k = k_policy.k

    womac_in = womac_score_only(W_train, y_train, WomacConfig.topk(k))
    mse_in = column_sse(W_train.values, np.broadcast_to(y_train.values[:, np.newaxis], W_train.values.shape))
    mse_out = column_sse(W_test, np.broadcast_to(y_test[:, np.newaxis], W_test.shape))
    return SplitScores(womac_in, mse_in, mse_out, k)


@dataclass(frozen=True)
class SummaryStats:
    mean: Optional[float]
    sd: Optional[float]
    se: Optional[float]
    n_valid: int
    n_missing: int

    @classmethod
    def of(cls, values: Sequence[Optional[float]]) -> "SummaryStats":
        valid = np.array([v for v in values if v is not None], dtype=np.float64)
        n_missing = len(values) - valid.shape[0]
        if valid.shape[0] == 0:
            return cls(None, None, None, 0, n_missing)
        mean = float(valid.mean())
        if valid.shape[0] < 2:
            return cls(mean, None, None, 1, n_missing)
        sd = float(valid.std(ddof=1))
        return cls(mean, sd, sd / np.sqrt(valid.shape[0]), int(valid.shape[0]), n_missing)

    def to_dict(self) -> Dict[str, Any]:
        return {"mean": self.mean, "sd": self.sd, "se": self.se, "n_valid": self.n_valid, "n_missing": self.n_missing}


@dataclass(frozen=True)
class TrainSizeResult:
    """Correlations for one training size across all splits."""

    m_train: int
    raw: Dict[str, Dict[str, Tuple[Optional[float], ...]]]
    best_k: Tuple[float, ...]

    def stats(self, correlation: str, score: str) -> SummaryStats:
        return SummaryStats.of(self.raw[correlation][score])

    def optimal_k_distribution(self) -> Dict[str, float]:
        ks = np.asarray(self.best_k, dtype=np.float64)
        q05, q25, q50, q75, q95 = np.quantile(ks, [0.05, 0.25, 0.5, 0.75, 0.95])
        return {"median": float(q50), "q25": float(q25), "q75": float(q75), "q05": float(q05), "q95": float(q95)}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m_train": self.m_train,
            "summary": {
                c: {s: self.stats(c, s).to_dict() for s in SCORE_KINDS} for c in CORRELATIONS
            },
            "per_split": {c: {s: list(v) for s, v in scores.items()} for c, scores in self.raw.items()},
            "best_k": list(self.best_k),
            "optimal_k": self.optimal_k_distribution(),
        }


@dataclass(frozen=True)
class CorrelationReport:
    config: ExperimentConfig
    n_experts: int
    m_total: int
    results: Tuple[TrainSizeResult, ...]

    def result_for(self, m_train: int) -> TrainSizeResult:
        for result in self.results:
            if result.m_train == m_train:
                return result
        raise KeyError(m_train)

    def gap(self, correlation: str) -> List[Optional[float]]:
        """Mean WOMAC-minus-MSE correlation per training size."""
        return [r.stats(correlation, "gap").mean for r in self.results]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config.to_dict(),
            "n_experts": self.n_experts,
            "m_total": self.m_total,
            "results": [r.to_dict() for r in self.results],
        }


def _split_correlations(scores: SplitScores) -> Dict[str, Dict[str, Optional[float]]]:
    out: Dict[str, Dict[str, Optional[float]]] = {}
    for name, fn in (("pearson", pearson), ("spearman", spearman)):
        w = fn(scores.womac_in, scores.mse_out)
        s = fn(scores.mse_in, scores.mse_out)
        out[name] = {"womac": w, "mse": s, "gap": None if w is None or s is None else w - s}
    return out


def _expert_columns(n: int, size: Optional[int], seed: int, m_train: int, index: int) -> Optional[np.ndarray]:
    if size is None or size >= n:
        return None
    return np.sort(make_rng(seed, m_train, index, 1).choice(n, size=size, replace=False))


def run_correlation_experiment(
    W: PredictionMatrix, y: OutcomeVector, cfg: ExperimentConfig, threads: int = 1
) -> CorrelationReport:
    """
    Full train/test correlation protocol.

    Args:
        W: expert reports over all tasks
        y: realized outcomes
        cfg: experiment configuration
        threads: worker threads (results do not depend on it)

    Returns:
        CorrelationReport with per-split raw values and summaries
    """
    if W.m != len(y):
        raise DimensionError(f"{W.m} tasks of predictions but {len(y)} outcomes")
    if W.n < 3:
        raise ValidationError(f"the experiment needs at least three experts, got {W.n}")
    check_feasible(W.m, cfg.m_train_grid, cfg.m_test, cfg.n_subsamples)

    jobs = [(m_train, s) for m_train in cfg.m_train_grid for s in range(cfg.n_subsamples)]
    slots: List[Optional[Tuple[Dict[str, Dict[str, Optional[float]]], float]]] = [None] * len(jobs)

    def run_job(index: int) -> None:
        m_train, s = jobs[index]
        split = draw_split(W.m, m_train, cfg.m_test, cfg.seed, s)
        cols = _expert_columns(W.n, cfg.expert_subsample, cfg.seed, m_train, s)
        W_pool = W if cols is None else W.take_experts(cols)
        scores = score_split(W_pool, y, split, cfg.k_policy)
        slots[index] = (_split_correlations(scores), scores.k)

    threads = max(1, int(threads))
    with console.status(f"Scoring {len(jobs)} splits..."):
        if threads == 1:
            for index in range(len(jobs)):
                run_job(index)
        else:
            with ThreadPoolExecutor(max_workers=threads) as executor:
                futures = [executor.submit(run_job, index) for index in range(len(jobs))]
                exceptions: List[BaseException] = []
                for future in futures:
                    try:
                        future.result()
                    except Exception as e:
                        exceptions.append(e)
                        console.error(f"Experiment: Worker failed: {e}")
            if exceptions:
                raise exceptions[0]

    results: List[TrainSizeResult] = []
    for g, m_train in enumerate(cfg.m_train_grid):
        chunk = slots[g * cfg.n_subsamples:(g + 1) * cfg.n_subsamples]
        raw = {
            c: {s: tuple(slot[0][c][s] for slot in chunk) for s in SCORE_KINDS}
            for c in CORRELATIONS
        }
        results.append(TrainSizeResult(m_train, raw, tuple(slot[1] for slot in chunk)))
        missing = results[-1].stats("pearson", "womac").n_missing
        if missing:
            console.warning(f"m_train={m_train}: {missing} split(s) had constant scores and were excluded")

    return CorrelationReport(cfg, W.n if cfg.expert_subsample is None else min(W.n, cfg.expert_subsample), W.m, tuple(results))
