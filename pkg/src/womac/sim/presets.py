"""
Named simulation setups for the CLI.

Each preset takes keyword parameters (all with defaults), returns a JSON-ready
payload plus flat CSV rows, and echoes its fully resolved parameters.
"""
import inspect
from typing import Any, Callable, Dict, List, Tuple

from womac.errors import ValidationError
from womac.sim.montecarlo import (
    MechanismSpec,
    efficiency_curve,
    estimate_win_prob,
    intervals_disjoint,
)
from womac.sim.world import (
    BernoulliLogistic,
    DeviationStrategy,
    FixedTheta,
    GaussianOutcome,
    GaussianPrior,
    ReferenceNoiseModel,
    WorldConfig,
)

PresetResult = Tuple[Dict[str, Any], List[Dict[str, Any]]]


def fig1_outflank(
    replicates: int,
    seed: int,
    threads: int = 1,
    n: int = 10,
    truthful_sd: float = 0.1,
    outcome_sd: float = 10.0,
    offsets: Tuple[float, ...] = (2.0, 3.0, 5.0),
    anchors: Tuple[str, ...] = ("signal", "prior"),
) -> PresetResult:
    """
    One task, a tight cluster of truthful reports and a very noisy outcome.

    Expert 0 is the focal expert: first truthful, then outflanking the
    cluster by each offset (in multiples of the truthful sd) from each anchor.
    """
    world = WorldConfig(1, (truthful_sd,) * n, FixedTheta((0.0,)), GaussianOutcome(outcome_sd))
    standard = MechanismSpec("standard")
    truthful = [DeviationStrategy.truthful()] * n

    rows: List[Dict[str, Any]] = []
    est = estimate_win_prob(world, standard, None, truthful, replicates, seed, stream=(0,), threads=threads)
    rows.append({
        "strategy": "truthful", "anchor": "", "offset_sds": 0.0,
        "focal_freq": float(est.per_expert_freq[0]), "ci_halfwidth": float(est.ci_halfwidth[0]),
    })

    for a, anchor in enumerate(anchors):
        for o, offset in enumerate(offsets):
            strategies = [DeviationStrategy.outflank(offset * truthful_sd, 1, anchor)] + truthful[1:]
            est = estimate_win_prob(
                world, standard, None, strategies, replicates, seed, stream=(1, a, o), threads=threads
            )
            rows.append({
                "strategy": "outflank", "anchor": anchor, "offset_sds": float(offset),
                "focal_freq": float(est.per_expert_freq[0]), "ci_halfwidth": float(est.ci_halfwidth[0]),
            })

    payload = {"preset": "fig1-outflank", "uniform_share": 1.0 / n, "rows": rows}
    return payload, rows


def _precision_world(m: int, n: int, best_sd: float, peer_sd: float, outcome: str) -> WorldConfig:
    if outcome == "gaussian":
        outcome_model = GaussianOutcome(1.0)
    elif outcome == "bernoulli":
        outcome_model = BernoulliLogistic()
    else:
        raise ValidationError(f"unknown outcome '{outcome}', expected 'gaussian' or 'bernoulli'")
    return WorldConfig(m, (best_sd,) + (peer_sd,) * (n - 1), GaussianPrior(0.0, 1.0), outcome_model)


def thm2_precision(
    replicates: int,
    seed: int,
    threads: int = 1,
    m: int = 10,
    n: int = 10,
    best_sd: float = 0.3,
    peer_sd: float = 0.6,
    precise_sd: float = 0.1,
    noisy_sd: float = 1.0,
    outcome: str = "gaussian",
    level: float = 0.99,
) -> PresetResult:
    """
    Best-expert win frequency under a precise reference, a noisy reference and
    the realized outcomes. Expert 0 is the best expert.
    """
    world = _precision_world(m, n, best_sd, peer_sd, outcome)
    arms = [
        ("oracular-precise", MechanismSpec("oracular"), ReferenceNoiseModel.gaussian(precise_sd)),
        ("oracular-noisy", MechanismSpec("oracular"), ReferenceNoiseModel.gaussian(noisy_sd)),
        ("oracular-exact", MechanismSpec("oracular"), ReferenceNoiseModel.exact()),
        ("standard", MechanismSpec("standard"), ReferenceNoiseModel.exact()),
    ]
    rows: List[Dict[str, Any]] = []
    intervals = {}
    for name, mechanism, noise in arms:
        est = estimate_win_prob(
            world, mechanism, noise, None, replicates, seed, threads=threads, level=level
        )
        intervals[name] = est.interval(0)
        rows.append({
            "arm": name, "best_freq": float(est.per_expert_freq[0]),
            "ci_halfwidth": float(est.ci_halfwidth[0]), "ci_level": level,
            "winner_is_oracle_best": est.oracle_best_agreement / est.replicates,
        })

    payload = {
        "preset": "thm2-precision",
        "rows": rows,
        "precise_beats_noisy": bool(
            rows[0]["best_freq"] > rows[1]["best_freq"]
            and intervals_disjoint(intervals["oracular-precise"], intervals["oracular-noisy"])
        ),
        "oracle_beats_outcome": bool(
            rows[2]["best_freq"] > rows[3]["best_freq"]
            and intervals_disjoint(intervals["oracular-exact"], intervals["standard"])
        ),
    }
    return payload, rows


def efficiency(
    replicates: int,
    seed: int,
    threads: int = 1,
    m_grid: Tuple[int, ...] = (1, 2, 5, 10, 20, 40),
    n: int = 10,
    best_sd: float = 0.3,
    peer_sd: float = 0.6,
    sd_a: float = 0.1,
    sd_b: float = 1.0,
) -> PresetResult:
    """Best-expert identification against task count for two reference precisions."""
    world = _precision_world(max(m_grid), n, best_sd, peer_sd, "gaussian")
    curve = efficiency_curve(
        world,
        ReferenceNoiseModel.gaussian(sd_a),
        ReferenceNoiseModel.gaussian(sd_b),
        m_grid,
        replicates,
        seed,
        threads=threads,
    )
    rows = [row.to_dict() for row in curve.rows]
    payload = {"preset": "efficiency-curve", **curve.to_dict()}
    return payload, rows


PRESETS: Dict[str, Callable[..., PresetResult]] = {
    "fig1-outflank": fig1_outflank,
    "thm2-precision": thm2_precision,
    "efficiency-curve": efficiency,
}


def preset_defaults(name: str) -> Dict[str, Any]:
    """Tunable parameters of a preset with their defaults."""
    fn = PRESETS[name]
    params = inspect.signature(fn).parameters
    return {
        key: p.default for key, p in params.items()
        if key not in ("replicates", "seed", "threads")
    }


def resolve_overrides(name: str, overrides: Dict[str, Any]) -> Dict[str, Any]:
    if name not in PRESETS:
        raise ValidationError(f"unknown preset '{name}', expected one of {sorted(PRESETS)}")
    resolved = preset_defaults(name)
    unknown = sorted(set(overrides) - set(resolved))
    if unknown:
        raise ValidationError(f"unknown parameter(s) for preset '{name}': {', '.join(unknown)}")
    for key, value in overrides.items():
        default = resolved[key]
        if isinstance(default, tuple):
            value = tuple(value) if isinstance(value, (list, tuple)) else (value,)
        resolved[key] = value
    return resolved


def run_preset(name: str, replicates: int, seed: int, threads: int, params: Dict[str, Any]) -> PresetResult:
    return PRESETS[name](replicates=replicates, seed=seed, threads=threads, **params)
