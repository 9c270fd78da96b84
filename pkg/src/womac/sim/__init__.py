"""Synthetic worlds and Monte Carlo win-probability estimation."""

from womac.sim.rng import derive_seed, make_rng
from womac.sim.world import (
    WorldConfig,
    FixedTheta,
    GaussianPrior,
    GaussianOutcome,
    BernoulliLogistic,
    ReferenceNoiseModel,
    DeviationStrategy,
    draw_world,
    sample_world,
)
from womac.sim.montecarlo import (
    MechanismSpec,
    WinProbEstimate,
    EfficiencyCurve,
    estimate_win_prob,
    efficiency_curve,
    intervals_disjoint,
)

__all__ = [
    'derive_seed',
    'make_rng',
    'WorldConfig',
    'FixedTheta',
    'GaussianPrior',
    'GaussianOutcome',
    'BernoulliLogistic',
    'ReferenceNoiseModel',
    'DeviationStrategy',
    'draw_world',
    'sample_world',
    'MechanismSpec',
    'WinProbEstimate',
    'EfficiencyCurve',
    'estimate_win_prob',
    'efficiency_curve',
    'intervals_disjoint',
]
