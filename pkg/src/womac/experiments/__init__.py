"""Train/test correlation experiments."""

from womac.experiments.correlation import pearson, spearman
from womac.experiments.splits import Split, make_splits
from womac.experiments.harness import (
    KPolicy,
    ExperimentConfig,
    SplitScores,
    CorrelationReport,
    score_split,
    run_correlation_experiment,
)

__all__ = [
    'pearson',
    'spearman',
    'Split',
    'make_splits',
    'KPolicy',
    'ExperimentConfig',
    'SplitScores',
    'CorrelationReport',
    'score_split',
    'run_correlation_experiment',
]
