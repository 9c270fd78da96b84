"""womac: deterministic prediction-competition scoring."""

from womac.core import (
    OutcomeKind,
    MechanismTag,
    PredictionMatrix,
    OutcomeVector,
    ReferenceMatrix,
    CompetitionResult,
    sum_squared_error,
    select_winner,
    score_all,
)

__version__ = "0.1.0"

__all__ = [
    'OutcomeKind',
    'MechanismTag',
    'PredictionMatrix',
    'OutcomeVector',
    'ReferenceMatrix',
    'CompetitionResult',
    'sum_squared_error',
    'select_winner',
    'score_all',
]
