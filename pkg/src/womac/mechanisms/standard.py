"""
Shared-reference competitions: every expert is scored against the same vector.
"""
from womac.core import (
    CompetitionResult,
    MechanismTag,
    OutcomeVector,
    PredictionMatrix,
    ReferenceMatrix,
    score_all,
)
from womac.errors import DimensionError
from womac.mechanisms.config import OracleVector


def _run_shared(W: PredictionMatrix, reference, tag: MechanismTag) -> CompetitionResult:
    if reference.shape[0] != W.m:
        raise DimensionError(f"{W.m} tasks of predictions but reference has length {reference.shape[0]}")
    return score_all(W, ReferenceMatrix.shared(reference, W.n), tag)


def run_standard(W: PredictionMatrix, y: OutcomeVector) -> CompetitionResult:
    """Score experts against the realized outcomes."""
    return _run_shared(W, y.values, MechanismTag.STANDARD)


def run_oracular(W: PredictionMatrix, theta: OracleVector) -> CompetitionResult:
    """Score experts against the ground truth."""
    return _run_shared(W, theta.values, MechanismTag.ORACULAR)
