"""Meta-learners that turn peer reports into reference solutions."""

from womac.meta.weights import (
    WeightAssignment,
    topk_weights,
    selection_mask,
    pooled_selection,
    leave_one_task_out_sse,
    validate_k,
)
from womac.meta.tuning import KTuneReport, tune_k, normalize_grid

__all__ = [
    'WeightAssignment',
    'topk_weights',
    'selection_mask',
    'pooled_selection',
    'leave_one_task_out_sse',
    'validate_k',
    'KTuneReport',
    'tune_k',
    'normalize_grid',
]
