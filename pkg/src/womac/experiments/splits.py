"""
Random train/test task splits.

Split s for training size m_train uses make_rng(seed, m_train, s): the
split does not depend on the rest of the grid or on evaluation order.
"""
from typing import Dict, List, NamedTuple

import numpy as np

from womac.errors import ValidationError
from womac.sim.rng import make_rng


class Split(NamedTuple):
    train: np.ndarray
    test: np.ndarray


def check_feasible(m_total: int, m_train_grid, m_test: int, n_subsamples: int) -> None:
    if n_subsamples < 1:
        raise ValidationError(f"need at least one sub-sample, got {n_subsamples}")
    if m_test < 1:
        raise ValidationError(f"m_test must be positive, got {m_test}")
    if not m_train_grid:
        raise ValidationError("m_train grid must not be empty")
    for m_train in m_train_grid:
        if m_train < 2:
            raise ValidationError(f"m_train must be at least 2 (WOMAC leaves one task out), got {m_train}")
        if m_train + m_test > m_total:
            raise ValidationError(
                f"m_train={m_train} plus m_test={m_test} exceeds the {m_total} available tasks",
                m_train=m_train, m_test=m_test, m_total=m_total,
            )


def draw_split(m_total: int, m_train: int, m_test: int, seed: int, index: int) -> Split:
    perm = make_rng(seed, m_train, index).permutation(m_total)
    return Split(np.sort(perm[:m_train]), np.sort(perm[m_train:m_train + m_test]))


def make_splits(m_total: int, cfg, seed: int) -> Dict[int, List[Split]]:
    """
    d disjoint (train, test) task-index splits for every training size.

    Args:
        m_total: number of tasks available
        cfg: ExperimentConfig (m_train_grid, n_subsamples, m_test)
        seed: run seed

    Returns:
        {m_train: [Split, ...]} with n_subsamples splits each
    """
    check_feasible(m_total, cfg.m_train_grid, cfg.m_test, cfg.n_subsamples)
    return {
        m_train: [draw_split(m_total, m_train, cfg.m_test, seed, s) for s in range(cfg.n_subsamples)]
        for m_train in cfg.m_train_grid
    }
