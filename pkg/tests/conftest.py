import os

import numpy as np
import pytest

from womac.core import OutcomeKind, OutcomeVector, PredictionMatrix
from womac.logger import logger


@pytest.fixture(autouse=True)
def quiet_logger():
    logger.quiet = True
    yield
    logger.quiet = False


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def binary_instance(rng):
    """12 tasks, 6 experts, probability reports and 0/1 outcomes."""
    theta = rng.uniform(0.1, 0.9, size=12)
    W = np.clip(theta[:, None] + rng.normal(0, [0.05, 0.1, 0.15, 0.2, 0.25, 0.3], size=(12, 6)), 0.0, 1.0)
    y = (rng.random(12) < theta).astype(float)
    return PredictionMatrix(W), OutcomeVector(y, OutcomeKind.BINARY)


def write_long_csv(directory, W, y, expert_ids=None, task_ids=None, skip=()):
    """Write a matrix as the long-form predictions/outcomes CSV pair; `skip` holds (i, j) cells to omit."""
    W = np.asarray(W, dtype=float)
    m, n = W.shape
    task_ids = task_ids or [f"t{i}" for i in range(m)]
    expert_ids = expert_ids or [f"e{j}" for j in range(n)]
    pred_path = os.path.join(str(directory), "predictions.csv")
    out_path = os.path.join(str(directory), "outcomes.csv")
    with open(pred_path, "w", encoding="utf-8") as f:
        f.write("task_id,expert_id,prediction\n")
        for i in range(m):
            for j in range(n):
                if (i, j) not in skip:
                    f.write(f"{task_ids[i]},{expert_ids[j]},{float(W[i, j])!r}\n")
    with open(out_path, "w", encoding="utf-8") as f:
        f.write("task_id,outcome\n")
        for i in range(m):
            value = y[i]
            f.write(f"{task_ids[i]},{int(value) if float(value).is_integer() else repr(float(value))}\n")
    return pred_path, out_path


@pytest.fixture
def toy_files(tmp_path):
    """Three tasks, four experts; e2 reports the outcomes exactly."""
    W = np.array([
        [0.2, 0.6, 1.0, 0.5],
        [0.7, 0.4, 0.0, 0.5],
        [0.9, 0.8, 1.0, 0.5],
    ])
    y = np.array([1.0, 0.0, 1.0])
    return write_long_csv(tmp_path, W, y)
