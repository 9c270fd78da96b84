"""
Randomized invariant suites.

Inputs are drawn on a grid of multiples of 1/8 so that translations and
rescalings are exact in floating point.
"""
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from womac.core import OutcomeVector, PredictionMatrix, ReferenceMatrix, column_sse, score_all, select_winner
from womac.experiments.correlation import pearson, spearman
from womac.mechanisms import WomacConfig, run_womac
from womac.meta.weights import topk_weights

CASES = settings(max_examples=1000, deadline=None)


@st.composite
def grid_matrix(draw, min_m=1, max_m=8, min_n=2, max_n=8):
    m = draw(st.integers(min_m, max_m))
    n = draw(st.integers(min_n, max_n))
    cells = draw(st.lists(st.integers(-16, 16), min_size=m * n, max_size=m * n))
    return np.array(cells, dtype=np.float64).reshape(m, n) / 8.0


@st.composite
def prediction_and_reference(draw):
    W = draw(grid_matrix())
    m, n = W.shape
    ref = draw(st.lists(st.integers(-16, 16), min_size=m * n, max_size=m * n))
    return W, np.array(ref, dtype=np.float64).reshape(m, n) / 8.0


k_values = st.sampled_from([0.05, 0.1, 0.2, 0.25, 0.3, 0.5, 0.75, 1.0])
peer_errors = st.lists(st.integers(0, 64).map(lambda v: v / 8.0), min_size=2, max_size=12)


@CASES
@given(prediction_and_reference(), st.integers(-64, 64))
def test_translation_invariance_of_winner(data, shift):
    W, T = data
    c = shift / 8.0
    base = score_all(PredictionMatrix(W), ReferenceMatrix(T))
    moved = score_all(PredictionMatrix(W + c), ReferenceMatrix(T + c))
    np.testing.assert_array_equal(base.scores, moved.scores)
    assert base.winner == moved.winner


@CASES
@given(prediction_and_reference(), st.data())
def test_monotonicity_of_scoring(data, draws):
    W, T = data
    j = draws.draw(st.integers(0, W.shape[1] - 1))
    before = score_all(PredictionMatrix(W), ReferenceMatrix(T))
    assume(before.scores[j] > 0.0)
    # Halving every error of column j strictly lowers its score.
    improved = W.copy()
    improved[:, j] = T[:, j] + (W[:, j] - T[:, j]) / 2.0
    after = score_all(PredictionMatrix(improved), ReferenceMatrix(T))
    assert after.scores[j] < before.scores[j]
    if before.winner == j:
        assert after.winner == j


@CASES
@given(prediction_and_reference(), st.data())
def test_any_better_column_lowers_only_its_own_score(data, draws):
    W, T = data
    m, n = W.shape
    j = draws.draw(st.integers(0, n - 1))
    cells = draws.draw(st.lists(st.integers(-16, 16), min_size=m, max_size=m))
    column = np.array(cells, dtype=np.float64) / 8.0
    before = score_all(PredictionMatrix(W), ReferenceMatrix(T))
    assume(column_sse(column[:, None], T[:, [j]])[0] < before.scores[j])
    improved = W.copy()
    improved[:, j] = column
    after = score_all(PredictionMatrix(improved), ReferenceMatrix(T))
    assert after.scores[j] < before.scores[j]
    others = [l for l in range(n) if l != j]
    np.testing.assert_array_equal(after.scores[others], before.scores[others])
    if before.winner == j:
        assert after.winner == j


@CASES
@given(prediction_and_reference(), st.randoms(use_true_random=False))
def test_permutation_equivariance(data, random):
    W, T = data
    n = W.shape[1]
    perm = list(range(n))
    random.shuffle(perm)
    base = score_all(PredictionMatrix(W), ReferenceMatrix(T))
    permuted = score_all(PredictionMatrix(W[:, perm]), ReferenceMatrix(T[:, perm]))
    np.testing.assert_array_equal(permuted.scores, base.scores[perm])
    assert perm[permuted.winner] in base.tied_winners
    assert permuted.winner == min(perm.index(j) for j in base.tied_winners)


@CASES
@given(
    st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=2, max_size=30),
    st.data(),
)
def test_correlation_bounds(x, draws):
    y = draws.draw(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=len(x), max_size=len(x)))
    for fn in (pearson, spearman):
        r = fn(x, y)
        assert r is None or -1.0 <= r <= 1.0


@CASES
@given(
    st.lists(st.integers(-1000, 1000), min_size=3, max_size=30),
    st.data(),
)
def test_spearman_invariant_under_monotone_transform(x, draws):
    y = draws.draw(st.lists(st.integers(-1000, 1000), min_size=len(x), max_size=len(x)))
    transformed = [v ** 3 + 2 * v for v in x]
    assert spearman(transformed, y) == spearman(x, y)
    assume(len(set(x)) > 1)
    assert spearman(x, transformed) == pytest.approx(1.0)


@CASES
@given(peer_errors, k_values, st.data())
def test_weights_form_probability_vector(errors, k, draws):
    n = len(errors)
    excluded = draws.draw(st.one_of(st.none(), st.integers(0, n - 1)))
    vec = topk_weights(errors, k, excluded=excluded).as_vector(n)
    assert np.all(vec >= 0.0)
    assert vec.sum() == pytest.approx(1.0, abs=1e-12)
    if excluded is not None:
        assert vec[excluded] == 0.0


@CASES
@given(peer_errors, k_values, k_values, st.integers(0, 4))
def test_selection_nests_as_k_grows(errors, k1, k2, power):
    small, large = sorted((k1, k2))
    excluded = 0
    a = set(topk_weights(errors, small, excluded=excluded).selected_peers)
    b = set(topk_weights(errors, large, excluded=excluded).selected_peers)
    assert a <= b
    # Rescaling every error by a positive constant keeps the selection.
    scaled = [e * 2.0 ** power for e in errors]
    assert set(topk_weights(scaled, small, excluded=excluded).selected_peers) == a


@settings(max_examples=200, deadline=None)
@given(grid_matrix(min_m=2, min_n=3), st.integers(-8, 8), k_values)
def test_womac_topk_translation_invariance(W, shift, k):
    m = W.shape[0]
    y = np.array([(i % 3) / 4.0 for i in range(m)])
    c = float(shift)
    cfg = WomacConfig.topk(k)
    base, _ = run_womac(PredictionMatrix(W), OutcomeVector(y), cfg)
    moved, _ = run_womac(PredictionMatrix(W + c), OutcomeVector(y + c), cfg)
    np.testing.assert_allclose(moved.scores, base.scores, rtol=1e-9, atol=1e-9)
    ordered = np.sort(base.scores)
    if ordered[1] - ordered[0] > 1e-6:
        assert moved.winner == base.winner


def test_column_sse_is_per_column():
    W = np.array([[1.0, 2.0], [3.0, 4.0]])
    T = np.zeros_like(W)
    full = column_sse(W, T)
    assert full[1] == column_sse(W[:, [1]], T[:, [1]])[0]
    assert select_winner(full) == (0, [0])
