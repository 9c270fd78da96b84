import numpy as np
import pytest

from womac.core import OutcomeKind, OutcomeVector, PredictionMatrix
from womac.errors import DimensionError, ValidationError
from womac.experiments import (
    ExperimentConfig,
    KPolicy,
    make_splits,
    pearson,
    run_correlation_experiment,
    score_split,
    spearman,
)
from womac.experiments.harness import SummaryStats
from womac.experiments.report import OPTIMAL_K_COLUMNS, SUMMARY_COLUMNS, write_reports
from womac.experiments.splits import Split
from womac.sim import BernoulliLogistic, GaussianPrior, WorldConfig, make_rng, sample_world


class TestCorrelation:
    def test_pearson_of_hand_example(self):
        assert pearson([1, 2, 3], [2, 4, 7]) == pytest.approx(0.99340, abs=1e-5)

    def test_perfect_negative(self):
        assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_constant_input_gives_none(self):
        assert pearson([1, 1, 1], [1, 2, 3]) is None
        assert spearman([1, 2, 3], [5, 5, 5]) is None

    def test_spearman_uses_mid_ranks(self):
        # ranks x: [1, 2.5, 2.5, 4]
        assert spearman([1, 2, 2, 3], [1, 2, 3, 4]) == pytest.approx(0.9486833, abs=1e-6)

    def test_spearman_of_monotone_transform(self):
        x = [0.3, -1.2, 4.0, 2.2]
        assert spearman(x, np.exp(x)) == pytest.approx(1.0)

    def test_tiny_magnitudes_do_not_underflow(self):
        a = 1e-160
        assert pearson([-a, 0.0, a], [a, -2 * a, a]) == pytest.approx(0.0, abs=1e-12)
        assert pearson([-a, 0.0, a], [-a, 0.0, 2 * a]) == pytest.approx(pearson([-1, 0, 1], [-1, 0, 2]), abs=1e-12)

    def test_scale_invariance(self, rng):
        x, y = rng.normal(size=12), rng.normal(size=12)
        assert pearson(x * 1e-160, y) == pytest.approx(pearson(x, y), abs=1e-12)
        assert pearson(x * 1e150, y * 1e150) == pytest.approx(pearson(x, y), abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            pearson([1, 2], [1, 2, 3])


class TestSplits:
    def test_disjoint_and_sized(self):
        cfg = ExperimentConfig(m_train_grid=(5, 10), n_subsamples=20, m_test=4)
        splits = make_splits(20, cfg, seed=3)
        for m_train, group in splits.items():
            assert len(group) == 20
            for split in group:
                assert len(split.train) == m_train
                assert len(split.test) == 4
                assert not set(split.train) & set(split.test)

    def test_splits_independent_of_grid(self):
        a = make_splits(20, ExperimentConfig(m_train_grid=(5,), n_subsamples=3, m_test=4), seed=3)
        b = make_splits(20, ExperimentConfig(m_train_grid=(10, 5), n_subsamples=3, m_test=4), seed=3)
        for x, y in zip(a[5], b[5]):
            np.testing.assert_array_equal(x.train, y.train)

    def test_infeasible_train_size(self):
        with pytest.raises(ValidationError):
            make_splits(12, ExperimentConfig(m_train_grid=(5,), n_subsamples=1, m_test=10), seed=0)

    def test_train_size_of_one_rejected(self):
        with pytest.raises(ValidationError):
            make_splits(12, ExperimentConfig(m_train_grid=(1,), n_subsamples=1, m_test=2), seed=0)


def small_world(m=20, n=12, seed=1):
    sds = tuple(np.geomspace(0.2, 2.0, n))
    _, W, y = sample_world(WorldConfig(m, sds, GaussianPrior(0.0, 1.0), BernoulliLogistic()), seed)
    return W, y


class TestScoreSplit:
    def test_fixed_k_scores(self):
        W, y = small_world()
        split = Split(np.arange(6), np.arange(6, 10))
        scores = score_split(W, y, split, KPolicy.fixed(0.2))
        assert scores.k == 0.2
        assert scores.womac_in.shape == scores.mse_in.shape == scores.mse_out.shape == (W.n,)
        expected_out = ((W.values[6:10] - y.values[6:10, None]) ** 2).sum(axis=0)
        np.testing.assert_allclose(scores.mse_out, expected_out)

    def test_tuned_k_comes_from_grid(self):
        W, y = small_world()
        split = Split(np.arange(8), np.arange(8, 12))
        scores = score_split(W, y, split, KPolicy.tuned((0.1, 0.5)))
        assert scores.k in (0.1, 0.5)

    def test_expert_equal_to_outcomes(self, rng):
        y = rng.normal(size=12)
        noise = rng.normal(size=(12, 4))
        W = np.column_stack([y, y + 0.01 * noise[:, 0], y + noise[:, 1], y + 1.5 * noise[:, 2], y + 2 * noise[:, 3]])
        split = Split(np.arange(8), np.arange(8, 12))
        scores = score_split(PredictionMatrix(W), OutcomeVector(y), split, KPolicy.fixed(0.05))
        assert scores.mse_in[0] == 0.0
        assert scores.mse_out[0] == 0.0
        assert scores.womac_in[0] <= scores.womac_in[1:].min() + 1e-12

    def test_identical_experts_get_identical_scores(self):
        W, y = small_world()
        values = W.values.copy()
        values[:, 5] = values[:, 3]
        split = Split(np.arange(7), np.arange(7, 13))
        scores = score_split(PredictionMatrix(values), y, split, KPolicy.fixed(0.3))
        for field in ("womac_in", "mse_in", "mse_out"):
            column = getattr(scores, field)
            assert column[3] == pytest.approx(column[5], abs=1e-12)

    def test_partition_scores_add_up_to_full_data(self):
        W, y = small_world()
        perm = make_rng(3).permutation(W.m)
        split = Split(np.sort(perm[:11]), np.sort(perm[11:]))
        scores = score_split(W, y, split, KPolicy.fixed(0.2))
        full = ((W.values - y.values[:, None]) ** 2).sum(axis=0)
        np.testing.assert_allclose(scores.mse_in + scores.mse_out, full, rtol=1e-12)



class TestSummaryStats:
    def test_missing_values_are_counted(self):
        stats = SummaryStats.of([0.5, None, 0.7])
        assert stats.n_valid == 2
        assert stats.n_missing == 1
        assert stats.mean == pytest.approx(0.6)
        assert stats.sd == pytest.approx(np.std([0.5, 0.7], ddof=1))
        assert stats.se == pytest.approx(stats.sd / np.sqrt(2))

    def test_all_missing(self):
        assert SummaryStats.of([None, None]).mean is None


class TestHarness:
    def test_report_shape_and_bounds(self):
        W, y = small_world()
        cfg = ExperimentConfig(m_train_grid=(4, 8), n_subsamples=5, m_test=5, k_policy=KPolicy.fixed(0.2))
        report = run_correlation_experiment(W, y, cfg)
        assert [r.m_train for r in report.results] == [4, 8]
        for result in report.results:
            for c in ("pearson", "spearman"):
                values = result.raw[c]["womac"]
                assert len(values) == 5
                assert all(v is None or -1.0 <= v <= 1.0 for v in values)
                for s in range(5):
                    w, mse, gap = result.raw[c]["womac"][s], result.raw[c]["mse"][s], result.raw[c]["gap"][s]
                    if w is not None and mse is not None:
                        assert gap == pytest.approx(w - mse)

    def test_thread_count_does_not_change_report(self):
        W, y = small_world()
        cfg = ExperimentConfig(m_train_grid=(5,), n_subsamples=6, m_test=5)
        a = run_correlation_experiment(W, y, cfg, threads=1)
        b = run_correlation_experiment(W, y, cfg, threads=3)
        assert a.to_dict() == b.to_dict()

    def test_expert_subsample(self):
        W, y = small_world()
        cfg = ExperimentConfig(m_train_grid=(5,), n_subsamples=3, m_test=5, expert_subsample=6)
        report = run_correlation_experiment(W, y, cfg)
        assert report.n_experts == 6

    def test_equal_skill_experts_show_no_gap(self):
        cfg = WorldConfig(60, (0.5,) * 20, GaussianPrior(0.0, 1.0), BernoulliLogistic())
        _, W, y = sample_world(cfg, 21)
        exp = ExperimentConfig(m_train_grid=(10, 30), n_subsamples=40, m_test=20, k_policy=KPolicy.fixed(0.2), seed=5)
        report = run_correlation_experiment(W, y, exp, threads=2)
        for result in report.results:
            for correlation in ("pearson", "spearman"):
                gap = result.stats(correlation, "gap")
                assert gap.n_valid == 40
                assert abs(gap.mean) <= 4 * gap.se, (result.m_train, correlation, gap)

    def test_config_round_trip(self):
        cfg = ExperimentConfig(m_train_grid=(5, 10), n_subsamples=7, m_test=3, k_policy=KPolicy.fixed(0.3))
        assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg

    def test_infeasible_grid(self):
        W, y = small_world(m=12)
        with pytest.raises(ValidationError):
            run_correlation_experiment(W, y, ExperimentConfig(m_train_grid=(5,), n_subsamples=2, m_test=10))

    def test_write_reports(self, tmp_path):
        W, y = small_world()
        cfg = ExperimentConfig(m_train_grid=(5,), n_subsamples=4, m_test=5, k_policy=KPolicy.fixed(0.2))
        report = run_correlation_experiment(W, y, cfg)
        paths = write_reports({"k=0.2": report}, str(tmp_path))
        header = open(paths[1], encoding="utf-8").readline().strip()
        assert header == ",".join(SUMMARY_COLUMNS)
        lines = open(paths[2], encoding="utf-8").read().splitlines()
        assert lines[0] == ",".join(OPTIMAL_K_COLUMNS)
        assert len(lines) == 2


@pytest.mark.slow
def test_womac_scores_predict_out_of_sample_better_than_mse():
    rng = make_rng(2024)
    sds = tuple(float(s) for s in np.exp(rng.uniform(np.log(0.2), np.log(2.0), size=200)))
    cfg = WorldConfig(60, sds, GaussianPrior(0.0, 1.0), BernoulliLogistic())
    _, W, y = sample_world(cfg, make_rng(2024, 1))
    report = run_correlation_experiment(W, y, ExperimentConfig(), threads=4)
    assert len(report.results) == 8
    for correlation in ("pearson", "spearman"):
        gaps = report.gap(correlation)
        assert all(g is not None and g > 0 for g in gaps), (correlation, gaps)
