import numpy as np
import pytest
from scipy.special import expit

from womac.errors import DimensionError, ValidationError
from womac.mechanisms import WomacConfig
from womac.sim import (
    BernoulliLogistic,
    DeviationStrategy,
    FixedTheta,
    GaussianOutcome,
    GaussianPrior,
    MechanismSpec,
    ReferenceNoiseModel,
    WorldConfig,
    derive_seed,
    efficiency_curve,
    estimate_win_prob,
    intervals_disjoint,
    make_rng,
    sample_world,
)
from womac.sim.montecarlo import z_value
from womac.sim.presets import PRESETS, fig1_outflank, preset_defaults, resolve_overrides, thm2_precision


class TestRng:
    def test_same_counters_same_stream(self):
        assert make_rng(5, 1, 2).random() == make_rng(5, 1, 2).random()

    def test_different_counters_differ(self):
        assert make_rng(5, 1, 2).random() != make_rng(5, 2, 1).random()

    def test_seed_sequence_layout(self):
        seq = derive_seed(7, 3)
        assert seq.entropy == 7
        assert seq.spawn_key == (3,)

    @pytest.mark.parametrize("seed", [-1, 1.5, True])
    def test_invalid_seed(self, seed):
        with pytest.raises(ValidationError):
            derive_seed(seed)


class TestWorld:
    def test_gaussian_world_shapes_and_determinism(self):
        cfg = WorldConfig(5, (0.1, 0.5, 1.0))
        theta, X, y = sample_world(cfg, 3)
        theta2, X2, y2 = sample_world(cfg, 3)
        assert X.values.shape == (5, 3)
        np.testing.assert_array_equal(X.values, X2.values)
        np.testing.assert_array_equal(y.values, y2.values)
        np.testing.assert_array_equal(theta.values, theta2.values)

    def test_bernoulli_world_is_on_probability_scale(self):
        cfg = WorldConfig(50, (0.2, 0.4), GaussianPrior(0.0, 1.0), BernoulliLogistic())
        theta, X, y = sample_world(cfg, 9)
        assert np.all((theta.values > 0) & (theta.values < 1))
        assert np.all((X.values > 0) & (X.values < 1))
        assert set(np.unique(y.values)) <= {0.0, 1.0}

    def test_fixed_theta_is_used(self):
        cfg = WorldConfig(2, (0.1, 0.1), FixedTheta((1.0, -1.0)), GaussianOutcome(1.0))
        theta, _, _ = sample_world(cfg, 0)
        np.testing.assert_array_equal(theta.values, [1.0, -1.0])

    def test_vanishing_noise_reports_equal_theta(self):
        cfg = WorldConfig(6, (1e-12, 1e-12, 1e-12), GaussianPrior(0.0, 1.0), GaussianOutcome(1.0))
        theta, X, _ = sample_world(cfg, 11)
        np.testing.assert_allclose(X.values, np.repeat(theta.values[:, None], 3, axis=1), rtol=0, atol=1e-10)

    def test_gaussian_outcome_mean_converges(self):
        m = 100_000
        cfg = WorldConfig(m, (0.5, 0.5), FixedTheta((0.0,) * m), GaussianOutcome(1.0))
        _, _, y = sample_world(cfg, 12)
        assert abs(y.values.mean()) < 3 / np.sqrt(m)

    def test_bernoulli_outcome_rate_at_even_odds(self):
        m = 100_000
        cfg = WorldConfig(m, (0.5, 0.5), FixedTheta((0.0,) * m), BernoulliLogistic())
        theta, _, y = sample_world(cfg, 13)
        assert np.all(theta.values == 0.5)
        assert abs(y.values.mean() - 0.5) < 3 * 0.5 / np.sqrt(m)

    def test_fixed_theta_length_checked(self):
        with pytest.raises(DimensionError):
            WorldConfig(3, (0.1, 0.1), FixedTheta((0.0,)))

    @pytest.mark.parametrize("sds", [(0.1,), (0.1, 0.0), (0.1, -1.0)])
    def test_invalid_expert_sds(self, sds):
        with pytest.raises(ValidationError):
            WorldConfig(2, sds)

    def test_config_round_trip(self):
        cfg = WorldConfig(4, (0.3, 0.6, 0.6), GaussianPrior(0.5, 2.0), BernoulliLogistic())
        assert WorldConfig.from_dict(cfg.to_dict()) == cfg

    def test_prior_center_on_report_scale(self):
        cfg = WorldConfig(2, (0.3, 0.6), GaussianPrior(1.0, 1.0), BernoulliLogistic())
        np.testing.assert_allclose(cfg.prior_center(), expit([1.0, 1.0]))


class TestStrategies:
    def test_outflank_from_signal(self):
        s = DeviationStrategy.outflank(0.5, -1)
        np.testing.assert_allclose(s.apply(np.array([1.0, 2.0]), 0.1, np.zeros(2)), [0.5, 1.5])

    def test_outflank_default_offset_is_two_sds(self):
        s = DeviationStrategy.outflank()
        np.testing.assert_allclose(s.apply(np.array([0.0]), 0.25, np.zeros(1)), [0.5])

    def test_outflank_from_prior(self):
        s = DeviationStrategy.outflank(0.2, 1, "prior")
        np.testing.assert_allclose(s.apply(np.array([9.0]), 0.1, np.array([1.0])), [1.2])

    def test_shift_length_checked(self):
        with pytest.raises(DimensionError):
            DeviationStrategy.shifted((1.0, 2.0)).apply(np.zeros(3), 0.1, np.zeros(3))

    def test_invalid_direction(self):
        with pytest.raises(ValidationError):
            DeviationStrategy.outflank(0.1, 2)


class TestWinProb:
    def test_frequencies_sum_to_one(self):
        cfg = WorldConfig(3, (0.2, 0.4, 0.8))
        est = estimate_win_prob(cfg, MechanismSpec("standard"), replicates=300, seed=1)
        assert sum(est.counts) == 300
        assert est.per_expert_freq.sum() == pytest.approx(1.0)
        assert np.all((est.per_expert_freq >= 0) & (est.per_expert_freq <= 1))

    def test_thread_count_does_not_change_counts(self):
        cfg = WorldConfig(4, (0.2, 0.4, 0.8, 0.8))
        spec = MechanismSpec("womac", WomacConfig.topk(0.5))
        a = estimate_win_prob(cfg, spec, replicates=200, seed=4, threads=1)
        b = estimate_win_prob(cfg, spec, replicates=200, seed=4, threads=3)
        assert a.counts == b.counts
        assert a.oracle_best_agreement == b.oracle_best_agreement

    def test_exact_oracle_with_identical_noise_is_symmetric(self):
        cfg = WorldConfig(5, (0.5,) * 4)
        est = estimate_win_prob(cfg, MechanismSpec("oracular"), replicates=4000, seed=2)
        np.testing.assert_allclose(est.per_expert_freq, 0.25, atol=0.03)

    @pytest.mark.parametrize(
        "spec", [MechanismSpec("standard"), MechanismSpec("womac", WomacConfig.topk(0.5))], ids=["standard", "womac"]
    )
    def test_exchangeable_experts_win_uniformly(self, spec):
        n, replicates = 4, 10_000
        est = estimate_win_prob(WorldConfig(6, (0.5,) * n), spec, replicates=replicates, seed=8, threads=2)
        assert np.max(np.abs(est.per_expert_freq - 1 / n)) <= 4 * np.sqrt(1 / (n * replicates))

    def test_reference_noise_requires_oracular(self):
        with pytest.raises(ValidationError):
            estimate_win_prob(
                WorldConfig(2, (0.1, 0.2)), MechanismSpec("standard"), ReferenceNoiseModel.gaussian(0.1), replicates=10
            )

    def test_strategy_count_checked(self):
        with pytest.raises(ValidationError):
            estimate_win_prob(
                WorldConfig(2, (0.1, 0.2, 0.3)), MechanismSpec("standard"), None, [DeviationStrategy()], replicates=10
            )

    def test_z_value(self):
        assert z_value(0.95) == pytest.approx(1.959964, abs=1e-6)
        with pytest.raises(ValidationError):
            z_value(1.0)

    def test_intervals_disjoint(self):
        assert intervals_disjoint((0.0, 0.1), (0.2, 0.3))
        assert not intervals_disjoint((0.0, 0.25), (0.2, 0.3))


class TestPresets:
    def test_defaults_exclude_run_arguments(self):
        for name in PRESETS:
            assert not {"replicates", "seed", "threads"} & set(preset_defaults(name))

    def test_overrides_coerce_tuples(self):
        resolved = resolve_overrides("fig1-outflank", {"offsets": [4], "n": 5})
        assert resolved["offsets"] == (4,)
        assert resolved["n"] == 5

    def test_unknown_override(self):
        with pytest.raises(ValidationError):
            resolve_overrides("fig1-outflank", {"bogus": 1})

    def test_equal_reference_noise_shows_no_separation(self):
        payload, rows = thm2_precision(2000, 0, precise_sd=0.5, noisy_sd=0.5)
        assert rows[0]["best_freq"] == rows[1]["best_freq"]
        assert payload["precise_beats_noisy"] is False

    def test_efficiency_curve_arms_share_worlds(self):
        cfg = WorldConfig(10, (0.3,) + (0.6,) * 5)
        noise = ReferenceNoiseModel.gaussian(0.4)
        curve = efficiency_curve(cfg, noise, noise, (1, 3), replicates=300, seed=5)
        a, b = curve.arm("A"), curve.arm("B")
        assert [r.best_freq for r in a] == [r.best_freq for r in b]
        assert curve.tasks_needed[1] == 1


    def test_precise_reference_curve_dominates(self):
        cfg = WorldConfig(10, (0.3,) + (0.6,) * 5)
        curve = efficiency_curve(
            cfg, ReferenceNoiseModel.gaussian(0.1), ReferenceNoiseModel.gaussian(1.0), (1, 5, 10), replicates=2000, seed=6
        )
        a, b = curve.arm("A"), curve.arm("B")
        for precise, noisy in zip(a, b):
            assert precise.m == noisy.m
            assert precise.best_freq > noisy.best_freq
        last_a, last_b = a[-1], b[-1]
        assert intervals_disjoint(
            (last_a.best_freq - last_a.ci_halfwidth, last_a.best_freq + last_a.ci_halfwidth),
            (last_b.best_freq - last_b.ci_halfwidth, last_b.best_freq + last_b.ci_halfwidth),
        )


@pytest.mark.slow
class TestAcceptance:
    def test_truthful_share_and_outflanking(self):
        payload, rows = fig1_outflank(50_000, 0, threads=4, offsets=(2.0, 5.0), anchors=("prior",))
        truthful, two, five = rows
        assert truthful["focal_freq"] == pytest.approx(0.10, abs=0.015)
        assert two["focal_freq"] > 0.38
        assert five["focal_freq"] >= 0.45
        assert payload["uniform_share"] == 0.1

    def test_precise_reference_beats_noisy(self):
        payload, rows = thm2_precision(20_000, 0, threads=4)
        precise, noisy = rows[0], rows[1]
        assert precise["best_freq"] > noisy["best_freq"]
        assert precise["best_freq"] - precise["ci_halfwidth"] > noisy["best_freq"] + noisy["ci_halfwidth"]
        assert payload["precise_beats_noisy"] is True

    def test_oracle_beats_outcome_with_bernoulli_outcomes(self):
        cfg = WorldConfig(10, (0.3,) + (0.6,) * 9, GaussianPrior(0.0, 1.0), BernoulliLogistic())
        oracle = estimate_win_prob(cfg, MechanismSpec("oracular"), replicates=20_000, seed=0, threads=4)
        standard = estimate_win_prob(cfg, MechanismSpec("standard"), replicates=20_000, seed=0, threads=4)
        assert oracle.per_expert_freq[0] > standard.per_expert_freq[0]
        assert intervals_disjoint(oracle.interval(0), standard.interval(0))
