import math

import numpy as np
import pytest

from margin_guard import (
    Partition,
    PerturbationModel,
    PointConfig,
    assign_nearest,
    expected_distance_bound,
    expected_switch_bound,
    induced_partition,
    label_pair_distance,
    monte_carlo,
    partition_distance,
    sample_perturbation,
    sweep_table,
    switch_probability_bound,
    trial_rng,
)
from margin_guard.stochastic import _noise


class TestModelValidation:
    def test_bounded_disk_needs_positive_radius(self):
        with pytest.raises(ValueError):
            PerturbationModel.bounded_disk(0.0)
        with pytest.raises(ValueError):
            PerturbationModel.bounded_disk(-1.0)

    def test_gaussian_allows_degenerate_zero(self):
        assert PerturbationModel.gaussian(0.0).scale == 0.0
        with pytest.raises(ValueError):
            PerturbationModel.gaussian(-0.1)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            PerturbationModel(kind="laplace", scale=1.0, dim=2)

    def test_dimension_mismatch_rejected(self, anchored_config):
        model = PerturbationModel.bounded_disk(0.1, dim=3)
        with pytest.raises(ValueError, match="dimension"):
            sample_perturbation(model, anchored_config, 0)


class TestSampling:
    def test_bounded_norms_never_exceed_radius(self):
        model = PerturbationModel.bounded_disk(0.37, dim=3)
        rng = np.random.default_rng(0)
        for _ in range(100):
            eta = _noise(model, 100, rng)
            assert (np.linalg.norm(eta, axis=1) <= 0.37).all()

    def test_gaussian_zero_scale_is_identity(self, anchored_config):
        model = PerturbationModel.gaussian(0.0, dim=2)
        out = sample_perturbation(model, anchored_config, 123)
        assert np.array_equal(out.points, anchored_config.points)

    def test_fixed_seed_reproduces(self, anchored_config):
        model = PerturbationModel.gaussian(0.3, dim=2)
        a = sample_perturbation(model, anchored_config, 99)
        b = sample_perturbation(model, anchored_config, 99)
        assert np.array_equal(a.points, b.points)

    def test_trial_streams_are_stable_and_distinct(self):
        a = trial_rng(7, 0).random(4)
        b = trial_rng(7, 0).random(4)
        c = trial_rng(7, 1).random(4)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)


class TestSwitchProbabilityBound:
    def test_zero_margin_gives_one(self):
        assert switch_probability_bound(0.0, PerturbationModel.bounded_disk(1.0)) == 1.0
        assert switch_probability_bound(0.0, PerturbationModel.gaussian(1.0)) == 1.0

    def test_disk_area_ratio(self):
        model = PerturbationModel.bounded_disk(1.0, dim=2)
        assert switch_probability_bound(1.0, model) == pytest.approx(0.75)

    def test_ball_general_dimension(self):
        model = PerturbationModel.bounded_disk(1.0, dim=3)
        assert switch_probability_bound(1.0, model) == pytest.approx(1.0 - 0.5**3)

    def test_margin_beyond_noise_support(self):
        model = PerturbationModel.bounded_disk(0.3, dim=2)
        assert switch_probability_bound(0.61, model) == 0.0
        assert switch_probability_bound(0.6, model) == 0.0

    def test_gaussian_closed_form_d2(self):
        model = PerturbationModel.gaussian(1.0, dim=2)
        assert switch_probability_bound(2.0, model) == pytest.approx(math.exp(-0.5), rel=1e-12)

    def test_gaussian_zero_scale_tail(self):
        model = PerturbationModel.gaussian(0.0, dim=2)
        assert switch_probability_bound(0.5, model) == 0.0

    def test_negative_margin_rejected(self):
        with pytest.raises(ValueError):
            switch_probability_bound(-0.1, PerturbationModel.gaussian(1.0))

    def test_monotone_in_margin(self):
        model = PerturbationModel.gaussian(0.5, dim=3)
        values = [switch_probability_bound(g, model) for g in np.linspace(0, 4, 30)]
        assert all(a >= b for a, b in zip(values, values[1:]))

    def test_matches_small_oracle(self):
        # coarse Monte Carlo sanity check; the full grid runs in acceptance
        rng = np.random.default_rng(202)
        model = PerturbationModel.gaussian(0.5, dim=3)
        samples = np.linalg.norm(rng.standard_normal((200_000, 3)) * 0.5, axis=1)
        for gamma in (0.3, 1.0, 2.0):
            estimate = float((samples >= gamma / 2.0).mean())
            bound = switch_probability_bound(gamma, model)
            stderr = math.sqrt(max(bound * (1 - bound), 1e-12) / samples.size)
            assert abs(estimate - bound) <= 4 * stderr + 1e-9


class TestExpectedBounds:
    def test_supported_noise_below_margins_gives_zero(self, anchored_assignment):
        model = PerturbationModel.bounded_disk(0.09, dim=2)  # 2 rho < 0.2
        assert expected_switch_bound(anchored_assignment, model) == 0.0
        assert expected_distance_bound(anchored_assignment, model) == 0.0

    def test_anchored_config_example(self, anchored_assignment):
        model = PerturbationModel.bounded_disk(0.3, dim=2)
        assert expected_switch_bound(anchored_assignment, model) == pytest.approx(8.0 / 9.0)
        assert expected_distance_bound(anchored_assignment, model) == pytest.approx(8.0 / 9.0)

    def test_all_zero_margins_count_everything(self, two_centers):
        cfg = PointConfig([[0.0, -1.0], [0.0, 0.5], [0.0, 2.0]])
        a = assign_nearest(cfg, two_centers)
        assert a.min_margin == 0.0
        model = PerturbationModel.bounded_disk(0.5, dim=2)
        assert expected_switch_bound(a, model) == 3.0

    def test_distance_bound_caps_at_one(self, two_centers):
        cfg = PointConfig([[0.0, -1.0], [0.0, 1.0]])
        a = assign_nearest(cfg, two_centers)
        model = PerturbationModel.gaussian(1.0, dim=2)
        assert expected_distance_bound(a, model) == 1.0


class TestLabelPairDistance:
    def test_matches_partition_distance(self):
        rng = np.random.default_rng(44)
        for _ in range(200):
            n = int(rng.integers(2, 15))
            la = rng.integers(1, 5, n)
            lb = rng.integers(1, 5, n)
            expect = partition_distance(Partition.from_labels(la), Partition.from_labels(lb))
            assert label_pair_distance(la, lb) == expect

    def test_rejects_mismatched_lengths(self):
        with pytest.raises(ValueError):
            label_pair_distance(np.array([1, 2]), np.array([1, 2, 3]))


class TestPerTrialInvariants:
    def test_necessity_and_hard_bound_every_trial(self, anchored_config, two_centers):
        base = assign_nearest(anchored_config, two_centers)
        model = PerturbationModel.gaussian(0.25, dim=2)
        n = anchored_config.n
        for t in range(500):
            eta = _noise(model, n, trial_rng(4242, t))
            perturbed = PointConfig(anchored_config.points + eta)
            after = assign_nearest(perturbed, two_centers)
            switched = base.labels != after.labels
            # a switch requires noise at least half the margin, exactly
            norms = np.linalg.norm(eta, axis=1)
            assert (norms[switched] >= base.margins[switched] / 2.0).all()
            # per-trial distance never exceeds the switched-count bound
            d = partition_distance(induced_partition(base), induced_partition(after))
            assert d <= min(1.0, 2.0 * int(switched.sum()) / (n - 1))


class TestMonteCarlo:
    def test_no_switches_when_noise_below_margins(self, anchored_config, two_centers):
        model = PerturbationModel.bounded_disk(0.09, dim=2)
        report = monte_carlo(anchored_config, two_centers, model, trials=300, seed=1)
        assert (report.per_index_switch_frequency == 0.0).all()
        assert report.mean_switched_count == 0.0
        assert report.mean_partition_distance == 0.0
        assert (report.trial_distances == 0.0).all()

    def test_linearity_identity_exact(self, anchored_config, two_centers):
        model = PerturbationModel.gaussian(0.2, dim=2)
        report = monte_carlo(anchored_config, two_centers, model, trials=400, seed=5)
        assert report.mean_switched_count == float(report.per_index_switch_frequency.sum())
        assert ((0.0 <= report.per_index_switch_frequency) & (report.per_index_switch_frequency <= 1.0)).all()

    def test_bit_reproducible(self, anchored_config, two_centers):
        model = PerturbationModel.gaussian(0.1, dim=2)
        a = monte_carlo(anchored_config, two_centers, model, trials=50, seed=9)
        b = monte_carlo(anchored_config, two_centers, model, trials=50, seed=9)
        assert np.array_equal(a.per_index_switch_frequency, b.per_index_switch_frequency)
        assert np.array_equal(a.trial_distances, b.trial_distances)
        assert a.to_json_dict() == b.to_json_dict()

    def test_single_trial_allowed(self, anchored_config, two_centers):
        model = PerturbationModel.bounded_disk(0.01, dim=2)
        report = monte_carlo(anchored_config, two_centers, model, trials=1, seed=0)
        assert report.trials == 1

    def test_trials_validation(self, anchored_config, two_centers):
        model = PerturbationModel.bounded_disk(0.1, dim=2)
        with pytest.raises(ValueError):
            monte_carlo(anchored_config, two_centers, model, trials=0, seed=0)

    def test_aggregate_bounds_attached(self, anchored_config, two_centers):
        model = PerturbationModel.bounded_disk(0.3, dim=2)
        report = monte_carlo(anchored_config, two_centers, model, trials=100, seed=3)
        sw, dist = report.aggregate_bounds
        assert sw == pytest.approx(8.0 / 9.0)
        assert dist == pytest.approx(8.0 / 9.0)
        assert report.per_index_bound == pytest.approx([0.0, 0.0, 8.0 / 9.0])


class TestSweep:
    def test_zero_region_below_threshold(self, anchored_config, two_centers):
        # min margin 0.2 -> threshold 0.1; everything below stays at zero
        grid = [0.02, 0.05, 0.09]
        result = sweep_table(anchored_config, two_centers, grid, trials=40, seed=2)
        assert result.threshold == pytest.approx(0.1)
        for row in result.rows:
            assert row.below_threshold
            assert row.mean_distance == 0.0
            assert row.max_distance == 0.0

    def test_rows_marked_against_threshold(self, anchored_config, two_centers):
        result = sweep_table(anchored_config, two_centers, [0.05, 0.5], trials=20, seed=2)
        assert [r.below_threshold for r in result.rows] == [True, False]

    def test_extending_grid_preserves_rows(self, anchored_config, two_centers):
        short = sweep_table(anchored_config, two_centers, [0.05, 0.3], trials=25, seed=6)
        long = sweep_table(anchored_config, two_centers, [0.05, 0.3, 0.7], trials=25, seed=6)
        for a, b in zip(short.rows, long.rows):
            assert a == b

    def test_grid_validation(self, anchored_config, two_centers):
        with pytest.raises(ValueError):
            sweep_table(anchored_config, two_centers, [0.1], trials=10, seed=0)
        with pytest.raises(ValueError):
            sweep_table(anchored_config, two_centers, [0.1, -0.2], trials=10, seed=0)
        with pytest.raises(ValueError):
            sweep_table(anchored_config, two_centers, [0.1, 0.2], trials=0, seed=0)

    def test_reproducible(self, anchored_config, two_centers):
        a = sweep_table(anchored_config, two_centers, [0.05, 0.2], trials=10, seed=12)
        b = sweep_table(anchored_config, two_centers, [0.05, 0.2], trials=10, seed=12)
        assert a == b
