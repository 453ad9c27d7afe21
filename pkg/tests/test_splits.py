import numpy as np
import pytest

from activesplit.splits import (
    SplitPlan,
    TrainTestSplit,
    bootstrap_split,
    draw_splits,
    kfold_splits,
    quantile_bootstrap_split,
    quantile_train_size,
)
from activesplit.data import parse_dataset


class TestTrainTestSplit:
    def test_rejects_overlap(self):
        with pytest.raises(ValueError, match="overlap"):
            TrainTestSplit(np.array([0, 1]), np.array([1, 2]))

    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="nonempty"):
            TrainTestSplit(np.array([], dtype=np.int64), np.array([1]))

    def test_json(self):
        s = TrainTestSplit(np.array([0, 0, 2]), np.array([1, 3]))
        assert s.to_json() == {"train": [0, 0, 2], "test": [1, 3]}


class TestKFold:
    def test_partition(self):
        splits = kfold_splits(10, 5, seed=1)
        assert len(splits) == 5
        all_test = np.concatenate([s.test for s in splits])
        assert sorted(all_test.tolist()) == list(range(10))
        for s in splits:
            assert s.test.size == 2
            assert s.train.size == 8
            assert np.intersect1d(s.train, s.test).size == 0

    def test_deterministic(self):
        a = kfold_splits(23, 4, seed=7)
        b = kfold_splits(23, 4, seed=7)
        for s, t in zip(a, b):
            assert np.array_equal(s.train, t.train)
            assert np.array_equal(s.test, t.test)

    def test_leave_one_out(self):
        splits = kfold_splits(10, 10, seed=0)
        assert all(s.test.size == 1 for s in splits)

    def test_uneven_sizes_differ_by_at_most_one(self):
        splits = kfold_splits(11, 3, seed=3)
        sizes = sorted(s.test.size for s in splits)
        assert sizes == [3, 4, 4]

    @pytest.mark.parametrize("k", [1, 0, 11])
    def test_domain_errors(self, k):
        with pytest.raises(ValueError):
            kfold_splits(10, k, seed=0)


class TestBootstrap:
    def test_basic_shape(self):
        s = bootstrap_split(50, seed=3)
        assert s.train.size == 50
        assert s.test.size > 0
        assert np.intersect1d(s.train, s.test).size == 0
        oob = np.setdiff1d(np.arange(50), s.train)
        assert np.array_equal(s.test, oob)

    def test_deterministic(self):
        a = bootstrap_split(100, seed=11)
        b = bootstrap_split(100, seed=11)
        assert np.array_equal(a.train, b.train)
        assert np.array_equal(a.test, b.test)

    def test_oob_fraction_near_one_over_e(self):
        # analytic limit (1 - 1/n)^n -> 1/e ~ 0.368
        n = 1000
        fractions = [bootstrap_split(n, seed=s).test.size / n for s in range(400)]
        assert 0.33 <= np.mean(fractions) <= 0.41

    def test_distinct_train_fraction(self):
        n = 500
        distinct = [np.unique(bootstrap_split(n, seed=s).train).size / n
                    for s in range(400)]
        assert abs(np.mean(distinct) - (1 - 1 / np.e)) < 0.04

    def test_too_small(self):
        with pytest.raises(ValueError):
            bootstrap_split(9, seed=0)


class TestQuantileBootstrap:
    def test_a2a_geometry(self, corpus_dir):
        ds = parse_dataset(corpus_dir / "A2a.csv")
        s = quantile_bootstrap_split(ds, 0.4, seed=5)
        assert quantile_train_size(203, 0.4) == 81
        assert s.train.size == 81
        assert s.test.size == 122
        assert np.array_equal(s.test, np.arange(81, 203))

    def test_activity_separation(self, tiny_dataset):
        s = quantile_bootstrap_split(tiny_dataset, 0.5, seed=9)
        train_max = tiny_dataset.activities[s.train].max()
        test_min = tiny_dataset.activities[s.test].min()
        assert test_min >= train_max

    def test_fixed_test_across_seeds(self, tiny_dataset):
        tests = {tuple(quantile_bootstrap_split(tiny_dataset, 0.5, seed=s).test)
                 for s in range(25)}
        assert len(tests) == 1

    def test_train_drawn_from_low_slice(self, corpus_dir):
        ds = parse_dataset(corpus_dir / "Dopamine.csv")
        s = quantile_bootstrap_split(ds, 0.9, seed=2)
        n_q = quantile_train_size(ds.n, 0.9)
        assert s.train.size == n_q
        assert s.train.max() < n_q

    def test_degenerate_sides_rejected(self, tiny_dataset):
        with pytest.raises(ValueError):
            quantile_bootstrap_split(tiny_dataset, 0.2, seed=0)  # train side 2 < 5
        with pytest.raises(ValueError):
            quantile_bootstrap_split(tiny_dataset, 0.95, seed=0)


class TestSplitPlan:
    def test_labels(self):
        assert SplitPlan.kfold(5).label() == "kfold5"
        assert SplitPlan.bootstrap().label() == "bootstrap"
        assert SplitPlan.quantile_bootstrap(0.4).label() == "qboot0.4"

    def test_json_roundtrip(self):
        for plan in (SplitPlan.kfold(7), SplitPlan.bootstrap(),
                     SplitPlan.quantile_bootstrap(0.8)):
            again = SplitPlan.from_json(plan.to_json())
            assert again.kind == plan.kind
            assert again.k == plan.k
            assert again.q == plan.q

    def test_from_json_rejects_unknown(self):
        with pytest.raises(ValueError):
            SplitPlan.from_json({"mystery": {}})
        with pytest.raises(ValueError):
            SplitPlan.from_json({"bootstrap": {"oops": 1}})

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            SplitPlan.kfold(1)
        with pytest.raises(ValueError):
            SplitPlan.quantile_bootstrap(1.2)

    def test_draw_splits_kfold_ignores_iterations(self, tiny_dataset):
        splits = draw_splits(SplitPlan.kfold(3), tiny_dataset, iterations=99, seed=1)
        assert len(splits) == 3

    def test_draw_splits_deterministic(self, tiny_dataset):
        plan = SplitPlan.quantile_bootstrap(0.5)
        a = draw_splits(plan, tiny_dataset, 4, seed=3)
        b = draw_splits(plan, tiny_dataset, 4, seed=3)
        for s, t in zip(a, b):
            assert np.array_equal(s.train, t.train)
