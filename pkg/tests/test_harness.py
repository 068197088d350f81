import math

import numpy as np
import pytest

from radabound.bounds import BoundMethod
from radabound.errors import ConfigurationError, DimensionError
from radabound.guard import GuardConfig
from radabound.harness import (
    LinearClassifier,
    evaluate_on,
    feature_order,
    run_adaptive_analysis,
    run_experiment,
    zero_one_loss_query,
)
from radabound.synthdata import DatasetSpec, LabeledDataset, generate


def make_dataset(features, labels):
    return LabeledDataset(
        features=np.asarray(features, dtype=float), labels=np.asarray(labels)
    )


class TestLinearClassifier:
    def test_sign_zero_is_positive(self):
        w = LinearClassifier(weights=np.zeros(3, dtype=int))
        preds = w.predict(np.random.default_rng(0).normal(size=(5, 3)))
        assert np.all(preds == 1)

    def test_separating_example(self):
        w = LinearClassifier(weights=np.array([1, 0, -1]))
        x = np.array([[2.0, 9.0, 1.0], [0.5, -3.0, 4.0]])
        assert list(w.predict(x)) == [1, -1]

    def test_rejects_fractional_weights(self):
        with pytest.raises(ConfigurationError):
            LinearClassifier(weights=np.array([0.5, 1.0]))

    def test_dimension_mismatch(self):
        w = LinearClassifier(weights=np.array([1, -1]))
        with pytest.raises(DimensionError):
            w.predict(np.zeros((3, 4)))


class TestFeatureOrder:
    def test_biased_feature_comes_first(self):
        rng = np.random.default_rng(3)
        labels = 2 * rng.integers(0, 2, size=5000) - 1
        features = rng.normal(size=(5000, 4))
        features[:, 2] += 0.8 * labels
        order = feature_order(make_dataset(features, labels))
        assert order[0] == 2

    def test_all_zero_features_identity_order(self):
        ds = make_dataset(np.zeros((4, 5)), [1, -1, 1, -1])
        assert list(feature_order(ds)) == [0, 1, 2, 3, 4]

    def test_label_negation_invariance(self):
        rng = np.random.default_rng(4)
        features = rng.normal(size=(200, 6))
        labels = 2 * rng.integers(0, 2, size=200) - 1
        a = feature_order(make_dataset(features, labels))
        b = feature_order(make_dataset(features, -labels))
        assert np.array_equal(a, b)


class TestZeroOneLossQuery:
    def test_zero_classifier_loss_marks_negative_labels(self):
        ds = make_dataset(np.zeros((4, 2)), [1, -1, -1, 1])
        losses = zero_one_loss_query(LinearClassifier(weights=np.zeros(2, dtype=int)))(
            ds
        )
        assert list(losses) == [0.0, 1.0, 1.0, 0.0]

    def test_weight_negation_flips_loss_off_ties(self):
        rng = np.random.default_rng(5)
        features = rng.normal(size=(50, 3))
        labels = 2 * rng.integers(0, 2, size=50) - 1
        ds = make_dataset(features, labels)
        w = np.array([1, -1, 1])
        a = zero_one_loss_query(LinearClassifier(weights=w))(ds)
        b = zero_one_loss_query(LinearClassifier(weights=-w))(ds)
        # continuous features: ties have probability zero
        assert np.array_equal(b, 1.0 - a)

    def test_separating_classifier_zero_loss(self):
        features = np.array([[3.0, 0.1], [-2.0, 0.2], [5.0, -0.3]])
        labels = np.array([1, -1, 1])
        ds = make_dataset(features, labels)
        w = LinearClassifier(weights=np.array([1, 0]))
        assert zero_one_loss_query(w)(ds).sum() == 0.0
        assert evaluate_on(ds, w) == 1.0


def test_evaluate_on_duplicated_rows():
    features = np.array([[1.0, 0.0], [-1.0, 0.0]])
    labels = np.array([1, -1])
    ds = make_dataset(np.vstack([features] * 3), np.tile(labels, 3))
    w = LinearClassifier(weights=np.array([1, 0]))
    base = evaluate_on(make_dataset(features, labels), w)
    assert evaluate_on(ds, w) == base == 1.0


@pytest.fixture(scope="module")
def small_trace():
    spec = DatasetSpec(
        m_train=300, m_holdout=200, m_fresh=500, d=8,
        n_biased=2, bias=0.6, seed=13,
    )
    cfg = GuardConfig(
        epsilon=0.3, delta=0.1, n_vectors=16, method=BoundMethod.MCLT, seed=13
    )
    return spec, run_experiment(spec, cfg)


class TestRunExperiment:

    def test_query_accounting(self, small_trace):
        spec, trace = small_trace
        # baseline query plus two candidates per feature when nothing halts
        assert trace.halt_index is None
        assert len(trace.rows) == 1 + 2 * spec.d
        assert [r.query_index for r in trace.rows] == list(
            range(1, 2 * spec.d + 2)
        )

    def test_accepted_rows_strictly_decrease_loss(self, small_trace):
        _, trace = small_trace
        best = math.inf
        for row in trace.rows:
            loss = 1.0 - row.holdout_acc
            if row.accepted:
                assert loss < best
                best = loss
        assert best == pytest.approx(trace.final_holdout_loss, abs=1e-12)

    def test_guard_statistics_non_decreasing(self, small_trace):
        _, trace = small_trace
        r = [row.r_tilde for row in trace.rows]
        dp = [row.delta_prime for row in trace.rows]
        assert all(a <= b + 1e-15 for a, b in zip(r, r[1:]))
        assert all(a <= b + 1e-15 for a, b in zip(dp, dp[1:]))

    def test_signal_recovered(self, small_trace):
        spec, trace = small_trace
        data = generate(spec)
        final = evaluate_on(data.fresh, trace.final_classifier)
        assert final >= 0.75
        assert np.count_nonzero(trace.final_classifier.weights) >= 1

    def test_deterministic(self, small_trace):
        spec, trace = small_trace
        cfg = trace.guard_config
        again = run_experiment(spec, cfg)
        assert again.rows == trace.rows
        assert np.array_equal(
            again.final_classifier.weights, trace.final_classifier.weights
        )

    def test_no_signal_fresh_accuracy_near_half(self):
        spec = DatasetSpec(
            m_train=200, m_holdout=2000, m_fresh=4000, d=10, seed=29
        )
        cfg = GuardConfig(epsilon=0.4, delta=0.1, n_vectors=8, seed=29)
        trace = run_experiment(spec, cfg)
        data = generate(spec)
        final = evaluate_on(data.fresh, trace.final_classifier)
        assert abs(final - 0.5) <= 4.0 / np.sqrt(spec.m_fresh) + 0.05

    def test_halt_row_shape(self):
        # force an early halt with a tiny budget
        spec = DatasetSpec(
            m_train=100, m_holdout=50, m_fresh=50, d=6, n_biased=2,
            bias=0.8, seed=3,
        )
        cfg = GuardConfig(
            epsilon=0.02, delta=0.1, n_vectors=16,
            method=BoundMethod.BERNSTEIN_SINGLE, seed=3,
        )
        trace = run_experiment(spec, cfg)
        assert trace.halt_index is not None
        last = trace.rows[-1]
        assert last.halted
        assert math.isnan(last.holdout_acc)
        assert not last.accepted
        assert last.query_index == trace.halt_index == len(trace.rows)
        assert not any(r.halted for r in trace.rows[:-1])

    def test_dimension_mismatch_rejected(self):
        data = generate(DatasetSpec(m_train=5, m_holdout=5, m_fresh=5, d=3, seed=1))
        other = generate(DatasetSpec(m_train=5, m_holdout=5, m_fresh=5, d=4, seed=1))
        cfg = GuardConfig(epsilon=0.5, delta=0.1, n_vectors=4, seed=1)
        with pytest.raises(DimensionError):
            run_adaptive_analysis(data.train, other.holdout, data.fresh, cfg)
