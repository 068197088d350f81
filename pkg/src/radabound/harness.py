"""Adaptive experiment: greedy feature selection against a guarded holdout.

Features are ordered once by the absolute value of their training-set
correlation with the labels.  Starting from the all-zero classifier, the
learner tries weight -1 then +1 for each feature in order, submits each
candidate's 0-1 loss to the guard, and keeps a candidate only when its
released holdout loss strictly improves on the current best.  The learner
sees nothing but released means; fresh-set accuracy is computed outside the
guard as ground truth for the trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DimensionError
from .guard import Guard, GuardConfig, HoldoutSample
from .synthdata import DatasetSpec, LabeledDataset, generate


@dataclass(frozen=True)
class LinearClassifier:
    """Sign-of-dot-product classifier with weights in {-1, 0, +1}.

    Prediction is sign(w . x) with sign(0) = +1.
    """

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights)
        if w.ndim != 1 or not np.all(np.isin(w, (-1, 0, 1))):
            raise ConfigurationError("weights must be a 1-d vector over {-1, 0, +1}")

    def predict(self, features: np.ndarray) -> np.ndarray:
        if features.shape[-1] != self.weights.shape[0]:
            raise DimensionError(
                f"classifier has {self.weights.shape[0]} weights, features have "
                f"{features.shape[-1]} columns"
            )
        scores = features @ self.weights
        return np.where(scores >= 0, 1, -1)


@dataclass(frozen=True)
class TraceRow:
    query_index: int
    holdout_acc: float  # NaN on the halting row (released mean withheld)
    fresh_acc: float
    r_tilde: float
    delta_prime: float
    accepted: bool
    halted: bool


@dataclass(frozen=True)
class ExperimentTrace:
    rows: list[TraceRow]
    halt_index: int | None
    final_classifier: LinearClassifier
    final_holdout_loss: float
    dataset_spec: DatasetSpec
    guard_config: GuardConfig


def feature_order(train: LabeledDataset) -> np.ndarray:
    """Feature indices sorted by |correlation with the label| descending,
    ties broken by ascending index."""
    if len(train) < 1:
        raise ConfigurationError("training set must be non-empty")
    corr = train.features.T @ train.labels / len(train)
    return np.argsort(-np.abs(corr), kind="stable")


def zero_one_loss_query(w: LinearClassifier):
    """Vectorized query returning the 0-1 loss of ``w`` on each point."""

    def query(dataset: LabeledDataset) -> np.ndarray:
        predictions = w.predict(dataset.features)
        return (predictions != dataset.labels).astype(float)

    query.vectorized = True
    return query


def evaluate_on(dataset: LabeledDataset, w: LinearClassifier) -> float:
    """Accuracy (1 - mean 0-1 loss) of ``w`` over ``dataset``."""
    return float(np.mean(w.predict(dataset.features) == dataset.labels))


def _loss_query_from_scores(scores: np.ndarray, labels: np.ndarray):
    # The guard evaluates queries itself; this closure reuses the harness's
    # incrementally maintained score vector instead of a fresh matmul.
    def query(_dataset) -> np.ndarray:
        predictions = np.where(scores >= 0, 1, -1)
        return (predictions != labels).astype(float)

    query.vectorized = True
    return query


def run_adaptive_analysis(
    train: LabeledDataset,
    holdout: LabeledDataset,
    fresh: LabeledDataset,
    guard_config: GuardConfig,
    dataset_spec: DatasetSpec | None = None,
) -> ExperimentTrace:
    """Run the greedy classifier search on pre-generated data."""
    d = train.features.shape[1]
    if holdout.features.shape[1] != d or fresh.features.shape[1] != d:
        raise DimensionError("train/holdout/fresh feature counts disagree")

    guard = Guard(HoldoutSample(points=holdout, m=len(holdout)), guard_config)
    order = feature_order(train)

    weights = np.zeros(d, dtype=np.int8)
    scores_h = np.zeros(len(holdout))
    scores_f = np.zeros(len(fresh))
    rows: list[TraceRow] = []
    halt_index: int | None = None
    query_index = 0
    best_loss = math.inf

    def fresh_accuracy(scores: np.ndarray) -> float:
        return float(np.mean(np.where(scores >= 0, 1, -1) == fresh.labels))

    def submit(cand_scores_h, cand_scores_f):
        """Submit the candidate's loss; returns (outcome, accepted) and
        appends the trace row.  accepted is None when the guard halted."""
        nonlocal query_index, halt_index, best_loss
        query_index += 1
        outcome = guard.submit_query(
            _loss_query_from_scores(cand_scores_h, holdout.labels)
        )
        if outcome.answered:
            accepted = outcome.empirical_mean < best_loss
            if accepted:
                best_loss = outcome.empirical_mean
            holdout_acc = 1.0 - outcome.empirical_mean
        else:
            accepted = None
            halt_index = query_index
            holdout_acc = math.nan
        rows.append(
            TraceRow(
                query_index=query_index,
                holdout_acc=holdout_acc,
                fresh_acc=fresh_accuracy(cand_scores_f),
                r_tilde=outcome.r_tilde,
                delta_prime=outcome.delta_prime,
                accepted=bool(accepted),
                halted=not outcome.answered,
            )
        )
        return accepted

    # Baseline query: the all-zero classifier (predicts +1 everywhere).
    if submit(scores_h, scores_f) is not None:
        for i in order:
            col_h = holdout.features[:, i]
            col_f = fresh.features[:, i]
            chosen = 0
            halted = False
            for cand in (-1, 1):
                accepted = submit(scores_h + cand * col_h, scores_f + cand * col_f)
                if accepted is None:
                    halted = True
                    break
                if accepted:
                    chosen = cand
            if chosen != 0:
                weights[i] = chosen
                scores_h = scores_h + chosen * col_h
                scores_f = scores_f + chosen * col_f
            if halted:
                break

    return ExperimentTrace(
        rows=rows,
        halt_index=halt_index,
        final_classifier=LinearClassifier(weights=weights.astype(int)),
        final_holdout_loss=best_loss,
        dataset_spec=dataset_spec,
        guard_config=guard_config,
    )


def run_experiment(spec: DatasetSpec, guard_config: GuardConfig) -> ExperimentTrace:
    """Generate data per ``spec`` and run the adaptive analysis."""
    data = generate(spec)
    return run_adaptive_analysis(
        data.train, data.holdout, data.fresh, guard_config, dataset_spec=spec
    )
