"""The guarded-holdout state machine.

A guard owns a fixed holdout sample and answers adaptively chosen queries
(functions mapping an observation into [0, 1]) with their empirical means,
for as long as it can certify that the accumulated estimation error stays
below ``epsilon`` with probability at least 1 - delta.  Certification uses
the online Rademacher-complexity estimate together with one of the
concentration bounds in :mod:`radabound.bounds`.  When the per-step bound
exceeds delta * (1 - delta) the guard halts permanently: the triggering
query's mean is withheld and every later submission raises
GuardHaltedError.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import rademacher
from .bounds import BoundMethod, overfit_bound
from .errors import ConfigurationError, DomainError, GuardHaltedError
from .seeding import seed_substream, validate_seed


@dataclass(frozen=True)
class HoldoutSample:
    """The m protected observations.  ``points`` is opaque to the guard: it
    only needs to be iterable per observation, or consumable wholesale by a
    vectorized query."""

    points: object
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ConfigurationError(f"holdout sample must be non-empty, got m={self.m}")


@dataclass(frozen=True)
class GuardConfig:
    epsilon: float
    delta: float
    n_vectors: int
    method: BoundMethod = BoundMethod.MCLT
    negation_closure: bool = True
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ConfigurationError(f"epsilon must be in (0, 1), got {self.epsilon}")
        if not 0.0 < self.delta < 1.0:
            raise ConfigurationError(f"delta must be in (0, 1), got {self.delta}")
        if self.n_vectors < 1:
            raise ConfigurationError(f"n_vectors must be >= 1, got {self.n_vectors}")
        if not isinstance(self.method, BoundMethod):
            raise ConfigurationError(f"method must be a BoundMethod, got {self.method!r}")
        validate_seed(self.seed)

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "delta": self.delta,
            "n_vectors": self.n_vectors,
            "method": self.method.value,
            "negation_closure": self.negation_closure,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GuardConfig":
        try:
            method = BoundMethod(d["method"]) if "method" in d else BoundMethod.MCLT
            return cls(
                epsilon=d["epsilon"],
                delta=d["delta"],
                n_vectors=d["n_vectors"],
                method=method,
                negation_closure=d.get("negation_closure", True),
                seed=d.get("seed", 0),
            )
        except KeyError as exc:
            raise ConfigurationError(f"guard config missing field {exc}") from None
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GuardConfig":
        return cls.from_dict(json.loads(text))


class QueryStatus(Enum):
    ANSWERED = "answered"
    HALTED = "halted"


@dataclass(frozen=True)
class QueryOutcome:
    """Result of one submission.  ``empirical_mean`` is None when the guard
    halted on this query (the answer is withheld); ``r_tilde`` and
    ``delta_prime`` are still recorded for diagnostics."""

    empirical_mean: float | None
    r_tilde: float
    delta_prime: float
    status: QueryStatus

    @property
    def answered(self) -> bool:
        return self.status is QueryStatus.ANSWERED


def stopping_threshold(delta: float) -> float:
    """Per-step certification threshold delta * (1 - delta)."""
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must be in (0, 1), got {delta}")
    return delta * (1.0 - delta)


def filtration_bound(p_k: float, p_km1: float) -> float:
    """Offline bound (1 - p_k) / p_km1 on the conditioned overfit probability,
    clamped to [0, 1].  p_km1 = 0 is reported as certain failure (1)."""
    if not 0.0 <= p_k <= 1.0:
        raise DomainError(f"p_k must be a probability, got {p_k}")
    if not 0.0 <= p_km1 <= 1.0:
        raise DomainError(f"p_km1 must be a probability, got {p_km1}")
    if p_km1 == 0.0:
        return 1.0
    return min(1.0, (1.0 - p_k) / p_km1)


class Guard:
    """Single-writer state machine answering queries on a fixed sample."""

    def __init__(self, sample: HoldoutSample, config: GuardConfig):
        if not isinstance(sample, HoldoutSample):
            raise ConfigurationError("sample must be a HoldoutSample")
        self.sample = sample
        self.config = config
        self.rad = rademacher.init_state(
            sample.m,
            config.n_vectors,
            negation_closure=config.negation_closure,
            rng=seed_substream(config.seed, "signs"),
        )
        self.halted = False
        self.history: list[QueryOutcome] = []
        self._threshold = stopping_threshold(config.delta)

    def _evaluate(self, query) -> np.ndarray:
        if getattr(query, "vectorized", False):
            values = np.asarray(query(self.sample.points), dtype=float)
        else:
            values = np.fromiter(
                (float(query(x)) for x in self.sample.points),
                dtype=float,
                count=self.sample.m,
            )
        if values.shape != (self.sample.m,):
            raise DomainError(
                f"query produced {values.shape} values for m={self.sample.m}"
            )
        if values.min() < 0.0 or values.max() > 1.0:
            raise DomainError("query values must lie in [0, 1]")
        return values

    def submit_query(self, query) -> QueryOutcome:
        """Answer one query, or halt permanently if validity cannot be
        certified.  Domain errors (values outside [0,1]) reject the query
        without touching guard state."""
        if self.halted:
            raise GuardHaltedError(
                "guard has halted; statistical validity of further queries "
                "cannot be guaranteed"
            )
        values = self._evaluate(query)
        candidate, estimate = self.rad.preview(values)
        slack = max(0.0, self.config.epsilon - 2.0 * estimate)
        delta_prime = overfit_bound(
            self.config.method, self.sample.m, self.config.n_vectors, slack
        )
        if delta_prime <= self._threshold:
            self.rad.commit(candidate)
            outcome = QueryOutcome(
                empirical_mean=float(values.mean()),
                r_tilde=estimate,
                delta_prime=delta_prime,
                status=QueryStatus.ANSWERED,
            )
        else:
            # Halt: the triggering query is rejected, its mean withheld, and
            # the tentative complexity update is not committed.
            self.halted = True
            outcome = QueryOutcome(
                empirical_mean=None,
                r_tilde=estimate,
                delta_prime=delta_prime,
                status=QueryStatus.HALTED,
            )
        self.history.append(outcome)
        return outcome


def new_guard(sample: HoldoutSample, config: GuardConfig) -> Guard:
    return Guard(sample, config)
