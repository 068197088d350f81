"""Online Monte-Carlo estimation of the empirical Rademacher complexity of a
growing family of [0,1]-valued query functions.

The estimator fixes a matrix of random sign vectors once, then maintains one
running supremum per sign vector: each new query contributes its correlation
with every sign vector, and the estimate is the mean of the per-vector
suprema.  With ``negation_closure`` (the default) correlations enter through
their absolute value, which corresponds to treating the family as containing
the negation of every query.

``exact_empirical_rademacher`` is a brute-force oracle over all 2^m sign
vectors, used for testing the estimator; it refuses m > 20.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DimensionError, DomainError

_ENUMERATION_LIMIT = 20


@dataclass(frozen=True)
class SignMatrix:
    """A fixed matrix of n_vectors x m entries in {-1, +1}."""

    entries: np.ndarray

    def __post_init__(self):
        e = self.entries
        if e.ndim != 2:
            raise ConfigurationError("sign matrix must be two-dimensional")
        if not np.all(np.abs(e) == 1.0):
            raise ConfigurationError("sign matrix entries must be -1 or +1")
        e.setflags(write=False)

    @property
    def n_vectors(self) -> int:
        return self.entries.shape[0]

    @property
    def m(self) -> int:
        return self.entries.shape[1]


@dataclass
class RademacherState:
    """Sign matrix plus per-vector running suprema and the query count."""

    signs: SignMatrix
    negation_closure: bool = True
    running_sup: np.ndarray = field(default=None)  # type: ignore[assignment]
    query_count: int = 0

    def __post_init__(self):
        if self.running_sup is None:
            self.running_sup = np.zeros(self.signs.n_vectors)

    @property
    def m(self) -> int:
        return self.signs.m

    @property
    def n_vectors(self) -> int:
        return self.signs.n_vectors

    def estimate(self) -> float:
        """Current complexity estimate: mean of the per-vector suprema."""
        return float(self.running_sup.mean())

    def _validate(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        if values.shape != (self.m,):
            raise DimensionError(
                f"expected {self.m} query values, got shape {values.shape}"
            )
        if values.min(initial=0.0) < 0.0 or values.max(initial=0.0) > 1.0:
            raise DomainError("query values must lie in [0, 1]")
        return values

    def preview(self, values) -> tuple[np.ndarray, float]:
        """Per-vector suprema and estimate as they would be after absorbing
        ``values``, without mutating the state."""
        values = self._validate(values)
        corr = self.signs.entries @ values / self.m
        if self.negation_closure:
            corr = np.abs(corr)
        candidate = np.maximum(self.running_sup, corr)
        return candidate, float(candidate.mean())

    def commit(self, candidate: np.ndarray) -> None:
        """Adopt suprema previously produced by preview()."""
        self.running_sup = candidate
        self.query_count += 1

    def update(self, values) -> float:
        """Absorb one query's values and return the new estimate."""
        candidate, estimate = self.preview(values)
        self.commit(candidate)
        return estimate


def init_state(
    m: int,
    n_vectors: int,
    negation_closure: bool = True,
    rng: np.random.Generator | None = None,
) -> RademacherState:
    """Draw the fixed sign matrix and start with all suprema at zero.

    Signs are iid uniform on {-1, +1} from ``rng``; the same generator state
    always yields the same matrix.
    """
    if m < 1 or n_vectors < 1:
        raise ConfigurationError(
            f"need m >= 1 and n_vectors >= 1, got m={m}, n_vectors={n_vectors}"
        )
    if rng is None:
        rng = np.random.default_rng()
    entries = 2.0 * rng.integers(0, 2, size=(n_vectors, m)).astype(float) - 1.0
    return RademacherState(signs=SignMatrix(entries), negation_closure=negation_closure)


def exact_empirical_rademacher(value_matrix, negation_closure: bool = True) -> float:
    """Exact empirical Rademacher complexity by enumerating all 2^m signs.

    ``value_matrix`` is k x m with entries in [0, 1], one row per function
    evaluated on the sample.  With ``negation_closure`` the supremum also
    ranges over the negated functions.  Refuses m > 20.
    """
    values = np.asarray(value_matrix, dtype=float)
    if values.ndim != 2:
        raise DimensionError("value matrix must be two-dimensional (k x m)")
    k, m = values.shape
    if k < 1 or m < 1:
        raise DimensionError("value matrix must be non-empty")
    if m > _ENUMERATION_LIMIT:
        raise DomainError(
            f"enumeration limited to m <= {_ENUMERATION_LIMIT}, got m={m}"
        )
    if values.min() < 0.0 or values.max() > 1.0:
        raise DomainError("function values must lie in [0, 1]")

    total = 0.0
    for code in range(2**m):
        bits = (code >> np.arange(m)) & 1
        sigma = 2.0 * bits - 1.0
        corr = values @ sigma / m
        if negation_closure:
            sup = float(np.abs(corr).max())
        else:
            sup = float(corr.max())
        total += sup
    return total / 2**m
