"""Deterministic synthetic data for the guard experiments.

Each point has d Gaussian features and a uniform random label in {-1, +1}.
In the signal scenario a fixed subset of features is shifted by
``bias * label``, creating a real feature/label correlation; with
``n_biased = 0`` labels are independent of all features and the true 0-1 loss
of every fixed classifier is exactly 0.5.

Training, holdout and fresh sets draw from disjoint substreams of the master
seed, so they are independent and individually reproducible.  Feature columns
are shuffled by a seeded permutation so learners cannot exploit the canonical
placement of the biased columns; the permutation is recorded on the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .seeding import seed_substream, validate_seed

NORMAL_SAMPLER_IDENTITY = "marsaglia-polar"


@dataclass(frozen=True)
class DatasetSpec:
    m_train: int
    m_holdout: int
    m_fresh: int
    d: int
    variance: float = 1.0
    n_biased: int = 0
    bias: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if min(self.m_train, self.m_holdout, self.m_fresh) < 1:
            raise ConfigurationError("all set sizes must be >= 1")
        if self.d < 1:
            raise ConfigurationError(f"feature count must be >= 1, got {self.d}")
        if not self.variance > 0.0:
            raise ConfigurationError(f"variance must be > 0, got {self.variance}")
        if not 0 <= self.n_biased <= self.d:
            raise ConfigurationError(
                f"n_biased must be in [0, d], got {self.n_biased} with d={self.d}"
            )
        validate_seed(self.seed)

    def to_dict(self) -> dict:
        return {
            "m_train": self.m_train,
            "m_holdout": self.m_holdout,
            "m_fresh": self.m_fresh,
            "d": self.d,
            "variance": self.variance,
            "n_biased": self.n_biased,
            "bias": self.bias,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DatasetSpec":
        try:
            return cls(
                m_train=d["m_train"],
                m_holdout=d["m_holdout"],
                m_fresh=d["m_fresh"],
                d=d["d"],
                variance=d.get("variance", 1.0),
                n_biased=d.get("n_biased", 0),
                bias=d.get("bias", 0.0),
                seed=d.get("seed", 0),
            )
        except KeyError as exc:
            raise ConfigurationError(f"dataset spec missing field {exc}") from None


@dataclass(frozen=True)
class LabeledDataset:
    features: np.ndarray  # (n, d) real-valued
    labels: np.ndarray  # (n,) in {-1, +1}

    def __post_init__(self):
        if self.features.ndim != 2 or self.labels.ndim != 1:
            raise ConfigurationError("features must be (n, d), labels (n,)")
        if self.features.shape[0] != self.labels.shape[0]:
            raise ConfigurationError("feature and label row counts disagree")
        if not np.all(np.abs(self.labels) == 1):
            raise ConfigurationError("labels must be -1 or +1")

    def __len__(self) -> int:
        return self.features.shape[0]

    def __iter__(self):
        # Per-point view: (feature row, label), for non-vectorized queries.
        for row, label in zip(self.features, self.labels):
            yield row, label


@dataclass(frozen=True)
class SyntheticData:
    train: LabeledDataset
    holdout: LabeledDataset
    fresh: LabeledDataset
    column_permutation: np.ndarray

    def __iter__(self):
        return iter((self.train, self.holdout, self.fresh))


def standard_normals(rng: np.random.Generator, n: int) -> np.ndarray:
    """n standard normal variates via the Marsaglia polar transform.

    Implemented on top of the generator's uniform stream so the sampling
    algorithm itself is pinned independently of the numpy version's ziggurat.
    """
    out = np.empty(n)
    filled = 0
    while filled < n:
        need = n - filled
        batch = int(need * 0.7) + 32  # ~pi/4 pair acceptance, 2 values/pair
        u = rng.uniform(-1.0, 1.0, size=batch)
        v = rng.uniform(-1.0, 1.0, size=batch)
        s = u * u + v * v
        keep = (s > 0.0) & (s < 1.0)
        u, v, s = u[keep], v[keep], s[keep]
        factor = np.sqrt(-2.0 * np.log(s) / s)
        pair = np.empty(2 * u.size)
        pair[0::2] = u * factor
        pair[1::2] = v * factor
        take = min(pair.size, need)
        out[filled : filled + take] = pair[:take]
        filled += take
    return out


def standard_normal(rng: np.random.Generator) -> float:
    return float(standard_normals(rng, 1)[0])


def _draw_labels(rng: np.random.Generator, n: int) -> np.ndarray:
    return 2 * rng.integers(0, 2, size=n) - 1


def generate(spec: DatasetSpec) -> SyntheticData:
    """Generate the train/holdout/fresh triple for ``spec``.

    Labels for the three sets come from the shared "labels" substream in the
    fixed order train, holdout, fresh; features from per-set substreams; the
    column permutation from its own substream.  Identical specs yield
    bit-identical data.
    """
    label_rng = seed_substream(spec.seed, "labels")
    scale = math.sqrt(spec.variance)
    perm = seed_substream(spec.seed, "permutation").permutation(spec.d)

    sets = {}
    for name, n in (
        ("train", spec.m_train),
        ("holdout", spec.m_holdout),
        ("fresh", spec.m_fresh),
    ):
        labels = _draw_labels(label_rng, n)
        features = standard_normals(seed_substream(spec.seed, name), n * spec.d)
        features = features.reshape(n, spec.d) * scale
        if spec.n_biased > 0:
            features[:, : spec.n_biased] += spec.bias * labels[:, None]
        sets[name] = LabeledDataset(features=features[:, perm], labels=labels)

    return SyntheticData(
        train=sets["train"],
        holdout=sets["holdout"],
        fresh=sets["fresh"],
        column_permutation=perm,
    )


def dump_csv(dataset: LabeledDataset, path) -> None:
    """Debug dump: one row per point, d feature columns then `label`."""
    d = dataset.features.shape[1]
    header = ",".join(f"f{i}" for i in range(d)) + ",label"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for row, label in dataset:
            fh.write(",".join(f"{v:.10g}" for v in row) + f",{int(label)}\n")
