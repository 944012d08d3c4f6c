"""Seeded generators for the four simulated scenarios.

Every random draw comes from a Philox stream keyed by ``(seed, replication,
purpose)``, so replications are independent of each other and of the order
in which they run.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .data import Dataset
from .baselines import PopulationModel


class Stream(IntEnum):
    GENERATE = 0
    MASK = 1
    SUBSAMPLE = 2
    THEORY = 3


def rng_for(seed: int, rep: int = 0, purpose: int = Stream.GENERATE) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(rep), int(purpose)])))


EXAMPLES = ("ex1", "ex2", "ex3", "ex4")
SIGNAL_SWEEP = (1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.8, 2.0, 2.5)
DIMENSION_SWEEP = (20, 30, 40, 50, 100, 200, 500)
# training sizes listed for the dimension sweep; they grow like sqrt(d) but
# the published list is rounded inconsistently (d=30 gives 244, not 245)
_SWEEP_TRAIN_SIZES = {20: 200, 30: 244, 40: 283, 50: 316, 100: 447, 200: 632, 500: 1000}
BLOCK = 10
BLOCK_SHIFT = 1 / 2.7


def train_size_for_dimension(d: int) -> int:
    if d in _SWEEP_TRAIN_SIZES:
        return _SWEEP_TRAIN_SIZES[d]
    return int(round(np.sqrt(d / 20) * 200))


@dataclass(frozen=True)
class Labeling:
    kind: str  # "random_count" or "per_class"
    k: int

    def __post_init__(self):
        if self.kind not in ("random_count", "per_class"):
            raise ValueError(f"unknown labeling rule {self.kind!r}")
        if self.k < 0:
            raise ValueError("labeled count must be nonnegative")


@dataclass(frozen=True)
class SimSpec:
    example: str = "ex1"
    d: int = 2
    s: float = 1.3
    n_train: int = 200
    n_tune: int = 200
    n_test: int = 3000
    labeling: Labeling = Labeling("random_count", 10)
    seed: int = 0

    def __post_init__(self):
        if self.example not in EXAMPLES:
            raise ValueError(f"unknown example {self.example!r}")
        if min(self.n_train, self.n_tune, self.n_test) <= 0:
            raise ValueError("sample sizes must be positive")
        if self.example == "ex1" and self.d != 2:
            raise ValueError("example 1 is two-dimensional")
        if self.example == "ex2" and self.d < 2:
            raise ValueError("example 2 needs d >= 2")
        if self.example in ("ex3", "ex4") and self.d < BLOCK:
            raise ValueError(f"examples 3 and 4 need d >= {BLOCK}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    @classmethod
    def default(cls, example: str, *, d: int | None = None, s: float = 1.3, seed: int = 0) -> "SimSpec":
        if example == "ex1":
            if d not in (None, 2):
                raise ValueError("example 1 is two-dimensional")
            return cls("ex1", 2, s, 200, 200, 3000, Labeling("random_count", 10), seed)
        if example == "ex2":
            return cls("ex2", 100 if d is None else d, s, 200, 200, 3000, Labeling("random_count", 10), seed)
        d = 100 if d is None else d
        m = train_size_for_dimension(d)
        return cls(example, d, s, m, m, 10000 - 2 * m, Labeling("per_class", 10), seed)


@dataclass(frozen=True)
class GeneratedStudy:
    train: Dataset
    tune: Dataset
    test: Dataset
    train_full: Dataset
    tune_full: Dataset
    true_support: frozenset
    population: PopulationModel | None


def toeplitz(first_row) -> np.ndarray:
    r = np.asarray(first_row, dtype=float)
    if r.size == 0:
        raise ValueError("empty first row")
    idx = np.arange(r.size)
    return r[np.abs(idx[:, None] - idx[None, :])]


def chol_lower(sigma) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=float)
    if not np.allclose(sigma, sigma.T, rtol=0, atol=1e-12):
        raise ValueError("matrix is not symmetric")
    try:
        return np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        raise ValueError("matrix is not positive definite") from None


def sample_mvn(mean, chol, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    mean = np.asarray(mean, dtype=float)
    chol = np.asarray(chol, dtype=float)
    if size is None:
        return mean + chol @ rng.standard_normal(mean.shape[0])
    z = rng.standard_normal((size, mean.shape[0]))
    return mean + z @ chol.T


def sample_scaled_t(df: int, rng: np.random.Generator, size=None):
    """Student t rescaled to unit variance."""
    if df < 3:
        raise ValueError("df must be at least 3 for finite variance")
    return np.sqrt((df - 2) / df) * rng.standard_t(df, size=size)


def block_direction() -> np.ndarray:
    """Signs of the class shift on the correlated block: + on odd, - on even coordinates."""
    return np.where(np.arange(BLOCK) % 2 == 0, 1.0, -1.0)


def block_covariance() -> np.ndarray:
    return toeplitz(0.8 ** np.arange(BLOCK))


def population_for(spec: SimSpec) -> PopulationModel | None:
    d = spec.d
    if spec.example == "ex1":
        return PopulationModel(np.array([1.4, 0.0]), np.eye(2), 0.5)
    if spec.example == "ex2":
        mu = np.zeros(d)
        mu[:2] = spec.s, -spec.s
        return PopulationModel(mu, np.eye(d), 0.5)
    if spec.example == "ex3":
        mu = np.zeros(d)
        mu[:BLOCK] = BLOCK_SHIFT * block_direction()
        sigma = np.eye(d)
        sigma[:BLOCK, :BLOCK] = block_covariance()
        return PopulationModel(mu, sigma, 0.5)
    return None


def true_support(spec: SimSpec) -> frozenset:
    """0-based indices of the informative coordinates."""
    k = {"ex1": 1, "ex2": 2}.get(spec.example, BLOCK)
    return frozenset(range(k))


def _draw(spec: SimSpec, n: int, rng: np.random.Generator):
    y = np.where(rng.random(n) < 0.5, 1.0, -1.0)
    d = spec.d
    if spec.example == "ex1":
        X = rng.standard_normal((n, 2))
        X[:, 0] += 1.4 * y
    elif spec.example == "ex2":
        X = rng.standard_normal((n, d))
        X[:, 0] += spec.s * y
        X[:, 1] -= spec.s * y
    else:
        L = chol_lower(block_covariance())
        if spec.example == "ex3":
            z = rng.standard_normal((n, BLOCK))
        else:
            z = sample_scaled_t(5, rng, size=(n, BLOCK))
        X = np.empty((n, d))
        X[:, :BLOCK] = z @ L.T + np.outer(y, BLOCK_SHIFT * block_direction())
        X[:, BLOCK:] = rng.standard_normal((n, d - BLOCK))
    return X, y


def mask_labels(X, y, rule: Labeling, rng: np.random.Generator) -> Dataset:
    """Keep labels on a uniformly random subset; the rest become unlabeled."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    if rule.kind == "random_count":
        if rule.k > n:
            raise ValueError(f"cannot keep {rule.k} labels out of {n}")
        keep = rng.choice(n, size=rule.k, replace=False)
    else:
        keep = []
        for cls in (1.0, -1.0):
            idx = np.flatnonzero(y == cls)
            if rule.k > idx.size:
                raise ValueError(f"class {cls:+.0f} has only {idx.size} members, need {rule.k}")
            keep.append(rng.choice(idx, size=rule.k, replace=False))
        keep = np.concatenate(keep)
    keep = np.sort(keep)
    mask = np.zeros(n, dtype=bool)
    mask[keep] = True
    return Dataset(X[mask], y[mask], X[~mask], d=X.shape[1])


def generate_example(spec: SimSpec, rep: int = 0) -> GeneratedStudy:
    gen = rng_for(spec.seed, rep, Stream.GENERATE)
    mask_rng = rng_for(spec.seed, rep, Stream.MASK)
    n_tot = spec.n_train + spec.n_tune + spec.n_test
    X, y = _draw(spec, n_tot, gen)
    a, b = spec.n_train, spec.n_train + spec.n_tune
    train = mask_labels(X[:a], y[:a], spec.labeling, mask_rng)
    tune = mask_labels(X[a:b], y[a:b], spec.labeling, mask_rng)
    return GeneratedStudy(
        train=train,
        tune=tune,
        test=Dataset.fully_labeled(X[b:], y[b:]),
        train_full=Dataset.fully_labeled(X[:a], y[:a]),
        tune_full=Dataset.fully_labeled(X[a:b], y[a:b]),
        true_support=true_support(spec),
        population=population_for(spec),
    )
