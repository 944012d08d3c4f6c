"""Partially labeled data, standardization and linear decision functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class DataError(ValueError):
    """Invalid or inconsistent data."""


class DegenerateFeatureError(DataError):
    def __init__(self, index: int):
        super().__init__(f"coordinate {index} has zero sample variance")
        self.index = index


class EmptyClassError(DataError):
    pass


class DataFormatError(DataError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def _frozen(a, ndim, dtype=float):
    a = np.array(a, dtype=dtype, copy=True)
    if a.ndim != ndim:
        raise DataError(f"expected a {ndim}-d array, got shape {a.shape}")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Dataset:
    """Labeled pairs ``(X_l[i], y[i])`` plus unlabeled rows ``X_u``.

    Labels are +1/-1. Arrays are copied and made read-only on construction.
    """

    X_l: np.ndarray
    y: np.ndarray
    X_u: np.ndarray
    d: int = field(default=-1)

    def __post_init__(self):
        X_l = np.asarray(self.X_l, dtype=float)
        X_u = np.asarray(self.X_u, dtype=float)
        d = self.d
        if d < 0:
            d = X_l.shape[1] if X_l.ndim == 2 and X_l.size else X_u.shape[1] if X_u.ndim == 2 else -1
        if d <= 0:
            raise DataError("dimension d must be positive")
        X_l = X_l.reshape(-1, d) if X_l.size == 0 else X_l
        X_u = X_u.reshape(-1, d) if X_u.size == 0 else X_u
        if X_l.ndim != 2 or X_l.shape[1] != d or X_u.ndim != 2 or X_u.shape[1] != d:
            raise DataError(f"every covariate vector must have length d={d}")
        y = np.asarray(self.y, dtype=float).reshape(-1)
        if y.shape[0] != X_l.shape[0]:
            raise DataError("number of labels does not match labeled rows")
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise DataError("labels must be +1 or -1")
        if not (np.all(np.isfinite(X_l)) and np.all(np.isfinite(X_u))):
            raise DataError("covariates must be finite")
        object.__setattr__(self, "X_l", _frozen(X_l, 2))
        object.__setattr__(self, "X_u", _frozen(X_u, 2))
        object.__setattr__(self, "y", _frozen(y, 1))
        object.__setattr__(self, "d", int(d))

    @property
    def n_l(self) -> int:
        return self.X_l.shape[0]

    @property
    def n_u(self) -> int:
        return self.X_u.shape[0]

    @property
    def n(self) -> int:
        return self.n_l + self.n_u

    @property
    def n_pos(self) -> int:
        return int(np.sum(self.y > 0))

    @property
    def n_neg(self) -> int:
        return int(np.sum(self.y < 0))

    @property
    def X_all(self) -> np.ndarray:
        return np.vstack([self.X_l, self.X_u])

    def labeled_only(self) -> "Dataset":
        return Dataset(self.X_l, self.y, np.empty((0, self.d)), d=self.d)

    @classmethod
    def fully_labeled(cls, X, y) -> "Dataset":
        X = np.asarray(X, dtype=float)
        return cls(X, y, np.empty((0, X.shape[1])), d=X.shape[1])


@dataclass(frozen=True)
class Standardizer:
    means: np.ndarray
    scales: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "means", _frozen(self.means, 1))
        object.__setattr__(self, "scales", _frozen(self.scales, 1))
        if self.means.shape != self.scales.shape:
            raise DataError("means and scales differ in length")
        if np.any(self.scales <= 0):
            raise DataError("scales must be strictly positive")

    @property
    def d(self) -> int:
        return self.means.shape[0]

    def transform(self, X) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.means) / self.scales

    def inverse_transform(self, Z) -> np.ndarray:
        return np.asarray(Z, dtype=float) * self.scales + self.means


def standardize_fit(data: Dataset) -> Standardizer:
    """Pooled mean and sample sd (divisor n-1) over labeled and unlabeled rows."""
    X = data.X_all
    if X.shape[0] < 2:
        raise DataError("standardization needs at least 2 observations")
    means = X.mean(axis=0)
    scales = X.std(axis=0, ddof=1)
    bad = np.flatnonzero(~(scales > 0))
    if bad.size:
        raise DegenerateFeatureError(int(bad[0]))
    return Standardizer(means, scales)


def standardize_apply(s: Standardizer, data: Dataset) -> Dataset:
    if s.d != data.d:
        raise DataError(f"standardizer has d={s.d}, data has d={data.d}")
    return Dataset(s.transform(data.X_l), data.y, s.transform(data.X_u), d=data.d)


def encode_targets(data: Dataset) -> np.ndarray:
    """Recode labels as n_l/n_+ for the positive class and -n_l/n_- otherwise."""
    n_pos, n_neg = data.n_pos, data.n_neg
    if n_pos == 0 or n_neg == 0:
        raise EmptyClassError(f"both classes need labeled members (n+={n_pos}, n-={n_neg})")
    n_l = data.n_l
    return np.where(data.y > 0, n_l / n_pos, -n_l / n_neg)


@dataclass(frozen=True)
class LinearModel:
    """Linear discriminant ``f(x) = omega'x + b``."""

    omega: np.ndarray
    b: float

    def __post_init__(self):
        object.__setattr__(self, "omega", _frozen(self.omega, 1))
        object.__setattr__(self, "b", float(self.b))

    @property
    def d(self) -> int:
        return self.omega.shape[0]

    @property
    def nnz(self) -> int:
        return int(np.count_nonzero(np.abs(self.omega) > NONZERO_TOL))

    def decision_function(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.d:
            raise DataError(f"expected vectors of length {self.d}, got {X.shape[-1]}")
        return X @ self.omega + self.b

    def predict(self, X) -> np.ndarray:
        return np.where(self.decision_function(X) >= 0, 1, -1)

    @classmethod
    def zeros(cls, d: int) -> "LinearModel":
        return cls(np.zeros(d), 0.0)


# |omega_j| above this counts as a selected variable
NONZERO_TOL = 1e-10


def decision_value(m: LinearModel, x) -> float:
    return float(m.decision_function(np.asarray(x, dtype=float).reshape(-1)))


def predict(m: LinearModel, x) -> int:
    """Sign of the decision value; an exact 0 is classified as +1."""
    return 1 if decision_value(m, x) >= 0 else -1


# -- text formats --------------------------------------------------------------

def format_dataset(data: Dataset) -> str:
    lines = [f"d={data.d}"]
    for x, y in zip(data.X_l, data.y):
        lines.append(" ".join([f"{int(y):+d}"] + [repr(float(v)) for v in x]))
    for x in data.X_u:
        lines.append(" ".join(["?"] + [repr(float(v)) for v in x]))
    return "\n".join(lines) + "\n"


def parse_dataset(text: str) -> Dataset:
    """Parse the ``d=<int>`` header format; ``?`` marks an unlabeled row."""
    lines = text.splitlines()
    header_at = None
    for i, line in enumerate(lines):
        if line.strip():
            header_at = i
            break
    if header_at is None:
        raise DataFormatError("empty dataset file", 1)
    head = lines[header_at].strip()
    if not head.startswith("d="):
        raise DataFormatError("expected header 'd=<int>'", header_at + 1)
    try:
        d = int(head[2:])
    except ValueError:
        raise DataFormatError(f"bad dimension {head[2:]!r}", header_at + 1) from None
    if d <= 0:
        raise DataFormatError("dimension must be positive", header_at + 1)
    X_l, y, X_u = [], [], []
    for lineno, line in enumerate(lines[header_at + 1:], start=header_at + 2):
        tok = line.split()
        if not tok:
            continue
        label, values = tok[0], tok[1:]
        if len(values) != d:
            raise DataFormatError(f"expected {d} values, found {len(values)}", lineno)
        try:
            x = [float(v) for v in values]
        except ValueError as exc:
            raise DataFormatError(f"bad number ({exc})", lineno) from None
        if not all(np.isfinite(x)):
            raise DataFormatError("non-finite covariate", lineno)
        if label == "?":
            X_u.append(x)
        elif label in ("+1", "1", "-1"):
            X_l.append(x)
            y.append(1.0 if label != "-1" else -1.0)
        else:
            raise DataFormatError(f"bad label token {label!r}", lineno)
    return Dataset(np.array(X_l).reshape(-1, d), np.array(y), np.array(X_u).reshape(-1, d), d=d)


def read_dataset(path) -> Dataset:
    return parse_dataset(Path(path).read_text())


def write_dataset(data: Dataset, path) -> None:
    Path(path).write_text(format_dataset(data))
