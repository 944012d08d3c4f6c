"""Grid search over (C1, C2) scored on a partially labeled tuning set.

A cell's score adds the labeled misclassification rate to the fraction of
all tuning points that fall inside the margin ``|f(x)| < eta``, where
``eta`` is a quarter of the sum of the 25th and 75th percentiles of the
pairwise gaps between tuning decision values.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .data import DataError, Dataset, LinearModel
from .solver import FitResult, SolverConfig, dc_fit, initial_lasso

log = logging.getLogger(__name__)

MAX_PAIRS = 2_000_000


class SearchError(RuntimeError):
    """Every grid cell failed."""


@dataclass(frozen=True)
class Grid:
    c1_values: tuple = tuple(2.0 ** k for k in range(-3, 4))
    c2_values: tuple = (0.0, 1e-2, 1.0, 1e2)
    c: float = 5.0

    def __post_init__(self):
        if not self.c1_values or not self.c2_values:
            raise ValueError("grid axes must be nonempty")
        if min(self.c1_values) < 0 or min(self.c2_values) < 0 or self.c < 0:
            raise ValueError("grid values must be nonnegative")

    def cells(self):
        return [(float(c1), float(c2)) for c1 in self.c1_values for c2 in self.c2_values]


@dataclass
class CellRecord:
    C1: float
    C2: float
    misclassified: int = 0
    in_margin: int = 0
    eta: float = float("nan")
    score: float = float("inf")
    fit: FitResult | None = None
    error: str | None = None


@dataclass
class TuneReport:
    cells: list
    best_index: int
    labeled_only: bool = False

    @property
    def best(self) -> CellRecord:
        return self.cells[self.best_index]

    @property
    def eta(self) -> float:
        return self.best.eta

    @property
    def model(self) -> LinearModel:
        return self.best.fit.model

    def fits(self):
        """``((C1, C2), FitResult)`` for every cell that fitted."""
        return [((c.C1, c.C2), c.fit) for c in self.cells if c.fit is not None]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["C1", "C2", "misclassified", "in_margin", "eta", "score", "outer_iters", "converged", "nnz"])
        for c in self.cells:
            if c.fit is None:
                w.writerow([_g(c.C1), _g(c.C2), "", "", "", "", "", "", ""])
                continue
            w.writerow([_g(c.C1), _g(c.C2), c.misclassified, c.in_margin, _g(c.eta), _g(c.score),
                        c.fit.outer_iters, int(c.fit.converged), c.fit.model.nnz])
        return buf.getvalue()


def _g(x) -> str:
    return f"{x:.6g}"


def margin_halfwidth_eta(values, rng: np.random.Generator | None = None) -> float:
    """``(q25 + q75) / 4`` of ``|f_i - f_j|`` over pairs ``i < j``.

    Percentiles interpolate linearly between order statistics. Beyond
    ``MAX_PAIRS`` pairs a uniform sample of that many pairs is used, drawn
    from ``rng``.
    """
    v = np.asarray(values, dtype=float).reshape(-1)
    m = v.size
    if m < 2:
        raise DataError("need at least two decision values")
    n_pairs = m * (m - 1) // 2
    if n_pairs <= MAX_PAIRS:
        i, j = np.triu_indices(m, k=1)
    else:
        if rng is None:
            raise ValueError("an rng is required to subsample pairs")
        i = rng.integers(0, m, MAX_PAIRS)
        j = (i + rng.integers(1, m, MAX_PAIRS)) % m
    gaps = np.abs(v[i] - v[j])
    q25, q75 = np.quantile(gaps, [0.25, 0.75], method="linear")
    return float(q25 + q75) / 4.0


def tuning_criterion(m: LinearModel, tune: Dataset, eta: float, labeled_only: bool = False):
    """Return ``(misclassified, in_margin, score)`` on the tuning set."""
    if tune.n == 0:
        raise DataError("empty tuning set")
    if tune.n_l == 0:
        raise DataError("tuning set has no labeled points")
    wrong = int(np.sum(m.predict(tune.X_l) != tune.y))
    if labeled_only:
        return wrong, 0, wrong / tune.n_l
    f = m.decision_function(tune.X_all)
    inside = int(np.sum(np.abs(f) < eta))
    return wrong, inside, wrong / tune.n_l + inside / tune.n


def _cell_key(cells, score_of):
    # smaller score, then smaller C2, then smaller C1, then grid order
    return lambda i: (score_of(i), cells[i].C2, cells[i].C1, i)


def grid_search(train: Dataset, tune: Dataset, grid: Grid = Grid(), base_cfg: SolverConfig = SolverConfig(),
                *, labeled_only: bool = False, init: LinearModel | None = None,
                rng: np.random.Generator | None = None, multistart: bool = True) -> TuneReport:
    """Fit every ``(C1, C2)`` cell and pick the best by the tuning criterion.

    Every cell starts the DC iteration from one shared labeled-only sparse
    LDA solution. With ``multistart`` a cell is also started from the
    ``C2 = 0`` solution and from the next smaller ``C2`` solution at the same
    ``C1``, and the fit with the lowest final objective is kept. A cell that
    raises is kept in the report with its error and excluded from selection.
    """
    if init is None:
        init = initial_lasso(train)
    cells = [CellRecord(C1, C2) for C1, C2 in grid.cells()]
    # visit each C1 row in increasing C2 so smaller-C2 fits can seed larger ones
    order = sorted(range(len(cells)), key=lambda i: (cells[i].C1, cells[i].C2, i))
    base_fit = {}
    prev_fit = {}
    for i in order:
        rec = cells[i]
        C1, C2 = rec.C1, rec.C2
        try:
            cfg = replace(base_cfg, C1=C1, C2=C2, c=grid.c)
            starts = [init]
            if multistart:
                for m in (base_fit.get(C1), prev_fit.get(C1)):
                    if m is not None and m.nnz > 0 and all(m is not s for s in starts):
                        starts.append(m)
            fits = [dc_fit(train, cfg, s) for s in starts]
            rec.fit = min(fits, key=lambda f: f.objective_trace[-1])
            if C2 == 0:
                base_fit.setdefault(C1, rec.fit.model)
            prev_fit[C1] = rec.fit.model
            f_tune = rec.fit.model.decision_function(tune.X_all)
            rec.eta = margin_halfwidth_eta(f_tune, rng)
            rec.misclassified, rec.in_margin, rec.score = tuning_criterion(
                rec.fit.model, tune, rec.eta, labeled_only)
        except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
            log.warning("cell C1=%g C2=%g failed: %s", C1, C2, exc)
            rec.fit, rec.error = None, str(exc)
    ok = [i for i, c in enumerate(cells) if c.fit is not None]
    if not ok:
        raise SearchError("all grid cells failed: " + "; ".join(c.error for c in cells))
    best = min(ok, key=_cell_key(cells, lambda i: cells[i].score))
    return TuneReport(cells, best, labeled_only)


def oracle_select(fits, test: Dataset):
    """The ``(params, fit)`` with the lowest test misclassification rate.

    ``params`` is ``(C1, C2)``; ties break as in :func:`grid_search`.
    """
    fits = list(fits)
    if not fits:
        raise ValueError("no candidate fits")
    if test.n_l == 0:
        raise DataError("test set has no labels")
    errs = [float(np.mean(fit.model.predict(test.X_l) != test.y)) for _, fit in fits]
    recs = [CellRecord(p[0], p[1]) for p, _ in fits]
    best = min(range(len(fits)), key=_cell_key(recs, lambda i: errs[i]))
    return fits[best]
