"""Test error, variable selection counts, and the replication engine."""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .baselines import bayes_error_gaussian, l1_lda_fit, l1_svm_fit, population_bayes_rule
from .data import NONZERO_TOL, DataError, Dataset, LinearModel, standardize_apply, standardize_fit
from .simulate import GeneratedStudy, SimSpec, Stream, generate_example, population_for, rng_for
from .solver import SolverConfig, descent_violations
from .tuning import Grid, grid_search, oracle_select

log = logging.getLogger(__name__)

METHODS = ("s3lda", "s3lda_oracle", "l1_lda", "l1_svm", "l1_lda_complete", "l1_svm_complete", "bayes")
NA = "NA"


def misclassification_rate(m: LinearModel, test: Dataset) -> float:
    if test.n_l == 0:
        raise DataError("test set has no labeled points")
    return float(np.mean(m.predict(test.X_l) != test.y))


def selection_errors(omega, true_support) -> tuple:
    """``(fp, fn)``: nonzeros off the support and zeros on it (0-based indices)."""
    omega = np.asarray(omega, dtype=float)
    support = np.zeros(omega.size, dtype=bool)
    idx = np.fromiter(true_support, dtype=int, count=len(true_support))
    if idx.size and (idx.min() < 0 or idx.max() >= omega.size):
        raise IndexError("support index out of range")
    support[idx] = True
    nonzero = np.abs(omega) > NONZERO_TOL
    return int(np.sum(nonzero & ~support)), int(np.sum(~nonzero & support))


@dataclass(frozen=True)
class RepRecord:
    rep: int
    error: float = math.nan
    fp: int | None = None
    fn: int | None = None
    C1: float | None = None
    C2: float | None = None
    seconds: float | None = None
    failure: str | None = None
    # objective increases beyond tolerance summed over all grid cells (S3LDA only)
    descent_violations: int = 0


@dataclass
class MethodResult:
    method: str
    records: list = field(default_factory=list)

    @property
    def ok(self) -> list:
        return sorted((r for r in self.records if r.failure is None), key=lambda r: r.rep)

    @property
    def failures(self) -> int:
        return len(self.records) - len(self.ok)

    @property
    def failed(self) -> bool:
        return not self.ok

    def _stat(self, attr):
        vals = [getattr(r, attr) for r in self.ok]
        vals = [v for v in vals if v is not None]
        return np.asarray(vals, dtype=float)

    @property
    def mean_error(self) -> float:
        e = self._stat("error")
        return float(np.mean(e)) if e.size else math.nan

    @property
    def se_error(self) -> float:
        """Sample sd over sqrt(R); NaN when fewer than two replications."""
        e = self._stat("error")
        if e.size < 2:
            return math.nan
        return float(np.std(e, ddof=1) / math.sqrt(e.size))

    @property
    def mean_fp(self) -> float:
        v = self._stat("fp")
        return float(np.mean(v)) if v.size else math.nan

    @property
    def mean_fn(self) -> float:
        v = self._stat("fn")
        return float(np.mean(v)) if v.size else math.nan


@dataclass(frozen=True)
class ExperimentSettings:
    """Everything besides the scenario that a replication needs."""

    grid: Grid = Grid()
    solver: SolverConfig = SolverConfig()
    labeled_only_tuning: bool = False
    standardize: bool = False
    record_time: bool = False


def _prepare(study: GeneratedStudy, standardize: bool) -> GeneratedStudy:
    if not standardize:
        return study
    s = standardize_fit(study.train)
    app = lambda ds: standardize_apply(s, ds)
    return GeneratedStudy(app(study.train), app(study.tune), app(study.test), app(study.train_full),
                          app(study.tune_full), study.true_support, study.population)


def _model_record(rep, m, study, t0, settings, C=(None, None)):
    fp, fn = selection_errors(m.omega, study.true_support)
    secs = time.perf_counter() - t0 if settings.record_time else None
    return RepRecord(rep, misclassification_rate(m, study.test), fp, fn, C[0], C[1], secs)


def run_replication(spec: SimSpec, methods, rep: int, settings: ExperimentSettings) -> dict:
    """Run every requested method on replication ``rep``; returns ``{method: RepRecord}``."""
    raw = generate_example(spec, rep)
    out = {}
    if "bayes" in methods:
        t0 = time.perf_counter()
        if raw.population is None:
            out["bayes"] = RepRecord(rep, failure="no closed-form Bayes rule for this example")
        else:
            out["bayes"] = _model_record(rep, population_bayes_rule(raw.population), raw, t0, settings)
    study = _prepare(raw, settings.standardize)

    if "s3lda" in methods or "s3lda_oracle" in methods:
        t0 = time.perf_counter()
        try:
            report = grid_search(study.train, study.tune, settings.grid, settings.solver,
                                 labeled_only=settings.labeled_only_tuning,
                                 rng=rng_for(spec.seed, rep, Stream.SUBSAMPLE))
        except (ValueError, ArithmeticError, RuntimeError) as exc:
            for name in ("s3lda", "s3lda_oracle"):
                if name in methods:
                    out[name] = RepRecord(rep, failure=str(exc))
        else:
            viol = 0
            for c in report.cells:
                if c.fit is not None:
                    cfg = replace(settings.solver, C1=c.C1, C2=c.C2, c=settings.grid.c)
                    viol += len(descent_violations(c.fit, study.train, cfg))
            if "s3lda" in methods:
                b = report.best
                out["s3lda"] = replace(_model_record(rep, b.fit.model, study, t0, settings, (b.C1, b.C2)),
                                       descent_violations=viol)
            if "s3lda_oracle" in methods:
                (C1, C2), fit = oracle_select(report.fits(), study.test)
                out["s3lda_oracle"] = _model_record(rep, fit.model, study, t0, settings, (C1, C2))

    baselines = {
        "l1_lda": lambda: l1_lda_fit(study.train.labeled_only(), None, study.tune.labeled_only()),
        "l1_svm": lambda: l1_svm_fit(study.train.labeled_only(), None, study.tune.labeled_only()),
        "l1_lda_complete": lambda: l1_lda_fit(study.train_full, None, study.tune_full),
        "l1_svm_complete": lambda: l1_svm_fit(study.train_full, None, study.tune_full),
    }
    for name, fit in baselines.items():
        if name not in methods:
            continue
        t0 = time.perf_counter()
        try:
            out[name] = _model_record(rep, fit(), study, t0, settings)
        except (ValueError, ArithmeticError, RuntimeError) as exc:
            out[name] = RepRecord(rep, failure=str(exc))
    return out


def _run_one(args):
    return run_replication(*args)


def replicate_experiment(spec: SimSpec, methods, R: int, settings: ExperimentSettings = ExperimentSettings(),
                         threads: int = 1) -> list:
    """Run ``R`` replications and collect one :class:`MethodResult` per method.

    Replications may run in worker processes; results are assembled by
    replication index so the output does not depend on ``threads``.
    """
    if R < 1:
        raise ValueError("R must be at least 1")
    methods = tuple(methods)
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ValueError(f"unknown methods: {unknown}")
    jobs = [(spec, methods, r, settings) for r in range(R)]
    if threads > 1 and R > 1:
        with ProcessPoolExecutor(max_workers=min(threads, R)) as pool:
            per_rep = list(pool.map(_run_one, jobs))
    else:
        per_rep = [_run_one(j) for j in jobs]
    results = []
    for name in methods:
        res = MethodResult(name, [per_rep[r][name] for r in range(R)])
        if res.failed:
            log.warning("method %s failed in every replication", name)
        results.append(res)
    return results


def _fmt(x, digits=6) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return NA
    return f"{x:.{digits}g}"


RESULT_COLUMNS = ["method", "example", "d", "s", "rep", "error", "fp", "fn", "C1", "C2", "seconds"]
SUMMARY_COLUMNS = ["method", "example", "d", "s", "mean_error", "se_error", "mean_fp", "mean_fn", "failures"]


def results_csv(spec: SimSpec, results) -> str:
    """One row per (method, replication); failed replications show NA values."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULT_COLUMNS)
    for res in results:
        for r in sorted(res.records, key=lambda r: r.rep):
            w.writerow([res.method, spec.example, spec.d, _fmt(spec.s), r.rep, _fmt(r.error),
                        _fmt(r.fp), _fmt(r.fn), _fmt(r.C1), _fmt(r.C2), _fmt(r.seconds)])
    return buf.getvalue()


def summary_csv(spec: SimSpec, results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for res in results:
        w.writerow([res.method, spec.example, spec.d, _fmt(spec.s), _fmt(res.mean_error), _fmt(res.se_error),
                    _fmt(res.mean_fp), _fmt(res.mean_fn), res.failures])
    return buf.getvalue()


def bayes_reference(spec: SimSpec) -> float:
    """Closed-form Bayes error of the scenario, NaN when none exists."""
    pm = population_for(spec)
    return bayes_error_gaussian(pm) if pm is not None else math.nan
