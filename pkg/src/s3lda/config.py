"""INI experiment configuration with strict key checking.

Sections and keys (all optional; defaults follow the package defaults)::

    [spec]        example, d, s, n_train, n_tune, n_test, labeling, labeled_k, seed
    [grid]        c1_values, c2_values, c
    [solver]      eps_outer, eps_inner, max_outer, max_inner, mu_s, mu_decay, mu_min, inner
    [experiment]  methods, replications, output_dir, threads, labeled_only_tuning,
                  standardize, record_time
    [fit]         standardize
    [theory]      seed, mc_n

Lists are comma separated. Unknown sections or keys are errors.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field, replace

from .losses import SmoothingParams
from .metrics import METHODS, ExperimentSettings
from .simulate import Labeling, SimSpec
from .solver import SolverConfig
from .tuning import Grid


class ConfigError(ValueError):
    pass


_SCHEMA = {
    "spec": {"example", "d", "s", "n_train", "n_tune", "n_test", "labeling", "labeled_k", "seed"},
    "grid": {"c1_values", "c2_values", "c"},
    "solver": {"eps_outer", "eps_inner", "max_outer", "max_inner", "mu_s", "mu_decay", "mu_min", "inner"},
    "experiment": {"methods", "replications", "output_dir", "threads", "labeled_only_tuning",
                   "standardize", "record_time"},
    "fit": {"standardize"},
    "theory": {"seed", "mc_n"},
}


@dataclass(frozen=True)
class ExperimentConfig:
    spec: SimSpec = field(default_factory=lambda: SimSpec.default("ex1"))
    settings: ExperimentSettings = ExperimentSettings()
    methods: tuple = METHODS
    replications: int = 20
    output_dir: str | None = None
    # raw "auto" or integer text; None when the file does not set it
    threads: str | None = None
    fit_standardize: bool = True
    theory_seed: int = 0
    theory_mc_n: int = 100_000


def _conv(section, key, raw, kind):
    try:
        if kind is bool:
            low = raw.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if kind == "floats":
            vals = tuple(float(v) for v in raw.split(",") if v.strip())
            if not vals:
                raise ValueError(raw)
            return vals
        return kind(raw.strip())
    except ValueError:
        raise ConfigError(f"[{section}] {key}: cannot parse {raw!r}") from None


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    cp = configparser.ConfigParser(interpolation=None, default_section="__none__")
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    for sec in cp.sections():
        if sec not in _SCHEMA:
            raise ConfigError(f"{source}: unknown section [{sec}]")
        for key in cp[sec]:
            if key not in _SCHEMA[sec]:
                raise ConfigError(f"{source}: unknown key {key!r} in [{sec}]")

    def get(sec, key, kind, default):
        if cp.has_option(sec, key):
            return _conv(sec, key, cp[sec][key], kind)
        return default

    try:
        example = get("spec", "example", str, "ex1")
        base = SimSpec.default(example, d=get("spec", "d", int, None), s=get("spec", "s", float, 1.3),
                               seed=get("spec", "seed", int, 0))
        labeling = Labeling(get("spec", "labeling", str, base.labeling.kind),
                            get("spec", "labeled_k", int, base.labeling.k))
        spec = replace(base, n_train=get("spec", "n_train", int, base.n_train),
                       n_tune=get("spec", "n_tune", int, base.n_tune),
                       n_test=get("spec", "n_test", int, base.n_test), labeling=labeling)

        g0 = Grid()
        grid = Grid(get("grid", "c1_values", "floats", g0.c1_values),
                    get("grid", "c2_values", "floats", g0.c2_values), get("grid", "c", float, g0.c))

        s0 = SolverConfig()
        solver = SolverConfig(
            eps_outer=get("solver", "eps_outer", float, s0.eps_outer),
            eps_inner=get("solver", "eps_inner", float, s0.eps_inner),
            max_outer=get("solver", "max_outer", int, s0.max_outer),
            max_inner=get("solver", "max_inner", int, s0.max_inner),
            smoothing=SmoothingParams(get("solver", "mu_s", float, s0.smoothing.mu_s)),
            mu_decay=get("solver", "mu_decay", float, s0.mu_decay),
            mu_min=get("solver", "mu_min", float, s0.mu_min),
            inner=get("solver", "inner", str, s0.inner),
        )
        settings = ExperimentSettings(
            grid=grid, solver=solver,
            labeled_only_tuning=get("experiment", "labeled_only_tuning", bool, False),
            standardize=get("experiment", "standardize", bool, False),
            record_time=get("experiment", "record_time", bool, False),
        )
        methods = tuple(m.strip() for m in get("experiment", "methods", str, ",".join(METHODS)).split(",")
                        if m.strip())
        bad = [m for m in methods if m not in METHODS]
        if bad or not methods:
            raise ConfigError(f"[experiment] methods: unknown or empty {bad}")
        threads = get("experiment", "threads", str, None)
        if threads is not None:
            parse_threads(threads, "[experiment] threads")
        reps = get("experiment", "replications", int, 20)
        if reps < 1:
            raise ConfigError("[experiment] replications must be at least 1")
        mc_n = get("theory", "mc_n", int, 100_000)
        if mc_n < 10_000:
            raise ConfigError("[theory] mc_n must be at least 10000")
        return ExperimentConfig(
            spec=spec, settings=settings, methods=methods, replications=reps,
            output_dir=get("experiment", "output_dir", str, None), threads=threads,
            fit_standardize=get("fit", "standardize", bool, True),
            theory_seed=get("theory", "seed", int, 0), theory_mc_n=mc_n,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def parse_threads(raw: str, what: str = "threads") -> int:
    """Worker count from ``"auto"`` or a positive integer."""
    raw = str(raw).strip()
    if raw == "auto":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{what}: expected a positive integer or 'auto', got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"{what}: must be at least 1")
    return n


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, str(path))
