"""Command-line entry point: ``s3lda {simulate,fit,experiment,theory}``.

Exit codes: 0 success, 1 checks failed (``theory``), 2 bad input
(missing or malformed files, bad configuration), 3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ConfigError, ExperimentConfig, load_config, parse_threads
from .data import DataError, LinearModel, standardize_apply, standardize_fit, read_dataset, write_dataset
from .metrics import replicate_experiment, results_csv, summary_csv
from .simulate import generate_example
from .solver import write_model
from .theory import run_suite
from .tuning import SearchError, grid_search

log = logging.getLogger("s3lda")

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3


class InputError(Exception):
    """Bad command-line input; maps to exit code 2."""


def _config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        if not 0 <= args.seed < 2 ** 64:
            raise ConfigError("--seed must be an unsigned 64-bit integer")
        cfg = replace(cfg, spec=replace(cfg.spec, seed=args.seed), theory_seed=args.seed)
    return cfg


def _threads(args, cfg: ExperimentConfig) -> int:
    if args.threads is not None:
        return parse_threads(args.threads, "--threads")
    env = os.environ.get("S3LDA_THREADS")
    if env:
        return parse_threads(env, "S3LDA_THREADS")
    if cfg.threads is not None:
        return parse_threads(cfg.threads, "[experiment] threads")
    return 1


def _out_dir(args, cfg: ExperimentConfig | None = None) -> Path:
    out = args.out or (cfg.output_dir if cfg else None) or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write(path: Path, text: str):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _read(path):
    if not Path(path).is_file():
        raise InputError(f"no such file: {path}")
    return read_dataset(path)


# ---------------------------------------------------------------------------
# subcommands

def cmd_simulate(args) -> int:
    cfg = _config(args)
    out = _out_dir(args, cfg)
    study = generate_example(cfg.spec, args.rep)
    for name in ("train", "tune", "test"):
        write_dataset(getattr(study, name), out / f"{name}.txt")
    print(f"wrote train/tune/test for {cfg.spec.example} rep {args.rep} to {out}")
    return EXIT_OK


def _to_raw_scale(m: LinearModel, means, scales) -> LinearModel:
    omega = m.omega / scales
    return LinearModel(omega, m.b - float(omega @ means))


def cmd_fit(args) -> int:
    cfg = _config(args)
    train, tune = _read(args.train), _read(args.tune)
    if train.d != tune.d:
        raise InputError(f"train has d={train.d} but tune has d={tune.d}")
    out = _out_dir(args)
    std = None
    if cfg.fit_standardize:
        std = standardize_fit(train)
        train, tune = standardize_apply(std, train), standardize_apply(std, tune)
    settings = cfg.settings
    report = grid_search(train, tune, settings.grid, settings.solver,
                         labeled_only=settings.labeled_only_tuning,
                         rng=np.random.Generator(np.random.Philox(cfg.spec.seed)))
    model = report.model
    if std is not None:
        model = _to_raw_scale(model, std.means, std.scales)
    write_model(model, out / "model.txt")
    _write(out / "tune_report.csv", report.to_csv())
    b = report.best
    lines = [
        f"train: n_l={train.n_l} n_u={train.n_u} d={train.d}",
        f"tune: n_l={tune.n_l} n_u={tune.n_u}",
        f"standardized: {'yes' if std is not None else 'no'}",
        f"selected: C1={b.C1:g} C2={b.C2:g} score={b.score:.6g} eta={b.eta:.6g}",
        f"outer iterations: {b.fit.outer_iters} converged: {b.fit.converged}",
        f"nonzero coefficients: {model.nnz}",
        f"failed cells: {sum(c.fit is None for c in report.cells)}",
    ]
    _write(out / "fit.log", "\n".join(lines) + "\n")
    print("\n".join(lines))
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = _config(args)
    out = _out_dir(args, cfg)
    results = replicate_experiment(cfg.spec, cfg.methods, cfg.replications, cfg.settings,
                                   threads=_threads(args, cfg))
    _write(out / "results.csv", results_csv(cfg.spec, results))
    summary = summary_csv(cfg.spec, results)
    _write(out / "summary.csv", summary)
    print(_table(list(csv.reader(io.StringIO(summary)))))
    return EXIT_SOLVER if all(r.failed for r in results) else EXIT_OK


def cmd_theory(args) -> int:
    cfg = _config(args)
    rows = run_suite(cfg.theory_seed, cfg.theory_mc_n)
    table = [["check", "value", "target", "tolerance", "pass"]]
    table += [[r.name, f"{r.value:.6g}", f"{r.target:.6g}", f"{r.tolerance:.6g}", "PASS" if r.passed else "FAIL"]
              for r in rows]
    if args.out:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(table)
        _write(_out_dir(args) / "theory.csv", buf.getvalue())
    print(_table(table))
    return EXIT_OK if all(r.passed for r in rows) else EXIT_FAILED


def _table(rows) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI configuration file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--threads", help="worker processes, or 'auto' (falls back to $S3LDA_THREADS)")
    common.add_argument("--seed", type=int, help="overrides the seed in the configuration")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="s3lda", description="Semi-supervised sparse LDA experiments.")
    sub = p.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("simulate", parents=[common], help="write train/tune/test files for one replication")
    sp.add_argument("--rep", type=int, default=0)
    sp.set_defaults(func=cmd_simulate)
    fp = sub.add_parser("fit", parents=[common], help="grid-search fit on dataset files")
    fp.add_argument("--train", required=True)
    fp.add_argument("--tune", required=True)
    fp.set_defaults(func=cmd_fit)
    ep = sub.add_parser("experiment", parents=[common], help="replicated simulation study")
    ep.set_defaults(func=cmd_experiment)
    tp = sub.add_parser("theory", parents=[common], help="Monte Carlo checks of the population results")
    tp.set_defaults(func=cmd_theory)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, DataError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SearchError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
