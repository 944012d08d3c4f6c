import csv

import numpy as np
import pytest

from s3lda.cli import main
from s3lda.data import read_dataset
from s3lda.simulate import SimSpec, generate_example
from s3lda.solver import read_model

SMALL_GRID = "[grid]\nc1_values = 0.5, 2\nc2_values = 0, 1\n"


def _cfg(tmp_path, text):
    p = tmp_path / "exp.ini"
    p.write_text(text)
    return str(p)


def test_simulate_writes_readable_files(tmp_path):
    assert main(["simulate", "--out", str(tmp_path), "--rep", "2"]) == 0
    train = read_dataset(tmp_path / "train.txt")
    ref = generate_example(SimSpec.default("ex1"), 2).train
    assert np.array_equal(train.X_l, ref.X_l) and np.array_equal(train.X_u, ref.X_u)
    assert read_dataset(tmp_path / "test.txt").n == 3000


def test_fit_on_simulated_files(tmp_path, capsys):
    data = tmp_path / "data"
    assert main(["simulate", "--out", str(data), "--rep", "0"]) == 0
    out = tmp_path / "fit"
    code = main(["fit", "--train", str(data / "train.txt"), "--tune", str(data / "tune.txt"),
                 "--out", str(out), "--config", _cfg(tmp_path, SMALL_GRID)])
    assert code == 0
    m = read_model(out / "model.txt", 2)
    test = read_dataset(data / "test.txt")
    assert np.mean(m.predict(test.X_l) != test.y) < 0.2
    with open(out / "tune_report.csv") as fh:
        assert len(list(csv.reader(fh))) == 5
    assert "selected: C1=" in (out / "fit.log").read_text()


def test_fit_missing_file(tmp_path, capsys):
    assert main(["fit", "--train", str(tmp_path / "nope.txt"), "--tune", str(tmp_path / "nope.txt")]) == 2
    assert "no such file" in capsys.readouterr().err


def test_fit_bad_label_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("d=2\n+1 0.5 1.0\n7 0.1 0.2\n")
    assert main(["fit", "--train", str(bad), "--tune", str(bad)]) == 2
    assert "line 3" in capsys.readouterr().err


@pytest.mark.parametrize("text", ["[grid]\nc1_values = a, b\n", "[solver]\nbogus = 1\n", "not an ini file\n",
                                  "[experiment]\nthreads = 0\n", "[spec]\nexample = ex1\nd = 5\n"])
def test_bad_config_exit_code(tmp_path, text):
    assert main(["experiment", "--config", _cfg(tmp_path, text), "--out", str(tmp_path)]) == 2


def test_bad_arguments_exit_code():
    assert main(["experiment", "--seed", "-1"]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["experiment", "--threads", "none"]) == 2


def test_experiment_bayes_is_near_closed_form(tmp_path, capsys):
    cfg = _cfg(tmp_path, "[experiment]\nmethods = bayes\nreplications = 5\n")
    assert main(["experiment", "--config", cfg, "--out", str(tmp_path)]) == 0
    with open(tmp_path / "summary.csv") as fh:
        row = next(csv.DictReader(fh))
    assert abs(float(row["mean_error"]) - 0.0808) < 0.02
    assert "mean_error" in capsys.readouterr().out


def test_experiment_is_deterministic(tmp_path):
    text = "[spec]\nexample = ex3\nd = 20\n[experiment]\nmethods = s3lda, l1_lda, bayes\nreplications = 2\n" + SMALL_GRID
    cfg = _cfg(tmp_path, text)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["experiment", "--config", cfg, "--out", str(a)]) == 0
    assert main(["experiment", "--config", cfg, "--out", str(b), "--threads", "2"]) == 0
    for name in ("results.csv", "summary.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_heavy_tail_bayes_only_fails(tmp_path):
    cfg = _cfg(tmp_path, "[spec]\nexample = ex4\nd = 20\n[experiment]\nmethods = bayes\nreplications = 1\n")
    assert main(["experiment", "--config", cfg, "--out", str(tmp_path)]) == 3


def test_theory_command(tmp_path, capsys):
    assert main(["theory", "--out", str(tmp_path)]) == 0
    assert "FAIL" not in capsys.readouterr().out
    assert (tmp_path / "theory.csv").read_text().startswith("check,value,target,tolerance,pass")
