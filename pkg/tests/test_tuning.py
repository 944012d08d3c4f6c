import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from s3lda.data import DataError, Dataset, LinearModel, encode_targets
from s3lda.solver import SolverConfig, dc_fit, initial_lasso, lasso_least_squares
from s3lda.tuning import Grid, SearchError, grid_search, margin_halfwidth_eta, oracle_select, tuning_criterion

from conftest import make_partial


def test_eta_hand_example():
    # gaps 1,2,3,1,2,1 -> q25 = 1, q75 = 2
    assert margin_halfwidth_eta([0, 1, 2, 3]) == pytest.approx(0.75)


def test_eta_constant_values():
    assert margin_halfwidth_eta([2.5] * 7) == 0.0


def test_eta_needs_two_values():
    with pytest.raises(DataError):
        margin_halfwidth_eta([1.0])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-50, 50), min_size=2, max_size=30), st.floats(0.01, 20), st.floats(-10, 10))
def test_eta_scales_and_ignores_shifts(vals, a, c):
    v = np.array(vals)
    base = margin_halfwidth_eta(v)
    assert margin_halfwidth_eta(a * v) == pytest.approx(a * base, rel=1e-9, abs=1e-9)
    assert margin_halfwidth_eta(v + c) == pytest.approx(base, rel=1e-7, abs=1e-7)


def test_eta_subsamples_large_inputs(monkeypatch):
    import s3lda.tuning as tuning
    monkeypatch.setattr(tuning, "MAX_PAIRS", 1000)
    v = np.random.default_rng(1).standard_normal(200)
    with pytest.raises(ValueError):
        margin_halfwidth_eta(v)
    est = margin_halfwidth_eta(v, np.random.default_rng(2))
    monkeypatch.setattr(tuning, "MAX_PAIRS", 10 ** 9)
    assert est == pytest.approx(margin_halfwidth_eta(v), rel=0.15)


def _tune_set():
    X_l = np.array([[1.0], [2.0], [-1.0], [0.5]])
    y = np.array([1, 1, -1, -1])
    X_u = np.array([[0.1], [-0.2], [3.0], [-4.0]])
    return Dataset(X_l, y, X_u)


def test_criterion_hand_example():
    m = LinearModel(np.array([1.0]), 0.0)
    # one labeled mistake (0.5), and 0.5, 0.1, -0.2 fall inside |f| < 1
    wrong, inside, score = tuning_criterion(m, _tune_set(), 1.0)
    assert (wrong, inside) == (1, 3)
    assert score == pytest.approx(1 / 4 + 3 / 8)


def test_criterion_zero_margin_and_labeled_only():
    m = LinearModel(np.array([1.0]), 0.0)
    assert tuning_criterion(m, _tune_set(), 0.0)[1] == 0
    assert tuning_criterion(m, _tune_set(), 1.0, labeled_only=True) == (1, 0, 0.25)


def test_criterion_needs_labels():
    with pytest.raises(DataError):
        tuning_criterion(LinearModel.zeros(1), Dataset(np.empty((0, 1)), [], np.ones((3, 1))), 1.0)


def test_single_cell_grid_matches_direct_fit(rng):
    train, tune = make_partial(rng), make_partial(rng)
    rep = grid_search(train, tune, Grid((0.5,), (1.0,)), multistart=False)
    direct = dc_fit(train, SolverConfig(C1=0.5, C2=1.0, c=5.0), initial_lasso(train))
    assert rep.best_index == 0
    assert np.allclose(rep.model.omega, direct.model.omega, atol=1e-9)


def test_c2_zero_row_gives_lasso_predictions(rng):
    train, tune = make_partial(rng), make_partial(rng)
    rep = grid_search(train, tune, Grid((1.0,), (0.0,)))
    w = rep.model.omega
    ref = lasso_least_squares(train.X_l, encode_targets(train), 1.0, 5.0 / np.linalg.norm(w), tol=1e-13)
    assert np.max(np.abs(w - ref.omega)) <= 1e-5
    assert np.array_equal(rep.model.predict(tune.X_all), ref.predict(tune.X_all))


def test_duplicate_cells_resolve_to_first(rng):
    train, tune = make_partial(rng), make_partial(rng)
    rep = grid_search(train, tune, Grid((1.0, 1.0), (0.5,)))
    assert rep.best_index == 0
    assert rep.cells[0].score == rep.cells[1].score


def test_tie_prefers_smaller_c2_then_c1(rng):
    train, tune = make_partial(rng, shift=6.0), make_partial(rng, shift=6.0)
    rep = grid_search(train, tune, Grid((2.0, 1.0), (0.0, 1.0)), labeled_only=True)
    assert all(c.score == 0 for c in rep.cells)
    assert (rep.best.C1, rep.best.C2) == (1.0, 0.0)


def test_report_csv_columns(rng):
    train, tune = make_partial(rng), make_partial(rng)
    text = grid_search(train, tune, Grid((1.0,), (0.0, 1.0))).to_csv()
    lines = text.splitlines()
    assert lines[0] == "C1,C2,misclassified,in_margin,eta,score,outer_iters,converged,nnz"
    assert len(lines) == 3 and lines[2].startswith("1,1,")


def test_all_cells_failing_raises(rng, monkeypatch):
    import s3lda.tuning as tuning

    def boom(*a, **k):
        raise ArithmeticError("forced")
    monkeypatch.setattr(tuning, "dc_fit", boom)
    train, tune = make_partial(rng), make_partial(rng)
    with pytest.raises(SearchError):
        grid_search(train, tune, Grid((1.0,), (0.0,)))


def test_oracle_select_picks_lowest_test_error(rng):
    train, test = make_partial(rng), make_partial(rng, n_l=200, n_u=0)
    rep = grid_search(train, test, Grid((0.25, 4.0), (0.0, 1.0)))
    params, fit = oracle_select(rep.fits(), test)
    errs = {p: np.mean(f.model.predict(test.X_l) != test.y) for p, f in rep.fits()}
    assert errs[params] == min(errs.values())
    with pytest.raises(ValueError):
        oracle_select([], test)
