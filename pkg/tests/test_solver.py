import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from s3lda.data import DataError, Dataset, LinearModel, encode_targets
from s3lda.losses import modified_hinge
from s3lda.simulate import SimSpec, generate_example
from s3lda.solver import (InvalidInitError, SolverConfig, dc_fit, descent_violations, format_model,
                          initial_lasso, lasso_lambda_max, lasso_least_squares, objective_Q, parse_model,
                          prox_l1, read_model, ridge_direction, solve_convex_subproblem,
                          subproblem_objective, write_model)

from conftest import make_partial


def test_objective_hand_example():
    ds = Dataset([[1.0], [-1.0]], [1, -1], [[0.0]])
    assert np.allclose(encode_targets(ds), [2, -2])
    cfg = SolverConfig(C1=1, C2=1, c=5)
    assert objective_Q(LinearModel([1.0], 0.0), ds, cfg, [1.0]) == pytest.approx(4.0, abs=1e-15)


def test_objective_special_cases(rng):
    ds = make_partial(rng)
    assert objective_Q(LinearModel.zeros(3), ds, SolverConfig(C1=0, C2=0), [1, 0, 0]) == 0.0
    m = LinearModel([0.3, -0.1, 0.0], 0.2)
    lab = ds.labeled_only()
    cfg = SolverConfig(C1=2, C2=7, c=5)
    r = encode_targets(lab) - m.decision_function(lab.X_l)
    expect = 2 * r @ r + 0.4 + 5 / 2.0 * 0.2
    assert objective_Q(m, lab, cfg, [0, 2.0, 0]) == pytest.approx(expect, rel=1e-14)
    full = objective_Q(m, ds, cfg, [0, 2.0, 0])
    assert full == pytest.approx(expect + 7 * modified_hinge(m.decision_function(ds.X_u)).sum(), rel=1e-14)
    with pytest.raises(InvalidInitError):
        objective_Q(m, ds, cfg, np.zeros(3))


@pytest.mark.parametrize("v,t,w,out", [(3.0, 1.0, 1.0, 2.0), (-0.5, 1.0, 1.0, 0.0), (-4.0, 2.0, 0.0, -4.0),
                                       (-4.0, 1.0, 1.5, -2.5)])
def test_prox_l1(v, t, w, out):
    assert prox_l1(np.array([v]), t, np.array([w]))[0] == out


# -- lasso -------------------------------------------------------------------------

def _univariate(x, y, lam):
    # centred x decouples the free intercept: w = S(x'y, lam/2) / x'x, b = mean(y)
    z = x @ y
    return np.sign(z) * max(abs(z) - lam / 2, 0) / (x @ x), y.mean()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.floats(0, 40))
def test_lasso_matches_univariate_closed_form(seed, lam):
    r = np.random.default_rng(seed)
    x = r.standard_normal(12)
    x -= x.mean()
    y = 2.0 * x + r.standard_normal(12)
    w, b = _univariate(x, y, lam)
    m = lasso_least_squares(x[:, None], y, lam, 0.0)
    assert m.omega[0] == pytest.approx(w, abs=1e-8)
    assert m.b == pytest.approx(b, abs=1e-8)


def test_lasso_zero_at_lambda_max(rng):
    X = rng.standard_normal((15, 6))
    y = rng.standard_normal(15)
    lam = lasso_lambda_max(X, y)
    assert lam == pytest.approx(2 * np.max(np.abs(X.T @ (y - y.mean()))))
    assert lasso_least_squares(X, y, lam, 0.0).nnz == 0
    assert lasso_least_squares(X, y, lam * 1.0001, 0.0).omega.tolist() == [0.0] * 6
    assert lasso_least_squares(X, y, lam * 0.99, 0.0).nnz == 1


def test_lasso_unpenalized_solves_normal_equations(rng):
    X = rng.standard_normal((30, 4))
    y = rng.standard_normal(30)
    m = lasso_least_squares(X, y, 0.0, 0.0, tol=1e-13)
    A = np.hstack([X, np.ones((30, 1))])
    grad = A.T @ (y - A @ np.append(m.omega, m.b))
    assert np.linalg.norm(grad) < 1e-7


def test_lasso_intercept_penalty(rng):
    x = rng.standard_normal(20)
    x -= x.mean()
    y = x + 3.0
    # |b| weight larger than 2 |sum(y - w x)| forces b = 0
    assert lasso_least_squares(x[:, None], y, 0.0, 2 * 20 * 3.0 + 1).b == 0.0


def test_lasso_rejects_bad_input():
    with pytest.raises(DataError):
        lasso_least_squares(np.array([[np.nan], [1.0]]), np.ones(2), 1.0, 0.0)
    with pytest.raises(DataError):
        lasso_least_squares(np.ones((1, 1)), np.ones(1), 1.0, 0.0)


# -- convex subproblem ---------------------------------------------------------------

@pytest.mark.parametrize("inner", ["qp", "apg"])
def test_subproblem_without_unlabeled_term_is_lasso(rng, inner):
    ds = make_partial(rng, n_l=16, n_u=30, d=5)
    C1, c = 0.7, 5.0
    cfg = SolverConfig(C1=C1, C2=0.0, c=c, inner=inner, eps_inner=1e-10, max_inner=200_000)
    omega_hat = np.array([1.0, 0.5, 0, 0, 0])
    lin = LinearModel(omega_hat, 0.1)
    got = solve_convex_subproblem(ds, cfg, omega_hat, lin).model
    ref = lasso_least_squares(ds.X_l, encode_targets(ds), 1 / C1, c / np.linalg.norm(omega_hat) / C1,
                              tol=1e-13)
    assert np.max(np.abs(got.omega - ref.omega)) <= 1e-5
    assert abs(got.b - ref.b) <= 1e-5


def test_subproblem_decreases_from_linearization(rng):
    ds = make_partial(rng)
    cfg = SolverConfig(C1=1.0, C2=1.0)
    lin = LinearModel([0.8, 0.1, -0.2], 0.3)
    res = solve_convex_subproblem(ds, cfg, lin.omega, lin)
    f = lambda m: subproblem_objective(ds, cfg, lin.omega, lin, m)
    assert f(res.model) <= f(lin) + 1e-9


def test_subproblem_pure_penalty_gives_zero():
    ds = Dataset([[1.0], [-1.0]], [1, -1], np.empty((0, 1)))
    res = solve_convex_subproblem(ds, SolverConfig(C1=0.0, C2=0.0), np.ones(1), LinearModel([1.0], 0.0))
    assert res.model.omega[0] == 0.0 and res.model.b == 0.0


def _grid_min(fun, center, half, levels=4, n=201):
    """Zooming 2-D grid search; each level narrows the box around the best point."""
    cx, cy = center
    hx, hy = half
    best = None
    for _ in range(levels):
        xs = np.linspace(cx - hx, cx + hx, n)
        ys = np.linspace(cy - hy, cy + hy, n)
        vals = fun(xs[:, None], ys[None, :])
        i, j = np.unravel_index(np.argmin(vals), vals.shape)
        best = vals[i, j]
        cx, cy = xs[i], ys[j]
        hx, hy = 4 * hx / (n - 1), 4 * hy / (n - 1)
    return best


@pytest.mark.parametrize("seed", range(10))
def test_subproblem_against_grid_oracle(seed):
    r = np.random.default_rng(seed)
    y = np.array([1.0, 1.0, -1.0, -1.0, 1.0, -1.0])
    x_l = 1.2 * y + r.standard_normal(6)
    x_u = np.concatenate([r.normal(1.2, 1, 8), r.normal(-1.2, 1, 8)])
    ds = Dataset(x_l[:, None], y, x_u[:, None])
    cfg = SolverConfig(C1=float(r.uniform(0.2, 2)), C2=float(r.uniform(0.1, 2)), c=5.0)
    omega_hat = np.array([r.uniform(0.3, 1.5)])
    lin = LinearModel([r.uniform(-1, 1)], r.uniform(-0.5, 0.5))
    yt = encode_targets(ds)
    s = np.sign(lin.decision_function(ds.X_u))
    iw = cfg.c / abs(omega_hat[0])

    def q1(w, b):
        f_l = w[..., None] * x_l + b[..., None]
        f_u = w[..., None] * x_u + b[..., None]
        u1 = np.maximum(np.abs(f_u) - 1, 0)
        return (cfg.C1 * ((yt - f_l) ** 2).sum(-1) + cfg.C2 * (u1 - s * f_u).sum(-1)
                + np.abs(w) + iw * np.abs(b))

    oracle = _grid_min(q1, (0.0, 0.0), (4.0, 4.0))
    res = solve_convex_subproblem(ds, cfg, omega_hat, lin)
    got = subproblem_objective(ds, cfg, omega_hat, lin, res.model)
    # the solver may only beat the grid by its resolution, and must not lose
    assert abs(got - oracle) <= 1e-4
    assert got <= oracle + 1e-9


# -- DC loop -------------------------------------------------------------------------

def test_dc_without_unlabeled_term_equals_lasso_refit(rng):
    ds = make_partial(rng, n_l=16, n_u=40, d=5)
    init = initial_lasso(ds)
    cfg = SolverConfig(C1=0.5, C2=0.0)
    fit = dc_fit(ds, cfg, init)
    # at convergence the anchor of the last step equals the final slope vector
    ref = lasso_least_squares(ds.X_l, encode_targets(ds), 1 / 0.5,
                              5.0 / np.linalg.norm(fit.model.omega) / 0.5, tol=1e-13)
    assert fit.converged
    assert np.max(np.abs(fit.model.omega - ref.omega)) <= 1e-5
    assert abs(fit.model.b - ref.b) <= 1e-5


def test_one_dimensional_gap_toy():
    x_l = np.array([[2.0], [-2.0]])
    x_u = np.concatenate([np.linspace(1.0, 3.0, 15), np.linspace(-3.0, -1.0, 15)])[:, None]
    ds = Dataset(x_l, [1, -1], x_u)
    cfg = SolverConfig(C1=1.0, C2=1.0)
    fit = dc_fit(ds, cfg)
    assert fit.converged
    assert abs(fit.model.b) <= 0.1 and fit.model.omega[0] > 0

    # brute force over (w, b) on the true non-convex objective
    ws, bs = np.linspace(-3, 3, 601), np.linspace(-1, 1, 401)
    Q = np.array([[objective_Q(LinearModel([w], b), ds, cfg, fit.model.omega) for b in bs] for w in ws[::10]])
    i, j = np.unravel_index(np.argmin(Q), Q.shape)
    assert abs(bs[j]) <= 0.1 and ws[::10][i] > 0


@pytest.mark.parametrize("seed", range(20))
def test_dc_descent_on_example_one_data(seed):
    study = generate_example(SimSpec.default("ex1", seed=seed))
    for C1, C2 in ((1.0, 0.01), (0.25, 1.0), (4.0, 100.0)):
        cfg = SolverConfig(C1=C1, C2=C2)
        fit = dc_fit(study.train, cfg)
        assert descent_violations(fit, study.train, cfg) == []
        assert fit.outer_iters <= cfg.max_outer


def test_apg_route_agrees_with_exact(rng):
    ds = make_partial(rng, n_l=12, n_u=40, d=3)
    lin = LinearModel([1.0, 0.0, 0.0], 0.0)
    exact = SolverConfig(C1=1.0, C2=0.5)
    approx = SolverConfig(C1=1.0, C2=0.5, inner="apg", max_inner=50_000, eps_inner=1e-9)
    a = solve_convex_subproblem(ds, exact, lin.omega, lin).model
    b = solve_convex_subproblem(ds, approx, lin.omega, lin, mu=1e-4).model
    fa = subproblem_objective(ds, exact, lin.omega, lin, a)
    fb = subproblem_objective(ds, exact, lin.omega, lin, b)
    assert fa <= fb + 1e-9
    assert fb - fa <= 1e-3


def test_zero_init_uses_ridge_fallback(rng):
    ds = make_partial(rng)
    fit = dc_fit(ds, SolverConfig(C1=1.0, C2=0.1), LinearModel.zeros(3))
    assert fit.used_fallback
    assert np.isfinite(fit.objective_trace).all()
    assert ridge_direction(ds)[0] > 0


def test_empty_class_rejected():
    ds = Dataset([[1.0], [2.0]], [1, 1], [[0.0]])
    with pytest.raises(DataError):
        dc_fit(ds, SolverConfig())


def test_initial_lasso_rule(rng):
    ds = make_partial(rng, n_l=10, n_u=5, d=30)
    m = initial_lasso(ds)
    assert 1 <= m.nnz <= 9


def test_solver_config_validation():
    for bad in (dict(C1=-1), dict(eps_outer=0), dict(max_outer=0), dict(inner="newton")):
        with pytest.raises(ValueError):
            SolverConfig(**bad)


# -- model files ---------------------------------------------------------------------

def test_model_round_trip(tmp_path):
    m = LinearModel([0.0, 0.1 + 0.2, 0.0, -1e-300, 7.0], 1 / 3)
    path = tmp_path / "m.txt"
    write_model(m, path)
    back = read_model(path, d=5)
    assert np.array_equal(back.omega, m.omega) and back.b == m.b
    lines = path.read_text().splitlines()
    assert lines[0] == "b=0.33333333333333331"
    assert lines[1] == "omega[2]=0.30000000000000004"
    assert len(lines) == 4


@pytest.mark.parametrize("text", ["omega[1]=2\n", "b=1\nomega[0]=1\n", "b=1\nomega[x]=1\n", "b=zz\n",
                                  "b=1\nfoo=2\n", "b=1\nomega[9]=1\n"])
def test_model_parse_errors(text):
    with pytest.raises(DataError):
        parse_model(text, d=3)


def test_format_model_lists_nonzero_only():
    assert format_model(LinearModel([0.0, 2.0], -1.0)) == "b=-1\nomega[2]=2\n"
