"""Comparison methods: labeled-data l1-LDA, l1-SVM, and the Gaussian Bayes rule."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.stats import norm

from .data import DataError, Dataset, LinearModel, encode_targets
from .losses import SmoothingParams, hinge, hinge_smoothed, hinge_smoothed_grad
from .solver import apg, lasso_lambda_max, lasso_least_squares


def _chol(sigma):
    try:
        return cho_factor(np.asarray(sigma, dtype=float), lower=True)
    except np.linalg.LinAlgError:
        raise ValueError("covariance matrix is not positive definite") from None


@dataclass(frozen=True)
class PopulationModel:
    """Two Gaussian classes ``N(+mu, sigma)`` and ``N(-mu, sigma)`` with prior ``pi1`` on +."""

    mu: np.ndarray
    sigma: np.ndarray
    pi1: float = 0.5
    delta: float = field(init=False)
    sigma_tilde: np.ndarray = field(init=False)

    def __post_init__(self):
        mu = np.array(self.mu, dtype=float)
        sigma = np.array(self.sigma, dtype=float)
        if sigma.shape != (mu.size, mu.size) or not np.allclose(sigma, sigma.T):
            raise ValueError("sigma must be a symmetric d x d matrix")
        if not 0 < self.pi1 < 1:
            raise ValueError("pi1 must lie in (0, 1)")
        factor = _chol(sigma)
        maha = float(mu @ cho_solve(factor, mu))
        for a in (mu, sigma):
            a.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "delta", 1.0 / maha if maha > 0 else np.inf)
        st = sigma + np.outer(mu, mu)
        st.setflags(write=False)
        object.__setattr__(self, "sigma_tilde", st)

    @property
    def d(self) -> int:
        return self.mu.size

    def mahalanobis_sq(self) -> float:
        """``mu' Sigma^{-1} mu``."""
        return float(self.mu @ cho_solve(_chol(self.sigma), self.mu))


def bayes_rule(mu_plus, mu_minus, sigma, pi1: float = 0.5) -> LinearModel:
    mu_plus = np.asarray(mu_plus, dtype=float)
    mu_minus = np.asarray(mu_minus, dtype=float)
    omega = cho_solve(_chol(sigma), mu_plus - mu_minus)
    b = -0.5 * float((mu_plus + mu_minus) @ omega) + np.log(pi1 / (1.0 - pi1))
    return LinearModel(omega, b)


def population_bayes_rule(pm: PopulationModel) -> LinearModel:
    return bayes_rule(pm.mu, -pm.mu, pm.sigma, pm.pi1)


def bayes_error_gaussian(pm: PopulationModel) -> float:
    """Error of the Bayes rule; ``Phi(-sqrt(mu' Sigma^{-1} mu))`` for equal priors."""
    dist = 2.0 * np.sqrt(pm.mahalanobis_sq())
    p1, p2 = pm.pi1, 1.0 - pm.pi1
    if dist == 0:
        return min(p1, p2)
    shift = np.log(p1 / p2) / dist
    return float(p1 * norm.cdf(-dist / 2 - shift) + p2 * norm.cdf(-dist / 2 + shift))


# ---------------------------------------------------------------------------
# penalized baselines trained on labeled rows

def _labeled_error(m: LinearModel, tune: Dataset) -> float:
    return float(np.mean(m.predict(tune.X_l) != tune.y))


def _check_classes(*sets: Dataset):
    for ds in sets:
        if ds.n_pos == 0 or ds.n_neg == 0:
            raise DataError("both classes must have labeled members")


def _select(models, lambdas, tune: Dataset) -> LinearModel:
    # ties go to the larger penalty
    order = np.argsort(-np.asarray(lambdas), kind="stable")
    errs = [_labeled_error(models[i], tune) for i in order]
    return models[order[int(np.argmin(errs))]]


def lambda_path(lam_max: float, n: int = 20, ratio: float = 1e-3) -> list:
    """Geometric grid from ``lam_max`` down to ``ratio * lam_max``."""
    return list(lam_max * np.geomspace(1.0, ratio, n))


def l1_lda_path(data: Dataset, lambda_grid=None) -> tuple:
    """Lasso fits of the recoded labels for every penalty in the grid."""
    yt = encode_targets(data)
    if lambda_grid is None:
        lambda_grid = lambda_path(lasso_lambda_max(data.X_l, yt))
    if len(lambda_grid) == 0:
        raise ValueError("empty lambda grid")
    lams = list(lambda_grid)
    models = [None] * len(lams)
    prev = None
    for i in np.argsort(-np.asarray(lams), kind="stable"):
        prev = lasso_least_squares(data.X_l, yt, lams[i], 0.0, start=prev)
        models[i] = prev
    return lams, models


def l1_lda_fit(data: Dataset, lambda_grid, tune: Dataset) -> LinearModel:
    """Sparse LDA from the labeled rows, penalty chosen by labeled tuning error."""
    _check_classes(data, tune)
    lams, models = l1_lda_path(data, lambda_grid)
    return _select(models, lams, tune)


def svm_lambda_max(data: Dataset) -> float:
    return float(np.max(np.abs(data.X_l.T @ data.y)))


def svm_objective(m: LinearModel, data: Dataset, lam: float) -> float:
    margins = data.y * m.decision_function(data.X_l)
    return float(hinge(margins).sum() + lam * np.abs(m.omega).sum())


def l1_svm_single(data: Dataset, lam: float, *, start: LinearModel | None = None,
                  mu0: float = 1e-3, mu_min: float = 1e-6, tol: float = 1e-6,
                  max_iter: int = 2000) -> LinearModel:
    """``sum (1 - y f)_+ + lam ||w||_1`` via smoothed proximal gradient.

    The hinge is Huberized with width ``mu`` which shrinks tenfold from
    ``mu0`` to ``mu_min``; each stage warm-starts from the previous one.
    The intercept is unpenalized.
    """
    A = np.hstack([data.X_l, np.ones((data.n_l, 1))])
    yA = data.y[:, None] * A
    weights = np.full(data.d + 1, lam)
    weights[-1] = 0.0
    x = np.zeros(data.d + 1) if start is None else np.append(start.omega, start.b)
    mu = mu0
    step = 1.0
    while True:
        p = SmoothingParams(mu)

        def fun(theta, need_grad, p=p):
            m = yA @ theta
            val = float(hinge_smoothed(m, p).sum())
            return val, (yA.T @ hinge_smoothed_grad(m, p) if need_grad else None)

        step = mu / max(np.linalg.norm(yA, 2) ** 2, 1e-12) * 2.0
        x, _, _ = apg(fun, x, weights, tol=tol, max_iter=max_iter, step=step)
        if mu <= mu_min:
            break
        mu = max(mu * 0.1, mu_min)
    return LinearModel(x[:-1], x[-1])


def l1_svm_path(data: Dataset, lambda_grid=None) -> tuple:
    if lambda_grid is None:
        lambda_grid = lambda_path(svm_lambda_max(data))
    if len(lambda_grid) == 0:
        raise ValueError("empty lambda grid")
    lams = list(lambda_grid)
    models = [None] * len(lams)
    prev = None
    for i in np.argsort(-np.asarray(lams), kind="stable"):
        prev = l1_svm_single(data, lams[i], start=prev)
        models[i] = prev
    return lams, models


def l1_svm_fit(data: Dataset, lambda_grid, tune: Dataset) -> LinearModel:
    """l1-penalized linear SVM from the labeled rows, tuned on labeled tuning error."""
    _check_classes(data, tune)
    lams, models = l1_svm_path(data, lambda_grid)
    return _select(models, lams, tune)
