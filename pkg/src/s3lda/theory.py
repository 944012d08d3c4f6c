"""Monte Carlo checks of the population-level direction results.

Under two Gaussian classes ``N(+mu, Sigma)`` and ``N(-mu, Sigma)`` with
equal priors and responses ``Y = +/- delta``, ``delta = 1/(mu' Sigma^{-1} mu)``,
the minimizers of the squared-error risk, the modified-hinge risk and their
sum under ``omega' mu = 1`` all point along ``Sigma^{-1} mu``. Adding an
l1 penalty moves the minimizer by at most
``(lambda sqrt(s) + C sqrt(lambda_max(St))) / lambda_min(St)`` with
``St = Sigma + mu mu'``. Here the risks are replaced by sample means over a
large draw and minimized numerically.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.optimize import minimize

from .baselines import PopulationModel
from .losses import SmoothingParams, u1_smoothed, u1_smoothed_grad, u2_subgradient
from .simulate import Stream, rng_for, toeplitz

log = logging.getLogger(__name__)

SUPPORT_TOL = 1e-10
RHO_SCHEDULE = (1e2, 1e3, 1e4)


def population_direction(pm: PopulationModel) -> np.ndarray:
    """``Sigma^{-1} mu``."""
    try:
        factor = cho_factor(pm.sigma, lower=True)
    except np.linalg.LinAlgError:
        raise ValueError("covariance matrix is not positive definite") from None
    return cho_solve(factor, pm.mu)


def cosine(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))


@dataclass(frozen=True)
class TheoryProblem:
    population: PopulationModel
    C: float = 0.0
    lam: float = 0.0
    mc_n: int = 100_000
    # False drops the squared-error risk, leaving the hinge risk alone
    squared_term: bool = True
    support_size: int = field(init=False)

    def __post_init__(self):
        if self.C < 0 or self.lam < 0:
            raise ValueError("C and lambda must be nonnegative")
        if self.mc_n < 10_000:
            raise ValueError("mc_n must be at least 10000")
        if not self.squared_term and self.C == 0:
            raise ValueError("an objective without the squared term needs C > 0")
        if not np.isfinite(self.population.delta):
            raise ValueError("mu must be nonzero")
        beta = population_direction(self.population)
        object.__setattr__(self, "support_size", int(np.sum(np.abs(beta) > SUPPORT_TOL)))

    @property
    def omega_inf(self) -> np.ndarray:
        """``delta Sigma^{-1} mu``, the unpenalized population minimizer."""
        return self.population.delta * population_direction(self.population)


def draw_population(pm: PopulationModel, n: int, rng: np.random.Generator):
    """``n`` draws of ``(X, Y)`` with ``Y = +/- delta`` in equal proportion."""
    sign = np.where(rng.random(n) < 0.5, 1.0, -1.0)
    L = np.linalg.cholesky(pm.sigma)
    X = rng.standard_normal((n, pm.d)) @ L.T + np.outer(sign, pm.mu)
    return X, pm.delta * sign


@dataclass(frozen=True)
class ConstrainedFit:
    omega: np.ndarray
    converged: bool
    dc_steps: int


def _project(omega, mu):
    return omega + (1.0 - omega @ mu) / (mu @ mu) * mu


def _risk(X, Y, mu, C, lam, squared, rho, w):
    f = X @ w
    val = C * float(np.maximum(1.0 - np.abs(f), 0.0).mean()) + lam * float(np.abs(w).sum())
    val += rho * float(w @ mu - 1.0) ** 2
    if squared:
        val += float(np.mean((Y - f) ** 2))
    return val


def _minimize(X, Y, mu, C, lam, squared, start, *, mu_s=1e-4, max_dc=100, tol=1e-10):
    n, d = X.shape
    smooth = SmoothingParams(mu_s)
    # the squared risk is a quadratic form in omega; keep its moments only
    G = X.T @ X / n
    r = X.T @ Y / n
    w = np.array(start, dtype=float)
    converged = True
    steps = 0
    for rho in RHO_SCHEDULE:
        prev = _risk(X, Y, mu, C, lam, squared, rho, w)
        for _ in range(max_dc):
            steps += 1
            lin = C * (X.T @ u2_subgradient(X @ w)) / n if C > 0 else np.zeros(d)

            def fun(z):
                # omega = z[:d] - z[d:] with both halves nonnegative
                v = z[:d] - z[d:]
                gap = v @ mu - 1.0
                val = rho * gap * gap - lin @ v
                g = 2.0 * rho * gap * mu - lin
                if squared:
                    Gv = G @ v
                    val += v @ Gv - 2.0 * (r @ v)
                    g = g + 2.0 * (Gv - r)
                if C > 0:
                    f = X @ v
                    val += C * u1_smoothed(f, smooth).mean()
                    g = g + C * (X.T @ u1_smoothed_grad(f, smooth)) / n
                val += lam * z.sum()
                return val, np.concatenate([g + lam, -g + lam])

            z0 = np.concatenate([np.maximum(w, 0.0), np.maximum(-w, 0.0)])
            res = minimize(fun, z0, jac=True, method="L-BFGS-B", bounds=[(0.0, None)] * (2 * d),
                           options={"ftol": 1e-15, "gtol": 1e-10, "maxiter": 2000})
            w = res.x[:d] - res.x[d:]
            val = _risk(X, Y, mu, C, lam, squared, rho, w)
            if abs(val - prev) <= tol * (1.0 + abs(val)):
                break
            prev = val
        else:
            converged = False
    return w, converged, steps


def mc_constrained_minimizer(tp: TheoryProblem, rng: np.random.Generator) -> ConstrainedFit:
    """Minimize the sample analogue of the constrained population risk.

    The constraint ``omega' mu = 1`` is enforced by a quadratic penalty
    ``rho (omega' mu - 1)^2`` with ``rho`` raised through ``RHO_SCHEDULE``
    (warm starts), each stage solved by the DC iteration. The convex
    subproblems smooth the hinge part and split ``omega`` into positive and
    negative parts so that a bound-constrained quasi-Newton method applies.
    The result is finally moved along ``mu``
    onto the constraint plane.
    """
    pm = tp.population
    X, Y = draw_population(pm, tp.mc_n, rng)
    mu = np.asarray(pm.mu, dtype=float)
    start = mu / (mu @ mu)
    w, ok, steps = _minimize(X, Y, mu, tp.C, tp.lam, tp.squared_term, start)
    if not ok:
        log.warning("constrained minimizer did not converge (C=%g, lambda=%g)", tp.C, tp.lam)
    return ConstrainedFit(_project(w, mu), ok, steps)


def theorem2_bound(tp: TheoryProblem) -> float:
    """``(lambda sqrt(s) + C sqrt(lambda_max(St))) / lambda_min(St)``."""
    ev = np.linalg.eigvalsh(tp.population.sigma_tilde)
    if ev[0] <= 0:
        raise ValueError("Sigma + mu mu' is not positive definite")
    return float((tp.lam * np.sqrt(tp.support_size) + tp.C * np.sqrt(ev[-1])) / ev[0])


@dataclass(frozen=True)
class BoundCheck:
    lhs: float
    rhs: float
    slack: float
    holds: bool


def verify_theorem2(tp: TheoryProblem, rng: np.random.Generator) -> BoundCheck:
    """Compare ``||omega_lambda - omega_inf||`` with the bound plus ``0.05 (1 + rhs)``."""
    fit = mc_constrained_minimizer(tp, rng)
    lhs = float(np.linalg.norm(fit.omega - tp.omega_inf))
    rhs = theorem2_bound(tp)
    slack = 0.05 * (1.0 + rhs)
    return BoundCheck(lhs, rhs, slack, lhs <= rhs + slack)


# ---------------------------------------------------------------------------
# the standard suite

def default_population(d: int = 3, scale: float = 1.0) -> PopulationModel:
    """Correlated classes whose Bayes direction is sparse for ``d >= 3``.

    ``Sigma^{-1} mu = scale * (0.8, -0.4, 0, ...)``.
    """
    sigma = toeplitz(0.5 ** np.arange(d))
    beta = np.zeros(d)
    beta[0], beta[1] = 0.8 * scale, -0.4 * scale
    return PopulationModel(sigma @ beta, sigma)


# With omega' mu = 1 the hinge risk depends on omega only through
# sigma = sqrt(omega' Sigma omega) and vanishes both as sigma -> 0 and as
# sigma -> infinity, so its infimum is approached far from Sigma^{-1} mu.
# When sigma is below about 1 along Sigma^{-1} mu the risk increases in
# sigma there, making that direction a strict local minimizer; the hinge-only
# check uses such a population (sigma = 0.58) and a start inside the basin.
HINGE_ONLY_SCALE = 2.5


@dataclass(frozen=True)
class CheckRow:
    name: str
    value: float
    target: float
    tolerance: float
    passed: bool


def run_suite(seed: int = 0, mc_n: int = 100_000) -> list:
    """Every check as a :class:`CheckRow`; each draws from its own stream."""
    rows = []
    k = iter(range(1000))

    def rng():
        return rng_for(seed, next(k), Stream.THEORY)

    pm3 = default_population(3)

    def direction_row(name, tp, threshold):
        fit = mc_constrained_minimizer(tp, rng())
        cos = cosine(fit.omega, population_direction(tp.population))
        rows.append(CheckRow(name, cos, 1.0, 1.0 - threshold, cos >= threshold and fit.converged))
        return fit

    direction_row("prop1_direction_C0", TheoryProblem(pm3, 0.0, 0.0, mc_n), 0.99)
    for d in (2, 3):
        pm = default_population(d, HINGE_ONLY_SCALE)
        direction_row(f"prop2_direction_U_only_d{d}",
                      TheoryProblem(pm, 1.0, 0.0, mc_n, squared_term=False), 0.98)
    tp1 = TheoryProblem(pm3, 1.0, 0.0, mc_n)
    fit1 = direction_row("thm1_direction_C1", tp1, 0.98)
    rel = float(np.linalg.norm(fit1.omega - tp1.omega_inf) / np.linalg.norm(tp1.omega_inf))
    rows.append(CheckRow("thm1_distance_C1", rel, 0.0, 0.05, rel <= 0.05))

    for lam in (0.0, 0.05, 0.1):
        for C in (0.0, 0.5):
            chk = verify_theorem2(TheoryProblem(pm3, C, lam, mc_n), rng())
            rows.append(CheckRow(f"thm2_bound_lambda{lam:g}_C{C:g}", chk.lhs, chk.rhs, chk.slack, chk.holds))

    # a joint rescaling of the data leaves the direction unchanged
    t = 3.0
    scaled = PopulationModel(t * pm3.mu, t * t * pm3.sigma)
    a = mc_constrained_minimizer(TheoryProblem(pm3, 1.0, 0.0, mc_n), rng_for(seed, 999, Stream.THEORY))
    b = mc_constrained_minimizer(TheoryProblem(scaled, 1.0, 0.0, mc_n), rng_for(seed, 999, Stream.THEORY))
    cos = cosine(a.omega, b.omega)
    rows.append(CheckRow("scale_invariance", cos, 1.0, 0.001, cos >= 0.999))
    return rows
