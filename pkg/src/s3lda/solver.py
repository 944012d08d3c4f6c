"""Fitting engine: coordinate-descent lasso, accelerated proximal gradient,
and the DC outer loop for the semi-supervised sparse LDA objective

    Q(w, b) = C1 sum_l (y~ - f)^2 + C2 sum_u (1 - |f|)_+ + ||w||_1 + c |b| / ||w_hat||_2

with ``U = U1 - U2`` linearized at the previous iterate.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy import sparse

from .data import DataError, Dataset, LinearModel, NONZERO_TOL, encode_targets
from .losses import (
    SmoothingParams,
    modified_hinge,
    u1,
    u1_smoothed,
    u1_smoothed_grad,
    u2_subgradient,
)

log = logging.getLogger(__name__)


class InvalidInitError(ValueError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    C1: float = 1.0
    C2: float = 0.0
    c: float = 5.0
    eps_outer: float = 1e-5
    eps_inner: float = 1e-7
    max_outer: int = 50
    max_inner: int = 5000
    smoothing: SmoothingParams = field(default_factory=SmoothingParams)
    # smoothing width is multiplied by mu_decay after every outer step, floored at mu_min
    mu_decay: float = 0.1
    mu_min: float = 1e-6
    # "qp": exact interior-point solve; "apg": proximal gradient on the smoothed surrogate
    inner: str = "qp"

    def __post_init__(self):
        if self.inner not in ("qp", "apg"):
            raise ValueError(f"unknown inner solver {self.inner!r}")
        if self.C1 < 0 or self.C2 < 0 or self.c < 0:
            raise ValueError("C1, C2 and c must be nonnegative")
        if not (self.eps_outer > 0 and self.eps_inner > 0):
            raise ValueError("tolerances must be positive")
        if self.max_outer < 1 or self.max_inner < 1:
            raise ValueError("iteration limits must be at least 1")
        if not (0 < self.mu_decay <= 1 and self.mu_min > 0):
            raise ValueError("bad smoothing schedule")


@dataclass(frozen=True)
class FitResult:
    model: LinearModel
    init_model: LinearModel
    objective_trace: tuple
    outer_iters: int
    converged: bool
    # smoothing width used to produce each iterate after the first
    mu_trace: tuple = ()
    used_fallback: bool = False
    last_intercept_weight: float = 0.0
    inner_converged: bool = True
    # Q of the previous iterate under the anchor used for each step; the DC
    # majorization guarantees objective_trace[k] <= step_start[k - 1]
    step_start: tuple = ()


# ---------------------------------------------------------------------------
# building blocks

def prox_l1(v, t, weights=None):
    """Weighted soft threshold ``sign(v) max(0, |v| - t w)``."""
    v = np.asarray(v, dtype=float)
    thr = t if weights is None else t * np.asarray(weights, dtype=float)
    return np.sign(v) * np.maximum(0.0, np.abs(v) - thr)


def soft_threshold(z, thr):
    return np.sign(z) * max(0.0, abs(z) - thr)


def objective_Q(m: LinearModel, data: Dataset, cfg: SolverConfig, omega_hat) -> float:
    """Exact (non-smoothed) objective value."""
    omega_hat = np.asarray(omega_hat, dtype=float)
    nrm = float(np.linalg.norm(omega_hat))
    if cfg.c > 0 and nrm == 0:
        raise InvalidInitError("omega_hat has zero norm while c > 0")
    q = float(np.abs(m.omega).sum())
    if cfg.c > 0:
        q += cfg.c / nrm * abs(m.b)
    if data.n_l and cfg.C1 > 0:
        r = encode_targets(data) - m.decision_function(data.X_l)
        q += cfg.C1 * float(r @ r)
    if data.n_u and cfg.C2 > 0:
        q += cfg.C2 * float(modified_hinge(m.decision_function(data.X_u)).sum())
    return q


def lasso_least_squares(X, y_tilde, lam, intercept_weight, *, tol=1e-9,
                        max_sweeps=100_000, start: LinearModel | None = None) -> LinearModel:
    """Minimize ``sum (y~ - b - Xw)^2 + lam ||w||_1 + intercept_weight |b|``.

    Cyclic coordinate descent with exact univariate soft-threshold updates over
    ``(b, w_1, ..., w_d)``. After each full sweep the cycle runs on the active
    set until it settles; the fit is converged once a full sweep moves no
    coordinate by more than ``tol``.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y_tilde, dtype=float)
    n, d = X.shape
    if n < 2:
        raise DataError("lasso needs at least 2 labeled observations")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y)) and np.isfinite(lam)
            and np.isfinite(intercept_weight)):
        raise DataError("non-finite input to lasso")
    if lam < 0 or intercept_weight < 0:
        raise ValueError("penalties must be nonnegative")
    if lam == 0 and intercept_weight == 0 and start is None:
        # plain least squares; minimum-norm slope when X is rank deficient
        xm = X.mean(0)
        w = np.linalg.lstsq(X - xm, y - y.mean(), rcond=None)[0]
        return LinearModel(w, float(y.mean() - xm @ w))

    cols = np.asarray(X.T, order="C")
    sq = np.einsum("ij,ij->i", cols, cols)
    w = np.zeros(d) if start is None else np.array(start.omega, dtype=float)
    b = 0.0 if start is None else float(start.b)
    r = y - X @ w - b
    half_lam, half_iw = 0.5 * lam, 0.5 * intercept_weight

    def sweep(idx):
        nonlocal b
        delta = 0.0
        z = r.sum() + n * b
        b_new = soft_threshold(z, half_iw) / n
        if b_new != b:
            r[:] -= b_new - b
            delta = abs(b_new - b)
            b = b_new
        for j in idx:
            if sq[j] == 0.0:
                continue
            wj = w[j]
            z = cols[j] @ r + sq[j] * wj
            wn = soft_threshold(z, half_lam) / sq[j]
            if wn != wj:
                r[:] -= (wn - wj) * cols[j]
                w[j] = wn
                delta = max(delta, abs(wn - wj))
        return delta

    full = np.arange(d)
    for _ in range(max_sweeps):
        if sweep(full) < tol:
            break
        active = np.flatnonzero(w)
        for _ in range(max_sweeps):
            if sweep(active) < tol:
                break
    else:
        log.warning("lasso coordinate descent hit max_sweeps=%d", max_sweeps)
    return LinearModel(w, b)


def lasso_lambda_max(X, y_tilde) -> float:
    """Smallest ``lam`` with an all-zero slope when the intercept is free."""
    y = np.asarray(y_tilde, dtype=float)
    return 2.0 * float(np.max(np.abs(np.asarray(X).T @ (y - y.mean()))))


def apg(fun, x0, weights, *, tol=1e-7, max_iter=5000, step=1.0):
    """Accelerated proximal gradient for ``fun(x) + sum(weights * |x|)``.

    ``fun(x, need_grad)`` returns ``(value, grad or None)``. Steps are
    chosen by backtracking (halving) on the sufficient-decrease condition,
    with a mild expansion each iteration. Momentum is reset whenever the
    objective rises or the step opposes the momentum direction. Stops when
    the gradient-mapping norm falls below ``tol``; the best iterate seen is
    returned, so the result is never worse than ``x0``.

    Returns ``(x, converged, iterations)``.
    """
    weights = np.asarray(weights, dtype=float)
    x = np.array(x0, dtype=float)
    fx, _ = fun(x, False)
    Fx = fx + float(weights @ np.abs(x))
    best, Fbest = x, Fx
    yk, theta = x, 1.0
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        fy, gy = fun(yk, True)
        t = step
        while True:
            xn = prox_l1(yk - t * gy, t, weights)
            diff = xn - yk
            fxn, _ = fun(xn, False)
            if fxn <= fy + gy @ diff + (diff @ diff) / (2.0 * t) + 1e-14 * abs(fy) or t < 1e-300:
                break
            t *= 0.5
        step = t * 1.25
        gmap = np.sqrt(diff @ diff) / t
        Fxn = fxn + float(weights @ np.abs(xn))
        if Fxn < Fbest:
            best, Fbest = xn, Fxn
        if gmap < tol:
            converged = True
            break
        restart = Fxn > Fx or diff @ (xn - x) < 0
        x_prev, x, Fx = x, xn, Fxn
        if restart:
            yk, theta = x, 1.0
            continue
        theta_n = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * theta * theta))
        yk = x + ((theta - 1.0) / theta_n) * (x - x_prev)
        theta = theta_n
    return best, converged, it


def solve_plq(p, *, quad=None, linear=None, l1=None, image=None, pieces=(), slack_cost=None,
              zero_tol=1e-7):
    """Exact minimizer of a convex piecewise-linear-quadratic function of ``theta`` in R^p.

    Minimizes ``coef ||y - A theta||^2 - linear'theta + sum_j l1_j |theta_j|
    + sum_i slack_cost_i xi_i`` where, with ``z = image @ theta``, each slack is
    ``xi_i = max(0, max_k (a_k[i] z_i + h_k[i]))`` over the ``(a_k, h_k)`` in
    ``pieces``.

    Solved as a QP with Clarabel. l1-penalized entries with
    ``|theta_j| <= zero_tol (1 + max|theta|)`` are set to exactly zero.
    Returns ``(theta, ok)``.
    """
    import clarabel

    l1 = np.zeros(p) if l1 is None else np.asarray(l1, dtype=float)
    J = np.flatnonzero(l1 > 0)
    m1 = J.size
    nq = 0
    if quad is not None and quad[2] > 0:
        A_q, y_q, coef = quad
        A_q = np.asarray(A_q, dtype=float)
        nq = A_q.shape[0]
    nz = 0 if image is None else image.shape[0]
    # variable layout: theta | t (|theta_J| bounds) | xi | r (residuals) | z (image)
    o_t, o_xi = p, p + m1
    o_r = o_xi + nz
    o_z = o_r + nq
    nx = o_z + nz

    def rows(k, parts):
        """Sparse block row of height ``k`` from ``{offset: matrix}``."""
        cols = []
        at = 0
        for off in sorted(parts):
            if off > at:
                cols.append(sparse.csr_matrix((k, off - at)))
            M = parts[off]
            cols.append(sparse.csr_matrix(M))
            at = off + M.shape[1]
        if at < nx:
            cols.append(sparse.csr_matrix((k, nx - at)))
        return sparse.hstack(cols)

    q = np.zeros(nx)
    if linear is not None:
        q[:p] -= linear
    q[o_t:o_xi] = l1[J]
    if nz:
        q[o_xi:o_r] = slack_cost
    diag = np.zeros(nx)
    diag[o_r:o_z] = 2.0 * coef if nq else 0.0
    P = sparse.diags(diag, format="csc")

    blocks, rhs = [], []
    if nq:
        blocks.append(rows(nq, {0: A_q, o_r: sparse.identity(nq)}))
        rhs.append(np.asarray(y_q, dtype=float))
    if nz:
        blocks.append(rows(nz, {0: image, o_z: -sparse.identity(nz)}))
        rhs.append(np.zeros(nz))
    n_zero = nq + nz
    if m1:
        E = sparse.csr_matrix((np.ones(m1), (np.arange(m1), J)), shape=(m1, p))
        blocks.append(rows(m1, {0: E, o_t: -sparse.identity(m1)}))
        blocks.append(rows(m1, {0: -E, o_t: -sparse.identity(m1)}))
        rhs += [np.zeros(m1), np.zeros(m1)]
    if nz:
        for a_k, h_k in pieces:
            blocks.append(rows(nz, {o_xi: -sparse.identity(nz), o_z: sparse.diags(a_k * np.ones(nz))}))
            rhs.append(-h_k * np.ones(nz))
        blocks.append(rows(nz, {o_xi: -sparse.identity(nz)}))
        rhs.append(np.zeros(nz))
    A = sparse.vstack(blocks, format="csc")
    b = np.concatenate(rhs)
    cones = []
    if n_zero:
        cones.append(clarabel.ZeroConeT(n_zero))
    if A.shape[0] > n_zero:
        cones.append(clarabel.NonnegativeConeT(A.shape[0] - n_zero))
    settings = clarabel.DefaultSettings()
    settings.verbose = False
    settings.direct_solve_method = "qdldl"
    settings.tol_gap_abs = settings.tol_gap_rel = settings.tol_feas = 1e-12
    settings.tol_ktratio = 1e-8
    sol = clarabel.DefaultSolver(sparse.triu(P, format="csc"), q, A, b, cones, settings).solve()
    theta = np.array(sol.x[:p])
    ok = str(sol.status) in ("Solved", "AlmostSolved")
    if m1:
        small = np.abs(theta[J]) <= zero_tol * (1.0 + np.max(np.abs(theta)))
        theta[J[small]] = 0.0
    return theta, ok


# ---------------------------------------------------------------------------
# convex subproblem

@dataclass(frozen=True)
class InnerResult:
    model: LinearModel
    converged: bool
    iterations: int
    objective: float


class _Problem:
    """Design matrices with a trailing intercept column, built once per fit."""

    def __init__(self, data: Dataset):
        self.data = data
        self.d = data.d
        self.A_l = np.hstack([data.X_l, np.ones((data.n_l, 1))])
        self.A_u = np.hstack([data.X_u, np.ones((data.n_u, 1))])
        self.y_tilde = encode_targets(data)

    def surrogate(self, cfg: SolverConfig, mu: float, slope_u, lin_weight):
        """Smooth part of the convex subproblem as a function of ``(w, b)``."""
        C1, C2 = cfg.C1, cfg.C2
        A_l, A_u, yt = self.A_l, self.A_u, self.y_tilde
        p = SmoothingParams(mu)
        use_u = C2 > 0 and A_u.shape[0] > 0
        # linear term -C2 sum_j s_j (w'x_j + b)
        lin = C2 * (A_u.T @ slope_u) if use_u else np.zeros(A_l.shape[1])

        def fun(theta, need_grad):
            r = yt - A_l @ theta
            val = C1 * float(r @ r) - float(lin @ theta)
            grad = None
            if need_grad:
                grad = -2.0 * C1 * (A_l.T @ r) - lin
            if use_u:
                fu = A_u @ theta
                val += C2 * float(u1_smoothed(fu, p).sum())
                if need_grad:
                    grad = grad + C2 * (A_u.T @ u1_smoothed_grad(fu, p))
            return val, grad

        return fun

    def linearization_slopes(self, m: LinearModel):
        if self.data.n_u == 0:
            return np.zeros(0)
        return u2_subgradient(self.A_u @ np.append(m.omega, m.b))

    def initial_step(self, cfg: SolverConfig) -> float:
        L = 2.0 * cfg.C1 * np.linalg.norm(self.A_l, 2) ** 2 if self.A_l.size else 0.0
        return 1.0 / L if L > 0 else 1.0

    def solve(self, cfg, intercept_weight, linearization: LinearModel, mu) -> InnerResult:
        if cfg.inner == "qp":
            return self.solve_exact(cfg, intercept_weight, linearization)
        slopes = self.linearization_slopes(linearization)
        fun = self.surrogate(cfg, mu, slopes, None)
        weights = np.ones(self.d + 1)
        weights[-1] = intercept_weight
        x0 = np.append(linearization.omega, linearization.b)
        x, ok, it = apg(fun, x0, weights, tol=cfg.eps_inner, max_iter=cfg.max_inner,
                        step=self.initial_step(cfg))
        val = fun(x, False)[0] + float(weights @ np.abs(x))
        return InnerResult(LinearModel(x[:-1], x[-1]), ok, it, val)


    def solve_exact(self, cfg, intercept_weight, linearization: LinearModel) -> InnerResult:
        p = self.d + 1
        slopes = self.linearization_slopes(linearization)
        weights = np.ones(p)
        weights[-1] = intercept_weight
        image, lin = None, None
        if cfg.C2 > 0 and self.data.n_u:
            image = self.A_u
            lin = cfg.C2 * (self.A_u.T @ slopes)
        quad = (self.A_l, self.y_tilde, cfg.C1) if self.data.n_l else None
        # (|z| - 1)_+ = max(0, z - 1, -z - 1)
        theta, ok = solve_plq(p, quad=quad, linear=lin, l1=weights, image=image,
                              pieces=((1.0, -1.0), (-1.0, -1.0)), slack_cost=cfg.C2)
        m = LinearModel(theta[:-1], theta[-1])
        return InnerResult(m, ok, 1, self.exact_value(cfg, intercept_weight, slopes, theta))

    def exact_value(self, cfg, intercept_weight, slopes, theta) -> float:
        """Non-smoothed convex subproblem value at ``theta``."""
        r = self.y_tilde - self.A_l @ theta
        val = cfg.C1 * float(r @ r) + float(np.abs(theta[:-1]).sum()) + intercept_weight * abs(theta[-1])
        if cfg.C2 > 0 and self.data.n_u:
            fu = self.A_u @ theta
            val += cfg.C2 * float(u1(fu).sum() - slopes @ fu)
        return val


def _intercept_weight(cfg: SolverConfig, omega_hat) -> float:
    if cfg.c == 0:
        return 0.0
    nrm = float(np.linalg.norm(omega_hat))
    if nrm == 0:
        raise InvalidInitError("omega_hat has zero norm while c > 0")
    return cfg.c / nrm


def subproblem_objective(data: Dataset, cfg: SolverConfig, omega_hat, linearization: LinearModel,
                         m: LinearModel, mu: float = 0.0) -> float:
    """Value of the convex subproblem at ``m``; smoothed when ``mu > 0``."""
    prob = _Problem(data)
    iw = _intercept_weight(cfg, omega_hat)
    slopes = prob.linearization_slopes(linearization)
    theta = np.append(m.omega, m.b)
    if not mu:
        return prob.exact_value(cfg, iw, slopes, theta)
    fun = prob.surrogate(cfg, mu, slopes, None)
    return fun(theta, False)[0] + float(np.abs(m.omega).sum()) + iw * abs(m.b)


def solve_convex_subproblem(data: Dataset, cfg: SolverConfig, omega_hat, linearization: LinearModel,
                            mu: float | None = None) -> InnerResult:
    """One DC step: minimize the convex majorizer built at ``linearization``.

    ``mu`` overrides the smoothing width for the proximal-gradient route.
    """
    prob = _Problem(data)
    mu = cfg.smoothing.mu_s if mu is None else mu
    return prob.solve(cfg, _intercept_weight(cfg, omega_hat), linearization, mu)


# ---------------------------------------------------------------------------
# initialization and the DC loop

def ridge_direction(data: Dataset, ridge: float = 1e-4) -> np.ndarray:
    """Slope of ``sum (y~ - b - Xw)^2 + ridge ||w||^2`` with a free intercept."""
    yt = encode_targets(data)
    Xc = data.X_l - data.X_l.mean(axis=0)
    G = Xc.T @ Xc + ridge * np.eye(data.d)
    return np.linalg.solve(G, Xc.T @ (yt - yt.mean()))


def initial_lasso(data: Dataset, n_halvings: int = 10) -> LinearModel:
    """Sparse LDA on the labeled rows alone.

    Takes the smallest ``lam_max * 0.5**k`` (k = 0..n_halvings) whose fit has
    between 1 and ``min(n_l - 1, d)`` nonzero slopes.
    """
    yt = encode_targets(data)
    X = data.X_l
    lam_max = lasso_lambda_max(X, yt)
    limit = min(data.n_l - 1, data.d)
    fits = []
    prev = None
    for k in range(n_halvings + 1):
        prev = lasso_least_squares(X, yt, lam_max * 0.5 ** k, 0.0, start=prev)
        fits.append(prev)
    ok = [m for m in fits if 1 <= m.nnz <= limit]
    if ok:
        return ok[-1]
    nonzero = [m for m in fits if m.nnz >= 1]
    if nonzero:
        return min(nonzero, key=lambda m: m.nnz)
    return fits[-1]


def _mu_schedule(cfg: SolverConfig, k: int) -> float:
    return max(cfg.smoothing.mu_s * cfg.mu_decay ** k, cfg.mu_min)


def dc_fit(data: Dataset, cfg: SolverConfig, init: LinearModel | None = None) -> FitResult:
    """Fit by repeated convex majorization.

    Starting from the labeled-only sparse LDA solution (or ``init``), each
    outer step linearizes ``U2`` at the current iterate, re-anchors the
    intercept penalty at the current slope vector and solves the smoothed
    convex subproblem. Stops when the true objective changes by at most
    ``eps_outer * (1 + |Q|)``.
    """
    if data.n_pos == 0 or data.n_neg == 0:
        encode_targets(data)  # raises EmptyClassError
    prob = _Problem(data)
    init_model = initial_lasso(data) if init is None else init
    used_fallback = False
    fallback_dir = None

    def anchor_of(m: LinearModel):
        nonlocal used_fallback, fallback_dir
        if cfg.c == 0 or np.linalg.norm(m.omega) > 0:
            return m.omega
        used_fallback = True
        if fallback_dir is None:
            fallback_dir = ridge_direction(data)
        return fallback_dir

    x = init_model
    anchor = anchor_of(x)
    trace = [objective_Q(x, data, cfg, anchor)]
    mus = []
    starts = []
    converged = False
    inner_ok = True
    iw = _intercept_weight(cfg, anchor)
    k = 0
    for k in range(1, cfg.max_outer + 1):
        anchor = anchor_of(x)
        iw = _intercept_weight(cfg, anchor)
        starts.append(objective_Q(x, data, cfg, anchor))
        mu = _mu_schedule(cfg, k - 1) if cfg.inner == "apg" else 0.0
        res = prob.solve(cfg, iw, x, mu)
        inner_ok &= res.converged
        x = res.model
        trace.append(objective_Q(x, data, cfg, anchor))
        mus.append(mu)
        if abs(trace[-1] - trace[-2]) <= cfg.eps_outer * (1.0 + abs(trace[-2])):
            converged = True
            break
    return FitResult(
        model=x,
        init_model=init_model,
        objective_trace=tuple(trace),
        outer_iters=k,
        converged=converged,
        mu_trace=tuple(mus),
        used_fallback=used_fallback,
        last_intercept_weight=iw,
        inner_converged=bool(inner_ok),
        step_start=tuple(starts),
    )


def descent_violations(fit: FitResult, data: Dataset, cfg: SolverConfig) -> list:
    """Outer steps whose objective rose by more than the allowed slack.

    Step ``k`` is compared against the previous iterate evaluated with the
    same intercept anchor. The slack is ``10 eps_outer (1 + |Q|)`` plus the
    smoothing gap ``C2 n_u mu / 2`` of the step.
    """
    bad = []
    q = fit.objective_trace
    for k in range(1, len(q)):
        before = fit.step_start[k - 1]
        mu = fit.mu_trace[k - 1]
        slack = 10 * cfg.eps_outer * (1.0 + abs(before)) + cfg.C2 * data.n_u * mu / 2.0
        if q[k] > before + slack:
            bad.append((k, before, q[k]))
    return bad


# ---------------------------------------------------------------------------
# model text format

def format_model(m: LinearModel) -> str:
    """``b=<float>`` then ``omega[<j>]=<float>`` (1-based j) for nonzero slopes."""
    lines = [f"b={m.b:.17g}"]
    for j in np.flatnonzero(m.omega):
        lines.append(f"omega[{j + 1}]={m.omega[j]:.17g}")
    return "\n".join(lines) + "\n"


def parse_model(text: str, d: int | None = None) -> LinearModel:
    b = None
    entries = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise DataError(f"line {lineno}: expected key=value")
        try:
            v = float(val)
        except ValueError:
            raise DataError(f"line {lineno}: bad number {val!r}") from None
        if key == "b":
            b = v
        elif key.startswith("omega[") and key.endswith("]"):
            try:
                j = int(key[6:-1])
            except ValueError:
                raise DataError(f"line {lineno}: bad index in {key!r}") from None
            if j < 1:
                raise DataError(f"line {lineno}: index must be >= 1")
            entries[j - 1] = v
        else:
            raise DataError(f"line {lineno}: unknown key {key!r}")
    if b is None:
        raise DataError("missing intercept line 'b='")
    size = d if d is not None else (max(entries) + 1 if entries else 0)
    if entries and max(entries) >= size:
        raise DataError("coefficient index exceeds dimension")
    omega = np.zeros(size)
    for j, v in entries.items():
        omega[j] = v
    return LinearModel(omega, b)


def write_model(m: LinearModel, path) -> None:
    Path(path).write_text(format_model(m))


def read_model(path, d: int | None = None) -> LinearModel:
    return parse_model(Path(path).read_text(), d)
