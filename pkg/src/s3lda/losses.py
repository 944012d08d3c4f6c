"""Losses for labeled and unlabeled points, and the convex split of the
modified hinge ``U = U1 - U2`` used by the DC iterations.

All functions are vectorized over numpy arrays and accept scalars.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SmoothingParams:
    mu_s: float = 1e-3

    def __post_init__(self):
        if not self.mu_s > 0:
            raise ValueError("mu_s must be positive")


def squared_loss(y_tilde, f):
    return (np.asarray(y_tilde) - f) ** 2


def modified_hinge(z):
    """``(1 - |z|)_+``: largest at the boundary, zero once ``|z| >= 1``."""
    return np.maximum(0.0, 1.0 - np.abs(z))


def u1(z):
    return np.maximum(0.0, np.abs(z) - 1.0)


def u2(z):
    return np.abs(z) - 1.0


def u2_subgradient(z):
    # np.sign(0) == 0, the symmetric choice
    return np.sign(z)


def u1_smoothed(z, p: SmoothingParams):
    """Huberized ``(|z|-1)_+``.

    With ``t = |z| - 1`` the kink at ``t = 0`` is replaced by
    ``(t + mu)^2 / (4 mu)`` on ``|t| < mu``.  The surrogate lies above ``u1``
    and exceeds it by at most ``mu/4``.
    """
    mu = p.mu_s
    t = np.abs(z) - 1.0
    return np.where(t >= mu, t, np.where(t <= -mu, 0.0, (t + mu) ** 2 / (4.0 * mu)))


def u1_smoothed_grad(z, p: SmoothingParams):
    mu = p.mu_s
    z = np.asarray(z, dtype=float)
    t = np.abs(z) - 1.0
    slope = np.clip((t + mu) / (2.0 * mu), 0.0, 1.0)
    return np.sign(z) * slope


def hinge(margin):
    """Ordinary hinge ``(1 - m)_+`` on margins ``m = y f``."""
    return np.maximum(0.0, 1.0 - np.asarray(margin))


def hinge_smoothed(margin, p: SmoothingParams):
    """Huberized hinge, same construction as :func:`u1_smoothed` with ``t = 1 - m``."""
    mu = p.mu_s
    t = 1.0 - np.asarray(margin, dtype=float)
    return np.where(t >= mu, t, np.where(t <= -mu, 0.0, (t + mu) ** 2 / (4.0 * mu)))


def hinge_smoothed_grad(margin, p: SmoothingParams):
    """Derivative with respect to the margin."""
    mu = p.mu_s
    t = 1.0 - np.asarray(margin, dtype=float)
    return -np.clip((t + mu) / (2.0 * mu), 0.0, 1.0)
