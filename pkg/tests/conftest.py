import numpy as np
import pytest

from s3lda.data import Dataset


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def make_partial(rng, n_l=20, n_u=60, d=3, shift=1.5):
    """Two Gaussian classes split along coordinate 0, partially labeled."""
    y = np.where(np.arange(n_l) % 2 == 0, 1.0, -1.0)
    X_l = rng.standard_normal((n_l, d))
    X_l[:, 0] += shift * y
    yu = np.where(rng.random(n_u) < 0.5, 1.0, -1.0)
    X_u = rng.standard_normal((n_u, d))
    X_u[:, 0] += shift * yu
    return Dataset(X_l, y, X_u)
