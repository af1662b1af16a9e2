"""Random Gaussian states and tangents for tests and the ``check`` command."""

import numpy as np
from scipy.stats import ortho_group

from . import skewlin
from .gaussian import CorrelationMatrix


def random_orthogonal(dim, rng):
    if dim == 1:
        return np.ones((1, 1))
    return ortho_group.rvs(dim, random_state=rng)


def random_state(n, rng=None, gamma_max=0.95):
    """Full-rank state with ``|gamma_k|`` uniform in ``[0, gamma_max)``, random basis."""
    rng = np.random.default_rng(rng)
    gammas = rng.uniform(0, gamma_max, size=n) * rng.choice([-1, 1], size=n)
    q = random_orthogonal(2 * n, rng)
    return CorrelationMatrix(q.T @ skewlin.block_matrix(gammas) @ q)


def state_from_spectrum(gammas, rng=None):
    """State with prescribed signed ``gamma_k`` in a random Majorana basis."""
    rng = np.random.default_rng(rng)
    gammas = np.asarray(gammas, dtype=float)
    q = random_orthogonal(2 * len(gammas), rng)
    return CorrelationMatrix(q.T @ skewlin.block_matrix(gammas) @ q)


def random_tangents(n, d, rng=None):
    """``d`` independent Gaussian antisymmetric tangents of size ``2n``."""
    rng = np.random.default_rng(rng)
    return [skewlin.random_antisym(2 * n, rng) for _ in range(d)]
