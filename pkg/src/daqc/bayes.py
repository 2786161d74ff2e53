"""Gaussian-process surrogate and expected-improvement acquisition on the unit box.

Hyperparameters are fixed (no marginal-likelihood fit): with a budget of ten
acquisitions there is too little data to fit them reliably.
"""

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.stats import norm, qmc


class GaussianProcess:
    """Zero-mean GP with a squared-exponential kernel on standardized targets."""

    def __init__(self, length_scale=0.2, noise=1e-6):
        self.length_scale = length_scale
        self.noise = noise

    def _kernel(self, A, B):
        d2 = (np.sum(A * A, 1)[:, None] + np.sum(B * B, 1)[None, :] - 2 * A @ B.T)
        return np.exp(-0.5 * np.maximum(d2, 0.0) / self.length_scale ** 2)

    def fit(self, X, y):
        self.X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        self.y_mean = y.mean()
        self.y_std = y.std() if y.std() > 0 else 1.0
        z = (y - self.y_mean) / self.y_std
        K = self._kernel(self.X, self.X) + self.noise * np.eye(len(self.X))
        self._cho = cho_factor(K, lower=True)
        self._alpha = cho_solve(self._cho, z)
        return self

    def predict(self, Xs):
        Xs = np.atleast_2d(Xs)
        Ks = self._kernel(Xs, self.X)
        mu = Ks @ self._alpha
        v = cho_solve(self._cho, Ks.T)
        var = np.maximum(1.0 - np.sum(Ks * v.T, 1), 1e-12)
        return mu * self.y_std + self.y_mean, np.sqrt(var) * self.y_std


def expected_improvement(mu, sigma, best, xi=0.0):
    """EI for minimization."""
    imp = best - mu - xi
    z = imp / sigma
    return imp * norm.cdf(z) + sigma * norm.pdf(z)


def latin_hypercube(n_points, dim, rng):
    if n_points <= 0:
        return np.empty((0, dim))
    return qmc.LatinHypercube(d=dim, seed=rng).random(n_points)


def propose(gp, best_x, best_y, rng, n_random=2048, n_local=2048, local_scale=0.05):
    """Maximize EI over a random candidate cloud plus perturbations of the incumbent."""
    dim = best_x.size
    cand = np.vstack([
        rng.random((n_random, dim)),
        np.clip(best_x + local_scale * rng.standard_normal((n_local, dim)), 0.0, 1.0),
    ])
    mu, sigma = gp.predict(cand)
    ei = expected_improvement(mu, sigma, best_y)
    return cand[int(np.argmax(ei))]
