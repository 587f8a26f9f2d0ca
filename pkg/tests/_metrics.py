"""Distances between empirical distributions used by the QuEST checks."""

import numpy as np


def _cdf(sample):
    s = np.sort(np.asarray(sample, dtype=float))
    return lambda x: np.searchsorted(s, x, side="right") / s.size


def ks_distance(a, b):
    """Kolmogorov distance between the empirical distributions of ``a`` and ``b``."""
    F, G = _cdf(a), _cdf(b)
    grid = np.union1d(a, b)
    return float(np.max(np.abs(F(grid) - G(grid))))


def levy_distance(a, b, iters=50):
    """Levy distance, which metrizes weak convergence (found by bisection)."""
    F, G = _cdf(a), _cdf(b)
    grid = np.union1d(a, b)

    def fits(e):
        xs = np.concatenate([grid, grid - e - 1e-12, grid + e + 1e-12])
        return np.all(F(xs - e) - e <= G(xs) + 1e-12) and np.all(G(xs) <= F(xs + e) + e + 1e-12)

    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        lo, hi = (lo, mid) if fits(mid) else (mid, hi)
    return hi
