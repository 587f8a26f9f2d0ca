"""Population spectrum estimation by inverting the MP map.

The candidate population spectrum is ``K`` equally weighted atoms.  The
forward map sends a candidate to the quantiles of ``Psi(candidate, c)`` at the
levels ``(i - 1/2)/p``; the estimate minimises the squared distance between
those predictions and the observed sample eigenvalues.  Sample eigenvalues are
divided by their mean before fitting and the result is rescaled afterwards, so
the estimator is exactly scale equivariant.

The optimiser is a projected Levenberg-Marquardt iteration on the cone
``t >= 0``.  Its Jacobian is analytic (see ``RealAxisSolver.quantile_jacobian``).
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DimensionError
from .mp import RealAxisSolver
from .spectra import SpectrumModel


@dataclass(frozen=True)
class QuestOptions:
    k: int = 100
    max_iters: int = 500
    tol: float = 1e-6
    grid_points: int = 256

    @classmethod
    def from_dict(cls, d):
        return cls(**{k: v for k, v in (d or {}).items() if k in cls.__dataclass_fields__})


@dataclass(frozen=True, eq=False)
class SpectrumEstimate:
    """Estimated population eigenvalues (descending) and optimiser diagnostics."""

    eigenvalues: np.ndarray
    objective_value: float
    iterations: int
    converged: bool
    atoms: np.ndarray = field(repr=False, default=None)
    history: tuple = field(repr=False, default=())

    def to_dict(self):
        return {
            "eigenvalues": self.eigenvalues.tolist(),
            "objective_value": self.objective_value,
            "iterations": self.iterations,
            "converged": self.converged,
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def _levels(p):
    return (np.arange(p) + 0.5) / p


def forward_sample_spectrum(candidate, c, p, grid_points=256):
    """Predicted sample eigenvalues (descending) for a candidate population spectrum."""
    if isinstance(candidate, SpectrumModel):
        values, weights = candidate.values, candidate.weights
    else:
        values = np.asarray(candidate, dtype=float)
        weights = np.full(values.size, 1.0 / values.size)
    solver = RealAxisSolver(values, weights, c)
    return solver.quantiles(_levels(p), total=grid_points)[::-1].copy()


def _initial_atoms(y, c, K):
    # For c >= 1 only about n eigenvalues are informative; their mean is about c.
    if c >= 1:
        pos = y[y > 0]
        base = pos / c if pos.size else np.ones(1)
    else:
        base = y
    q = np.quantile(base, _levels(K))
    m = base.mean()
    t = m + (q - m) * np.sqrt(1.0 / (1.0 + c))
    return np.maximum(t, 1e-3 * m)


def estimate_population_spectrum(sample_eigs, n, p=None, opts=None):
    """Fit equally weighted population atoms to observed sample eigenvalues.

    Parameters
    ----------
    sample_eigs : array_like
        Sample covariance eigenvalues (any order, length ``p``).
    n : int
        Number of observations.
    opts : QuestOptions or dict, optional
        ``k`` (number of atoms, capped at ``p``), ``max_iters``, ``tol``
        (relative objective improvement that counts as converged) and
        ``grid_points`` (CDF table size used to bracket quantiles).

    Returns
    -------
    SpectrumEstimate
        Never raises on optimiser trouble; ``converged`` is False instead.
    """
    if not isinstance(opts, QuestOptions):
        opts = QuestOptions.from_dict(opts)
    lam = np.sort(np.asarray(sample_eigs, dtype=float))
    if p is None:
        p = lam.size
    if lam.size != p:
        raise DimensionError(f"got {lam.size} sample eigenvalues for p={p}")
    if n < 1:
        raise DimensionError(f"n must be positive, got {n}")
    if np.any(lam < 0) or not np.all(np.isfinite(lam)):
        raise ConfigurationError("sample eigenvalues must be finite and nonnegative")
    scale = lam.mean()
    if scale == 0:
        return SpectrumEstimate(np.zeros(p), 0.0, 0, True, np.zeros(1), (0.0,))

    y = lam / scale
    c = p / n
    K = min(p, int(opts.k))
    w = np.full(K, 1.0 / K)
    u = _levels(p)

    def forward(t):
        solver = RealAxisSolver(t, w, c)
        q, a, S = solver.quantiles(u, total=opts.grid_points, return_ab=True)
        return solver, q, a, S

    t = np.sort(_initial_atoms(y, c, K))
    solver, q, a, S = forward(t)
    r = q - y
    f = float(r @ r)
    history = [f]
    mu = 1e-3
    converged = False
    it = 0
    J = solver.quantile_jacobian(a, S, t, w)
    while it < opts.max_iters:
        it += 1
        JtJ = J.T @ J
        g = J.T @ r
        diag = np.diag(JtJ).copy()
        floor = 1e-12 * max(diag.max(), 1e-300)
        A = JtJ + mu * np.diag(np.maximum(diag, floor))
        try:
            step = -np.linalg.solve(A, g)
        except np.linalg.LinAlgError:
            mu *= 10.0
            continue
        t_new = np.sort(np.maximum(t + step, 0.0))
        if not np.any(t_new > 0):
            mu *= 4.0
            continue
        solver_new, q_new, a_new, S_new = forward(t_new)
        r_new = q_new - y
        f_new = float(r_new @ r_new)
        if f_new < f:
            rel = (f - f_new) / f if f > 0 else 0.0
            t, r, f = t_new, r_new, f_new
            J = solver_new.quantile_jacobian(a_new, S_new, t, w)
            history.append(f)
            mu = max(mu / 3.0, 1e-12)
            if rel < opts.tol or f == 0.0:
                converged = True
                break
        else:
            mu *= 4.0
            if mu > 1e12:
                # No descent direction left at this resolution: a stationary point.
                converged = True
                break

    model = SpectrumModel.from_eigenvalues(t)
    eig = model.quantiles(u)[::-1] * scale
    return SpectrumEstimate(
        eigenvalues=np.ascontiguousarray(eig),
        objective_value=f * scale**2,
        iterations=it,
        converged=converged,
        atoms=t * scale,
        history=tuple(h * scale**2 for h in history),
    )
