"""Plug-in estimators computed from a single data matrix."""

import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DataError, DegenerateInputError, InsufficientDataError


def _as_array(X):
    x = np.asarray(getattr(X, "values", X), dtype=float)
    if x.ndim != 2:
        raise DataError(f"expected a 2-d data matrix, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DataError("data contain non-finite entries")
    return x


def sample_covariance_eigs(X):
    """Eigenvalues of ``X^T X / n`` in descending order, clamped at zero.

    For ``p > n`` the ``n x n`` Gram matrix is diagonalised and ``p - n``
    exact zeros are appended.
    """
    x = _as_array(X)
    n, p = x.shape
    if p > n:
        lam = np.linalg.eigvalsh(x @ x.T / n)
        lam = np.concatenate([lam, np.zeros(p - n)])
    else:
        lam = np.linalg.eigvalsh(x.T @ x / n)
    return np.sort(np.maximum(lam, 0.0))[::-1]


def covariance_traces(X):
    """``(tr(S), tr(S^2))`` for ``S = X^T X / n`` without an eigensolve."""
    x = _as_array(X)
    n, p = x.shape
    gram = x @ x.T if p > n else x.T @ x
    return float(np.trace(gram)) / n, float(np.sum(gram * gram)) / n**2


def estimate_moments(X):
    """Return ``(alpha_hat, beta_hat, gamma_hat)``.

    ``alpha_hat = tr(S^2) - tr(S)^2 / n`` estimates ``tr(Sigma^2)``,
    ``beta_hat`` is the sample variance of the squared row norms and
    ``gamma_hat = tr(S)^2``.
    """
    x = _as_array(X)
    n = x.shape[0]
    if n < 2:
        raise InsufficientDataError("at least two observations are required")
    tr1, tr2 = covariance_traces(x)
    norms = np.einsum("ij,ij->i", x, x)
    beta = float(np.var(norms, ddof=1))
    return tr2 - tr1**2 / n, beta, tr1**2


def estimate_varsigma_sq(alpha_hat, beta_hat, gamma_hat, p):
    """Nonnegative-part estimate of ``var(xi^2)``:

    ``( p(p+2) (beta - 2 alpha) / (gamma + 2 alpha) + 2p )_+``
    """
    denom = gamma_hat + 2.0 * alpha_hat
    if not denom > 0:
        raise DegenerateInputError(f"gamma_hat + 2 alpha_hat = {denom!r} is not positive")
    value = p * (p + 2.0) * (beta_hat - 2.0 * alpha_hat) / denom + 2.0 * p
    return max(value, 0.0)


def stable_rank_hat(sample_eigs, n):
    """Bias-corrected stable rank ``tr(S)^2 / (tr(S^2) - tr(S)^2/n)``; ``n`` if degenerate."""
    lam = np.asarray(sample_eigs, dtype=float)
    return stable_rank_from_traces(lam.sum(), np.dot(lam, lam), n)


def stable_rank_from_traces(tr1, tr2, n):
    denom = tr2 - tr1**2 / n
    if denom <= 0 or tr1 == 0:
        return float(n)
    return tr1**2 / denom


def eigenvalue_cap(quest_eigs, b_hat):
    """Elementwise ``min(lambda_Q, b_hat)``."""
    return np.minimum(np.asarray(quest_eigs, dtype=float), b_hat)


@dataclass(frozen=True)
class EstimatorBundle:
    alpha_hat: float
    beta_hat: float
    gamma_hat: float
    varsigma_sq_hat: float
    b_hat: float
    r_hat: float
    sample_eigs: tuple
    n: int
    p: int

    def to_dict(self):
        d = asdict(self)
        d["sample_eigs"] = list(self.sample_eigs)
        return d

    def to_json(self):
        return json.dumps(self.to_dict())


def estimate_all(X):
    """Every single-dataset quantity the bootstrap procedures need."""
    x = _as_array(X)
    n, p = x.shape
    lam = sample_covariance_eigs(x)
    alpha, beta, gamma = estimate_moments(x)
    return EstimatorBundle(
        alpha_hat=alpha,
        beta_hat=beta,
        gamma_hat=gamma,
        varsigma_sq_hat=estimate_varsigma_sq(alpha, beta, gamma, p),
        b_hat=float(lam[0]) + 1.0,
        r_hat=stable_rank_hat(lam, n),
        sample_eigs=tuple(lam.tolist()),
        n=n,
        p=p,
    )
