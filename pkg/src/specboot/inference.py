"""Bootstrap inference for the stable rank ``r = tr(Sigma)^2 / tr(Sigma^2)``.

All three procedures bootstrap the statistic ``(r* - r~)/p`` where ``r*`` is
the bias-corrected stable rank of a bootstrap sample and ``r~`` the stable rank
of the bootstrap population.

* ``stable_rank_ci``: ``[r_hat - p q(1 - alpha/2), r_hat - p q(alpha/2)]``.
* ``stable_rank_test``: reject ``r/p <= eps0`` when ``r_hat/p - eps0 > q(1 - alpha)``.
* ``sphericity_test``: bootstrap from the identity; reject ``Sigma = s I`` when
  ``r_hat/p - 1 <= q(alpha)``.
"""

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .bootstrap import (
    STABLE_RANK_STAR,
    BootstrapConfig,
    bootstrap_distribution,
    estimate_inputs,
)
from .errors import ConfigurationError, DomainError, InsufficientDataError
from .estimators import _as_array, estimate_moments, estimate_varsigma_sq, stable_rank_from_traces, covariance_traces


def empirical_quantile(draws, q):
    """Order statistic ``ceil(q B)`` (1-based) of the sorted draws."""
    x = np.sort(np.asarray(draws, dtype=float).ravel())
    if x.size == 0:
        raise InsufficientDataError("no draws to take a quantile of")
    if not 0 < q < 1:
        raise ConfigurationError(f"quantile level must be in (0, 1), got {q}")
    k = math.ceil(q * x.size)
    return float(x[min(max(k, 1), x.size) - 1])


@dataclass(frozen=True)
class RankInferenceResult:
    procedure: str
    r_hat: float
    p: int
    n: int
    alpha: float
    B: int
    q_lo: float | None = None
    q_hi: float | None = None
    interval: tuple | None = None
    reject: bool | None = None
    statistic: float | None = None
    threshold: float | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        d = asdict(self)
        if self.interval is not None:
            d["interval"] = list(self.interval)
        return d

    def to_json(self):
        return json.dumps(self.to_dict())

    def summary(self):
        head = f"{self.procedure}: n={self.n} p={self.p} r_hat={self.r_hat:.4g}"
        if self.interval is not None:
            lo, hi = self.interval
            return f"{head} {100 * (1 - self.alpha):.0f}% interval [{lo:.4g}, {hi:.4g}]"
        verdict = "reject" if self.reject else "do not reject"
        return f"{head} statistic={self.statistic:.4g} threshold={self.threshold:.4g} -> {verdict}"


def _opts(opts):
    opts = dict(opts or {})
    known = {"master_seed", "quest", "workers", "inputs"}
    unknown = set(opts) - known
    if unknown:
        raise ConfigurationError(f"unknown options {sorted(unknown)}")
    return opts


def _check_alpha(alpha):
    if not 0 < alpha < 1:
        raise ConfigurationError(f"alpha must be in (0, 1), got {alpha}")


def _rank_draws(X, B, opts):
    """Bootstrap draws of ``(r* - r~)/p`` from the capped QuEST spectrum."""
    inputs = opts.get("inputs") or estimate_inputs(X, opts.get("quest"))
    b = inputs.bundle
    cfg = BootstrapConfig(
        B=B,
        n=b.n,
        p=b.p,
        varsigma_sq_hat=b.varsigma_sq_hat,
        spectrum_tilde=inputs.spectrum_tilde,
        master_seed=opts.get("master_seed", 0),
        statistic=STABLE_RANK_STAR,
    )
    draws = bootstrap_distribution(cfg, workers=opts.get("workers"))
    return inputs, draws.values


def stable_rank_ci(X, B=250, alpha=0.05, opts=None):
    """Bootstrap confidence interval for the stable rank of ``Sigma``.

    ``opts`` may contain ``master_seed``, ``workers``, ``quest`` (QuEST options)
    and ``inputs`` (a precomputed ``BootstrapInputs``).
    """
    _check_alpha(alpha)
    opts = _opts(opts)
    inputs, draws = _rank_draws(X, B, opts)
    b = inputs.bundle
    q_lo = empirical_quantile(draws, alpha / 2)
    q_hi = empirical_quantile(draws, 1 - alpha / 2)
    interval = (b.r_hat - b.p * q_hi, b.r_hat - b.p * q_lo)
    return RankInferenceResult(
        "stable_rank_ci", b.r_hat, b.p, b.n, alpha, draws.size, q_lo, q_hi, interval,
        extra={"quest_converged": inputs.quest.converged},
    )


def stable_rank_test(X, epsilon0, alpha=0.05, B=250, opts=None):
    """Test ``H0: r/p <= epsilon0`` against ``r/p > epsilon0``."""
    _check_alpha(alpha)
    if not 0 < epsilon0 < 1:
        raise ConfigurationError(f"epsilon0 must be in (0, 1), got {epsilon0}")
    opts = _opts(opts)
    inputs, draws = _rank_draws(X, B, opts)
    b = inputs.bundle
    q_hi = empirical_quantile(draws, 1 - alpha)
    stat = b.r_hat / b.p - epsilon0
    return RankInferenceResult(
        "stable_rank_test", b.r_hat, b.p, b.n, alpha, draws.size, q_hi=q_hi,
        reject=bool(stat > q_hi), statistic=stat, threshold=q_hi,
        extra={"epsilon0": epsilon0, "quest_converged": inputs.quest.converged},
    )


def sphericity_test(X, alpha=0.05, B=250, opts=None):
    """Test ``Sigma`` proportional to the identity; bootstrap with ``Sigma~ = I``."""
    _check_alpha(alpha)
    opts = _opts(opts)
    x = _as_array(X)
    n, p = x.shape
    alpha_hat, beta_hat, gamma_hat = estimate_moments(x)
    vs = estimate_varsigma_sq(alpha_hat, beta_hat, gamma_hat, p)
    tr1, tr2 = covariance_traces(x)
    r_hat = stable_rank_from_traces(tr1, tr2, n)
    cfg = BootstrapConfig(
        B=B, n=n, p=p, varsigma_sq_hat=vs, spectrum_tilde=np.ones(p),
        master_seed=opts.get("master_seed", 0), statistic=STABLE_RANK_STAR,
    )
    draws = bootstrap_distribution(cfg, workers=opts.get("workers")).values
    q_lo = empirical_quantile(draws, alpha)
    stat = r_hat / p - 1.0
    return RankInferenceResult(
        "sphericity_test", r_hat, p, n, alpha, draws.size, q_lo=q_lo,
        reject=bool(stat <= q_lo), statistic=stat, threshold=q_lo,
        extra={"varsigma_sq_hat": vs},
    )


# -- limiting variance --------------------------------------------------------------


@dataclass(frozen=True)
class LimitMoments:
    """Asymptotic variance of ``r_hat - r`` from the first four moments of ``H``."""

    phi: tuple
    c: float
    tau: float
    K: tuple
    gradient: tuple
    var_rank: float

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict())


def limiting_rank_variance(phi, c, tau):
    """Quadratic form ``grad^T K grad`` for moments ``phi = (phi1, .., phi4)``.

    ``K`` is the limiting covariance of ``p (T(x) - theta(x), T(x^2) - theta(x^2))``
    and ``grad`` the gradient of ``(x1, x2) -> x1^2 / (x2 - c x1^2)`` at the centre.
    """
    f1, f2, f3, f4 = (float(v) for v in phi)
    if not f2 > 0:
        raise DomainError(f"phi2 must be positive, got {f2}")
    k11 = 2 * c * f2 + c * (tau - 2) * f1**2
    k12 = 4 * c * f3 + 4 * c**2 * f1 * f2 + 2 * c * (tau - 2) * f1 * (c * f1**2 + f2)
    k22 = (
        8 * c * f4
        + 4 * c**2 * f2**2
        + 16 * c**2 * f1 * f3
        + 8 * c**3 * f1**2 * f2
        + 4 * c * (tau - 2) * (c * f1**2 + f2) ** 2
    )
    K = np.array([[k11, k12], [k12, k22]])
    grad = np.array([2 * f1 / f2 + 2 * c * f1**3 / f2**2, -(f1**2) / f2**2])
    var = float(grad @ K @ grad)
    if var < 0:
        # Only roundoff can make the form negative; the exact value is nonnegative.
        if var < -1e-9 * max(1.0, abs(grad) @ abs(K) @ abs(grad)):
            raise DomainError(f"negative limiting variance {var!r}; moments are inconsistent")
        var = 0.0
    return LimitMoments(
        phi=(f1, f2, f3, f4),
        c=float(c),
        tau=float(tau),
        K=tuple(map(tuple, K.tolist())),
        gradient=tuple(grad.tolist()),
        var_rank=var,
    )


def closed_form_rank_variance(phi, c):
    """``(4 c phi1^2 / phi2^4)(c phi1^2 phi2^2 + 2 phi1^2 phi4 + 2 phi2^3 - 4 phi1 phi2 phi3)``."""
    f1, f2, f3, f4 = (float(v) for v in phi)
    return 4 * c * f1**2 / f2**4 * (c * f1**2 * f2**2 + 2 * f1**2 * f4 + 2 * f2**3 - 4 * f1 * f2 * f3)
