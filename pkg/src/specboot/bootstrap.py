"""Parametric bootstrap for spectral statistics.

Each replicate draws ``x*_i = xi*_i diag(sqrt(lambda~)) u*_i`` for ``i = 1..n``,
forms the sample covariance and evaluates one or more statistics on it.  The
radial law defaults to a Gamma distribution with mean ``p`` and variance
``varsigma_sq_hat``.  Replicate ``b`` uses the random stream derived from
``(master_seed, b)``, so results do not depend on scheduling or worker count.

A replacement radial law only needs ``E(xi*^2) = p`` and a variance that tracks
``varsigma_sq_hat``; any object with ``sample(p, rng, size)`` can be supplied.
"""

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from ._seeding import derive_seed
from .errors import ConfigurationError, DimensionError, DomainError, ReplicateError
from .estimators import eigenvalue_cap, estimate_all
from .mp import centering_parameter, centering_parameter_mc, esd_grid, resolve_function
from .quest import QuestOptions, estimate_population_spectrum
from .sampling import EllipticalLaw, sample_unit_sphere
from .spectra import SpectrumModel

STAT_KINDS = ("lss", "largest_eig", "eigen_gap", "stable_rank_star", "custom")

# Statistics computable from (tr S, tr S^2) alone.
_TRACE_ONLY = {"stable_rank_star"}


@dataclass(frozen=True, eq=False)
class StatisticSpec:
    """A spectral statistic.

    ``kind="lss"`` evaluates ``(1/p) sum f(lambda_j)`` with ``f`` a label from
    ``mp.FUNCTIONS`` or a callable.  If ``centering`` is set the value reported
    is ``p (T - centering)``.  ``kind="custom"`` calls ``fn(eigs)`` on the
    descending eigenvalues.
    """

    kind: str
    f: object = None
    centering: float | None = None
    fn: object = None
    label: str | None = None

    def __post_init__(self):
        if self.kind not in STAT_KINDS:
            raise ConfigurationError(f"unknown statistic kind {self.kind!r}")
        if self.kind == "lss":
            resolve_function(self.f)
        if self.kind == "custom" and not callable(self.fn):
            raise ConfigurationError("custom statistic needs a callable 'fn'")

    @property
    def name(self):
        if self.label:
            return self.label
        if self.kind == "lss":
            return f"lss_{self.f if isinstance(self.f, str) else 'custom'}"
        return self.kind

    @property
    def needs_spectrum(self):
        if self.kind in _TRACE_ONLY:
            return False
        return not (self.kind == "lss" and self.f in ("identity", "square", "one"))

    def with_centering(self, value):
        return StatisticSpec(self.kind, self.f, value, self.fn, self.label)

    def to_dict(self):
        if self.kind == "custom" or (self.kind == "lss" and not isinstance(self.f, str)):
            raise ConfigurationError("callable statistics cannot be serialised")
        d = {"kind": self.kind}
        if self.f is not None:
            d["f"] = self.f
        if self.centering is not None:
            d["centering"] = self.centering
        if self.label:
            d["label"] = self.label
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(d["kind"], d.get("f"), d.get("centering"), None, d.get("label"))


def lss(f, centering=None):
    return StatisticSpec("lss", f, centering)


LARGEST_EIG = StatisticSpec("largest_eig")
EIGEN_GAP = StatisticSpec("eigen_gap")
STABLE_RANK_STAR = StatisticSpec("stable_rank_star")


def _centered(spec, val, p):
    if spec.centering is None:
        return val
    if spec.centering is True:
        raise ConfigurationError(f"{spec.name}: centering requested but never computed")
    return p * (val - spec.centering)


def _stable_rank_star(tr1, tr2, n, p, ref_tr1, ref_tr2):
    d_star = tr2 - tr1**2 / n
    if d_star == 0 or ref_tr2 == 0:
        return 0.0
    return (tr1**2 / d_star - ref_tr1**2 / ref_tr2) / p


def evaluate_statistic(spec, eigs, aux=None):
    """Evaluate ``spec`` on descending eigenvalues ``eigs``.

    ``aux`` supplies ``n`` and ``reference`` (the bootstrap population
    spectrum) for ``stable_rank_star``.
    """
    lam = np.asarray(eigs, dtype=float)
    p = lam.size
    aux = aux or {}
    if spec.kind == "lss":
        fn = resolve_function(spec.f)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = float(np.mean(fn(lam)))
        if not np.isfinite(val):
            raise DomainError(f"{spec.name} is not finite on these eigenvalues")
        return _centered(spec, val, p)
    if spec.kind == "largest_eig":
        return float(lam[0])
    if spec.kind == "eigen_gap":
        if p < 2:
            raise DimensionError("eigen_gap needs p >= 2")
        return float(lam[0] - lam[1])
    if spec.kind == "stable_rank_star":
        ref = np.asarray(aux["reference"], dtype=float)
        return _stable_rank_star(lam.sum(), lam @ lam, aux["n"], p, ref.sum(), ref @ ref)
    return float(spec.fn(lam))


# -- radial law --------------------------------------------------------------------


@dataclass(frozen=True)
class GammaRadial:
    """Radial law of ``xi*^2``: Gamma(shape, scale), or the point mass at ``p``."""

    p: int
    shape: float | None
    scale: float | None

    @property
    def is_point_mass(self):
        return self.shape is None

    @property
    def law(self):
        """The same law as an ``EllipticalLaw`` (variance grows linearly with dimension)."""
        if self.is_point_mass:
            return EllipticalLaw.point_mass()
        return EllipticalLaw.gamma(self.scale)

    def sample(self, p, rng, size=None):
        if p != self.p:
            return self.law.sample(p, rng, size)
        if self.is_point_mass:
            return np.full(size, float(p)) if size is not None else float(p)
        return rng.gamma(self.shape, self.scale, size)


def gamma_xi_params(p, varsigma_sq_hat):
    """Gamma law with mean ``p`` and variance ``varsigma_sq_hat``.

    Shape ``p^2 / varsigma_sq_hat`` and scale ``varsigma_sq_hat / p``; a zero
    variance gives the point mass at ``p``.
    """
    if p < 1:
        raise DimensionError(f"p must be positive, got {p}")
    if varsigma_sq_hat < 0:
        raise ConfigurationError("varsigma_sq_hat must be nonnegative")
    if varsigma_sq_hat == 0:
        return GammaRadial(int(p), None, None)
    return GammaRadial(int(p), p * p / varsigma_sq_hat, varsigma_sq_hat / p)


# -- engine ------------------------------------------------------------------------


def default_workers():
    raw = os.environ.get("SPECBOOT_WORKERS", "").strip()
    if not raw:
        return 1
    try:
        w = int(raw)
    except ValueError:
        raise ConfigurationError(f"SPECBOOT_WORKERS must be an integer, got {raw!r}") from None
    if w < 1:
        raise ConfigurationError("SPECBOOT_WORKERS must be at least 1")
    return w


@dataclass(frozen=True, eq=False)
class BootstrapConfig:
    B: int
    n: int
    p: int
    varsigma_sq_hat: float
    spectrum_tilde: np.ndarray
    master_seed: int
    statistic: object
    radial: object = None

    def __post_init__(self):
        lam = np.sort(np.asarray(self.spectrum_tilde, dtype=float))[::-1]
        if self.B < 1:
            raise ConfigurationError("B must be at least 1")
        if self.n < 1 or self.p < 1:
            raise DimensionError("n and p must be positive")
        if lam.shape != (self.p,):
            raise DimensionError(f"spectrum_tilde has shape {lam.shape}, expected ({self.p},)")
        if np.any(lam < 0) or not np.all(np.isfinite(lam)):
            raise ConfigurationError("spectrum_tilde must be finite and nonnegative")
        if self.varsigma_sq_hat < 0:
            raise ConfigurationError("varsigma_sq_hat must be nonnegative")
        lam.setflags(write=False)
        object.__setattr__(self, "spectrum_tilde", lam)
        stats = self.statistic
        if isinstance(stats, StatisticSpec):
            stats = (stats,)
        object.__setattr__(self, "statistic", tuple(stats))
        if self.radial is None:
            object.__setattr__(self, "radial", gamma_xi_params(self.p, self.varsigma_sq_hat))

    @property
    def statistics(self):
        return self.statistic

    def to_dict(self):
        return {
            "B": self.B,
            "n": self.n,
            "p": self.p,
            "varsigma_sq_hat": self.varsigma_sq_hat,
            "spectrum_tilde": self.spectrum_tilde.tolist(),
            "master_seed": self.master_seed,
            "statistic": [s.to_dict() for s in self.statistic],
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        stats = d["statistic"]
        if isinstance(stats, dict):
            stats = [stats]
        return cls(
            B=int(d["B"]),
            n=int(d["n"]),
            p=int(d["p"]),
            varsigma_sq_hat=float(d["varsigma_sq_hat"]),
            spectrum_tilde=np.asarray(d["spectrum_tilde"], dtype=float),
            master_seed=int(d["master_seed"]),
            statistic=tuple(StatisticSpec.from_dict(s) for s in stats),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _replicate_data(config, rng):
    n, p = config.n, config.p
    xi2 = config.radial.sample(p, rng, n)
    u = sample_unit_sphere(p, rng, n)
    return (np.sqrt(xi2)[:, None] * u) * np.sqrt(config.spectrum_tilde)


def _eigs_and_traces(x, n, p, need):
    """Sample covariance information: descending eigenvalues per ``need``.

    ``need`` is ``"all"``, an integer count of leading eigenvalues, or 0.
    """
    gram = x @ x.T / n if p > n else x.T @ x / n
    tr1 = float(np.trace(gram))
    tr2 = float(np.sum(gram * gram))
    m = gram.shape[0]
    if need == "all":
        lam = np.linalg.eigvalsh(gram)[::-1]
        lam = np.maximum(lam, 0.0)
        if p > n:
            lam = np.concatenate([lam, np.zeros(p - n)])
    elif need:
        k = min(int(need), m)
        lam = linalg.eigh(gram, eigvals_only=True, subset_by_index=[m - k, m - 1])[::-1]
        lam = np.maximum(lam, 0.0)
        if lam.size < need:
            lam = np.concatenate([lam, np.zeros(need - lam.size)])
    else:
        lam = None
    return lam, tr1, tr2


def _evaluate_all(stats, lam, tr1, tr2, n, p, reference):
    out = []
    for s in stats:
        if s.kind == "stable_rank_star":
            out.append(_stable_rank_star(tr1, tr2, n, p, reference.sum(), reference @ reference))
        elif s.kind == "lss" and s.f in ("identity", "square", "one"):
            val = {"identity": tr1 / p, "square": tr2 / p, "one": 1.0}[s.f]
            out.append(_centered(s, val, p))
        else:
            out.append(evaluate_statistic(s, lam, {"n": n, "reference": reference}))
    return out


def _needed(stats):
    if any(s.needs_spectrum and s.kind not in ("largest_eig", "eigen_gap") for s in stats):
        return "all"
    if any(s.kind == "eigen_gap" for s in stats):
        return 2
    if any(s.kind == "largest_eig" for s in stats):
        return 1
    return 0


def bootstrap_replicate(config, replicate_index):
    """Statistic value(s) of replicate ``replicate_index``.

    Returns a float for a single statistic and a 1-d array otherwise.
    """
    seed = derive_seed(config.master_seed, replicate_index)
    rng = np.random.default_rng(seed)
    try:
        x = _replicate_data(config, rng)
        lam, tr1, tr2 = _eigs_and_traces(x, config.n, config.p, _needed(config.statistic))
        vals = _evaluate_all(
            config.statistic, lam, tr1, tr2, config.n, config.p, config.spectrum_tilde
        )
    except (DomainError, DimensionError, ArithmeticError, np.linalg.LinAlgError) as exc:
        raise ReplicateError(f"replicate {replicate_index} failed: {exc}", replicate_index) from exc
    if not np.all(np.isfinite(vals)):
        raise ReplicateError(f"replicate {replicate_index} produced a non-finite value", replicate_index)
    return vals[0] if len(vals) == 1 else np.array(vals)


@dataclass(frozen=True, eq=False)
class BootstrapDraws:
    values: np.ndarray
    per_replicate_seeds: tuple
    labels: tuple = ()
    failed: tuple = field(default=())

    @property
    def B(self):
        return self.values.shape[0]

    def column(self, label):
        if self.values.ndim == 1:
            return self.values
        return self.values[:, self.labels.index(label)]

    def to_csv(self, path):
        vals = self.values if self.values.ndim == 2 else self.values[:, None]
        labels = self.labels or tuple(f"value{k}" for k in range(vals.shape[1]))
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["replicate_index", "seed", *labels])
            for b, (seed, row) in enumerate(zip(self.per_replicate_seeds, vals)):
                wr.writerow([b, seed, *(f"{v:.6g}" for v in row)])


def bootstrap_distribution(config, workers=None, skip_failed=False):
    """Run all ``B`` replicates; the output order is the replicate order.

    ``workers`` defaults to ``SPECBOOT_WORKERS`` (or 1).  Numpy releases the
    GIL inside the matrix products and eigensolves, so threads give real
    parallelism without copying the configuration.
    """
    workers = default_workers() if workers is None else int(workers)
    if workers < 1:
        raise ConfigurationError("workers must be at least 1")

    def one(b):
        try:
            return bootstrap_replicate(config, b)
        except ReplicateError:
            if skip_failed:
                return None
            raise

    if workers == 1:
        results = [one(b) for b in range(config.B)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(config.B)))
    seeds = tuple(derive_seed(config.master_seed, b) for b in range(config.B))
    failed = tuple(b for b, r in enumerate(results) if r is None)
    kept = [r for r in results if r is not None]
    if not kept:
        raise ReplicateError("every replicate failed", failed[0] if failed else -1)
    seeds = tuple(s for s, r in zip(seeds, results) if r is not None)
    return BootstrapDraws(
        values=np.asarray(kept, dtype=float),
        per_replicate_seeds=seeds,
        labels=tuple(s.name for s in config.statistic),
        failed=failed,
    )


# -- from data ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BootstrapInputs:
    """Everything estimated from one dataset before bootstrapping."""

    bundle: object
    quest: object
    spectrum_tilde: np.ndarray


def estimate_inputs(X, quest_opts=None):
    """Estimators, QuEST fit and the capped spectrum ``lambda~`` for dataset ``X``."""
    bundle = estimate_all(X)
    est = estimate_population_spectrum(bundle.sample_eigs, bundle.n, bundle.p, quest_opts)
    tilde = eigenvalue_cap(est.eigenvalues, bundle.b_hat)
    return BootstrapInputs(bundle, est, tilde)


def centering_for(spectrum, n, f, method="quadrature", law=None, seed=0, reps=30, expansion=40):
    """``integral f dPsi(H, p/n)`` for the spectrum given as ``p`` eigenvalues."""
    lam = np.asarray(spectrum, dtype=float)
    p = lam.size
    if method == "quadrature":
        return centering_parameter(esd_grid(SpectrumModel.from_eigenvalues(lam), p / n), f)
    if method == "mc":
        if law is None:
            raise ConfigurationError("mc centering needs a radial law")
        return centering_parameter_mc(lam, law, n, p, f, reps=reps, expansion=expansion, seed=seed,
                                      max_dim=max(4000, expansion * p))
    raise ConfigurationError(f"unknown centering method {method!r}")


def config_from_data(X, statistics, B=250, master_seed=0, quest_opts=None,
                     centering="quadrature", inputs=None):
    """Build the bootstrap configuration for dataset ``X``.

    LSS statistics flagged with ``centering=True`` are centred at
    ``integral f dPsi(H~, p/n)`` where ``H~`` is the capped QuEST spectrum.
    """
    if isinstance(statistics, StatisticSpec):
        statistics = (statistics,)
    inputs = inputs or estimate_inputs(X, quest_opts)
    b = inputs.bundle
    stats = []
    for s in statistics:
        if s.kind == "lss" and s.centering is True:
            law = gamma_xi_params(b.p, b.varsigma_sq_hat).law
            s = s.with_centering(
                centering_for(inputs.spectrum_tilde, b.n, s.f, centering, law=law, seed=master_seed)
            )
        stats.append(s)
    return BootstrapConfig(
        B=B,
        n=b.n,
        p=b.p,
        varsigma_sq_hat=b.varsigma_sq_hat,
        spectrum_tilde=inputs.spectrum_tilde,
        master_seed=master_seed,
        statistic=tuple(stats),
    )
