"""Elliptical data generation ``x_i = xi_i * Sigma^{1/2} u_i``.

The radial factor enters through the law of ``xi^2``, always normalised so
that ``E(xi^2) = p``.  ``tau_limit`` is the limit of ``var((xi^2 - p)/sqrt(p))``.
"""

import json
import struct
from dataclasses import dataclass, field

import numpy as np

from ._seeding import stream
from .errors import ConfigurationError, DataError, DimensionError
from .spectra import CovarianceSpec

FAMILIES = (
    "chi_squared",
    "poisson",
    "negative_binomial",
    "gamma",
    "beta_prime",
    "log_normal",
    "scaled_beta",
    "point_mass",
)


@dataclass(frozen=True, eq=False)
class EllipticalLaw:
    """Law of ``xi^2`` in the elliptical model.

    ``params`` holds ``tau`` for the negative binomial, gamma, beta-prime and
    log-normal families and ``beta`` for the scaled beta family.
    """

    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigurationError(f"unknown radial family {self.family!r}")
        params = {k: float(v) for k, v in self.params.items()}
        object.__setattr__(self, "params", params)
        if self.family in ("negative_binomial", "gamma", "beta_prime", "log_normal"):
            tau = params.get("tau")
            if tau is None or not tau > 0:
                raise ConfigurationError(f"{self.family} needs a positive 'tau'")
            if self.family == "negative_binomial" and not tau < 1:
                raise ConfigurationError("negative_binomial needs tau in (0, 1)")
        if self.family == "scaled_beta" and not params.get("beta", 0) > 0:
            raise ConfigurationError("scaled_beta needs a positive 'beta'")

    # -- constructors -------------------------------------------------------
    @classmethod
    def chi_squared(cls):
        return cls("chi_squared")

    @classmethod
    def poisson(cls):
        return cls("poisson")

    @classmethod
    def negative_binomial(cls, tau):
        return cls("negative_binomial", {"tau": tau})

    @classmethod
    def gamma(cls, tau):
        return cls("gamma", {"tau": tau})

    @classmethod
    def beta_prime(cls, tau):
        return cls("beta_prime", {"tau": tau})

    @classmethod
    def log_normal(cls, tau):
        return cls("log_normal", {"tau": tau})

    @classmethod
    def scaled_beta(cls, beta):
        return cls("scaled_beta", {"beta": beta})

    @classmethod
    def point_mass(cls):
        return cls("point_mass")

    # -- moments ------------------------------------------------------------
    @property
    def tau_limit(self):
        return {
            "chi_squared": 2.0,
            "poisson": 1.0,
            "scaled_beta": 0.0,
            "point_mass": 0.0,
        }.get(self.family, self.params.get("tau"))

    def variance(self, p):
        """Exact ``var(xi^2)`` at dimension ``p``."""
        f = self.family
        if f == "chi_squared":
            return 2.0 * p
        if f == "poisson":
            return float(p)
        if f == "scaled_beta":
            beta = self.params["beta"]
            return 4.0 * beta * p / (p + 2.0 * beta + 2.0)
        if f == "point_mass":
            return 0.0
        return self.params["tau"] * p

    def fourth_moment(self, p):
        """``E(xi^4)``."""
        return self.variance(p) + float(p) ** 2

    def sample(self, p, rng, size=None):
        """Draw ``xi^2`` (scalar or array of ``size``)."""
        if p < 1:
            raise DimensionError(f"p must be positive, got {p}")
        f, prm = self.family, self.params
        if f == "chi_squared":
            return rng.chisquare(p, size)
        if f == "poisson":
            return 1.0 * rng.poisson(p, size)
        if f == "negative_binomial":
            tau = prm["tau"]
            # Trial count until p successes with success probability 1 - tau.
            return (1.0 - tau) * (p + rng.negative_binomial(p, 1.0 - tau, size))
        if f == "gamma":
            tau = prm["tau"]
            return rng.gamma(p / tau, tau, size)
        if f == "beta_prime":
            tau = prm["tau"]
            a = p * (1.0 + p + tau) / tau
            b = (1.0 + p + 2.0 * tau) / tau
            if b <= 2:
                raise ConfigurationError("beta_prime variance is infinite for this (p, tau)")
            return rng.gamma(a, 1.0, size) / rng.gamma(b, 1.0, size)
        if f == "log_normal":
            s2 = np.log1p(prm["tau"] / p)
            return rng.lognormal(np.log(p) - 0.5 * s2, np.sqrt(s2), size)
        if f == "scaled_beta":
            beta = prm["beta"]
            return (p + 2.0 * beta) * rng.beta(p / 2.0, beta, size)
        return np.full(size, float(p)) if size is not None else float(p)

    def to_dict(self):
        return {"family": self.family, **self.params}

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        family = d.pop("family")
        # both {"family": f, "tau": 3} and {"family": f, "params": {"tau": 3}} are accepted
        params = {**d.pop("params", {}), **d}
        return cls(family, params)


NAMED_LAWS = {
    "i": EllipticalLaw.chi_squared(),
    "ii": EllipticalLaw.beta_prime(8.0),
    "iii": EllipticalLaw.scaled_beta(2.0),
}


def paper_law(label):
    """Radial laws (i) chi-squared, (ii) beta-prime with tau=8, (iii) scaled beta with beta=2."""
    try:
        return NAMED_LAWS[label]
    except KeyError:
        raise ConfigurationError(f"unknown law label {label!r}") from None


def sample_xi_squared(law, p, rng, size=None):
    return law.sample(p, rng, size)


def sample_unit_sphere(p, rng, size=None):
    """Uniform draw(s) from the unit sphere of ``R^p`` via normalised Gaussians."""
    if p < 1:
        raise DimensionError(f"p must be positive, got {p}")
    shape = (p,) if size is None else (size, p)
    z = rng.standard_normal(shape)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


@dataclass(frozen=True, eq=False)
class Dataset:
    """``n x p`` data matrix with the parameters that generated it."""

    values: np.ndarray
    law: EllipticalLaw | None = None
    spec: CovarianceSpec | None = None
    seed: int | None = None

    def __post_init__(self):
        x = np.asarray(self.values, dtype=float)
        if x.ndim != 2 or min(x.shape) < 1:
            raise DimensionError(f"data must be a nonempty 2-d array, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise DataError("data contain non-finite entries")
        object.__setattr__(self, "values", x)

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def p(self):
        return self.values.shape[1]

    @property
    def ratio(self):
        return self.p / self.n

    def scaled(self, s):
        return Dataset(self.values * s, self.law, self.spec, self.seed)

    def to_csv(self, path):
        np.savetxt(path, self.values, delimiter=",", fmt="%.17g")

    def write_binary(self, path):
        write_matrix(path, self.values, -1 if self.seed is None else self.seed)


def sample_dataset(spec, law, n, seed):
    """Draw ``n`` i.i.d. rows from the elliptical model.

    Row ``i`` uses its own stream derived from ``(seed, i)``, so the result
    does not depend on the order in which rows are produced.
    """
    if n < 1:
        raise DimensionError(f"n must be positive, got {n}")
    p = spec.p
    x = np.empty((n, p))
    for i in range(n):
        rng = stream(seed, i)
        xi2 = law.sample(p, rng)
        x[i] = np.sqrt(xi2) * sample_unit_sphere(p, rng)
    if spec.is_diagonal:
        x *= np.sqrt(spec.eigenvalues)
    else:
        x = x @ spec.sqrt_matrix
    return Dataset(x, law, spec, seed)


# -- files --------------------------------------------------------------------

_MAGIC = b"SPBM"
_HEADER = struct.Struct("<4sqqq")


def write_matrix(path, values, seed=-1):
    """Binary format: magic ``SPBM``, int64 ``n``, ``p``, ``seed``, then float64 rows."""
    values = np.ascontiguousarray(values, dtype="<f8")
    n, p = values.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, n, p, int(seed)))
        fh.write(values.tobytes())


def read_matrix(path):
    """Return ``(values, seed)`` from a file written by :func:`write_matrix`."""
    with open(path, "rb") as fh:
        magic, n, p, seed = _HEADER.unpack(fh.read(_HEADER.size))
        if magic != _MAGIC:
            raise DataError(f"{path}: not a specboot matrix file")
        values = np.frombuffer(fh.read(), dtype="<f8")
    if values.size != n * p:
        raise DataError(f"{path}: expected {n * p} values, found {values.size}")
    return values.reshape(n, p).copy(), (None if seed < 0 else seed)


def load_dataset(path):
    """Read a dataset from CSV (rows = observations) or the binary matrix format."""
    path = str(path)
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head == _MAGIC:
        values, seed = read_matrix(path)
        return Dataset(values, seed=seed)
    values = np.loadtxt(path, delimiter=",", ndmin=2)
    return Dataset(values)


def law_from_json(text):
    return EllipticalLaw.from_dict(json.loads(text))
