"""Population covariance settings and their spectral distributions.

Three fixed settings are provided:

* ``S1``: five eigenvalues equal to 4/3, the rest equal to 1, Haar eigenvectors.
* ``S2``: ``exp(-j/10)`` for ``j <= 20`` and ``exp(-2)`` afterwards, Haar eigenvectors.
* ``S3``: the Toeplitz matrix ``0.1**|i-j|`` plus the identity.

``custom`` specs accept any nonnegative eigenvalue profile.
"""

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import optimize

from .errors import ConfigurationError, DimensionError

SETTINGS = ("S1", "S2", "S3")
_MIN_P = {"S1": 6, "S2": 21, "S3": 1}


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def haar_orthogonal(p, seed):
    """Haar-distributed orthogonal ``p x p`` matrix from QR of a Gaussian matrix."""
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((p, p)))
    # Sign fix makes the distribution exactly Haar.
    return q * np.sign(np.diag(r))


def toeplitz_plus_identity(p, rho=0.1):
    idx = np.arange(p)
    return rho ** np.abs(idx[:, None] - idx[None, :]) + np.eye(p)


@dataclass(frozen=True, eq=False)
class CovarianceSpec:
    """A population covariance matrix described through its spectrum.

    Attributes
    ----------
    kind : {"eigen_profile", "toeplitz_plus_identity"}
    eigenvalues : ndarray
        Sorted in descending order, length ``p``.
    p : int
    rotation_seed : int or None
        Seed of the Haar eigenvector basis for eigen profiles; ``None`` keeps
        the covariance diagonal.
    setting : str
        ``"S1"``, ``"S2"``, ``"S3"`` or ``"custom"``.
    """

    kind: str
    eigenvalues: np.ndarray
    p: int
    rotation_seed: int | None = None
    setting: str = "custom"
    _basis: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        if self.p < 1:
            raise DimensionError(f"p must be positive, got {self.p}")
        if lam.shape != (self.p,):
            raise DimensionError(f"expected {self.p} eigenvalues, got shape {lam.shape}")
        if not np.all(np.isfinite(lam)) or np.any(lam < 0):
            raise ConfigurationError("eigenvalues must be finite and nonnegative")
        if not np.any(lam > 0):
            raise ConfigurationError("at least one eigenvalue must be positive")
        if np.any(np.diff(lam) > 0):
            raise ConfigurationError("eigenvalues must be sorted in descending order")
        if self.kind not in ("eigen_profile", "toeplitz_plus_identity"):
            raise ConfigurationError(f"unknown covariance kind {self.kind!r}")
        object.__setattr__(self, "eigenvalues", _readonly(lam))

    @cached_property
    def eigenvectors(self):
        """Orthogonal matrix whose columns match ``eigenvalues``."""
        if self._basis is not None:
            return self._basis
        if self.rotation_seed is None:
            return np.eye(self.p)
        return haar_orthogonal(self.p, self.rotation_seed)

    @cached_property
    def matrix(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T

    @cached_property
    def sqrt_matrix(self):
        """Symmetric square root ``V diag(sqrt(lambda)) V^T``."""
        v = self.eigenvectors
        return (v * np.sqrt(self.eigenvalues)) @ v.T

    @property
    def is_diagonal(self):
        return self._basis is None and self.rotation_seed is None

    def trace(self, power=1):
        return float(np.sum(self.eigenvalues**power))

    @property
    def stable_rank(self):
        return self.trace() ** 2 / self.trace(2)

    def to_dict(self):
        d = {"setting": self.setting, "p": self.p}
        if self.setting == "custom":
            d["eigenvalues"] = self.eigenvalues.tolist()
        if self.rotation_seed is not None:
            d["rotation_seed"] = self.rotation_seed
        return d

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        setting = d.get("setting", "custom")
        if setting in SETTINGS:
            return make_covariance_setting(setting, int(d["p"]), d.get("rotation_seed"))
        if setting != "custom":
            raise ConfigurationError(f"unknown setting {setting!r}")
        if "eigenvalues" not in d:
            raise ConfigurationError("custom covariance needs 'eigenvalues'")
        lam = np.sort(np.asarray(d["eigenvalues"], dtype=float))[::-1]
        p = int(d.get("p", lam.size))
        return cls("eigen_profile", lam, p, d.get("rotation_seed"), "custom")

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def make_covariance_setting(setting_id, p, rotation_seed=None):
    """Build one of the three simulation settings ``S1``, ``S2``, ``S3``."""
    if setting_id not in SETTINGS:
        raise ConfigurationError(f"unknown setting {setting_id!r}")
    if p < _MIN_P[setting_id]:
        raise DimensionError(f"setting {setting_id} needs p >= {_MIN_P[setting_id]}, got {p}")
    if setting_id == "S1":
        lam = np.ones(p)
        lam[:5] = 4.0 / 3.0
        return CovarianceSpec("eigen_profile", lam, p, rotation_seed, "S1")
    if setting_id == "S2":
        j = np.arange(1, p + 1)
        lam = np.exp(-np.minimum(j, 20) / 10.0)
        return CovarianceSpec("eigen_profile", lam, p, rotation_seed, "S2")
    lam, vec = np.linalg.eigh(toeplitz_plus_identity(p))
    order = np.argsort(lam)[::-1]
    return CovarianceSpec(
        "toeplitz_plus_identity", lam[order], p, None, "S3", _basis=vec[:, order]
    )


def rescaled_s1(p, s, rotation_seed=None):
    """Setting S1 with its leading 15 eigenvalues rescaled by ``s``.

    Eigenvalues are ``4s/3`` (five times), ``s`` (ten times) and ``1`` otherwise.
    """
    if p < 16:
        raise DimensionError("rescaled S1 needs p >= 16")
    lam = np.ones(p)
    lam[:5] = 4.0 * s / 3.0
    lam[5:15] = s
    lam = np.sort(lam)[::-1]
    return CovarianceSpec("eigen_profile", lam, p, rotation_seed, "custom")


def s1_scale_for_ratio(p, ratio):
    """Scale ``s >= 1`` such that the rescaled S1 design has ``r/p == ratio``."""

    def gap(s):
        return rescaled_s1(p, s).stable_rank / p - ratio

    hi = 2.0
    while gap(hi) > 0:
        hi *= 2.0
        if hi > 1e8:
            raise ConfigurationError(f"stable-rank ratio {ratio} unreachable for p={p}")
    if gap(1.0) < 0:
        raise ConfigurationError(f"stable-rank ratio {ratio} exceeds the unscaled S1 value")
    return optimize.brentq(gap, 1.0, hi, xtol=1e-14, rtol=1e-14)


@dataclass(frozen=True, eq=False)
class SpectrumModel:
    """Discrete spectral distribution: ascending atoms with positive weights."""

    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if v.ndim != 1 or v.shape != w.shape or v.size == 0:
            raise ConfigurationError("values and weights must be nonempty 1-d arrays of equal length")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise ConfigurationError("atom values must be finite and nonnegative")
        if np.any(np.diff(v) < 0):
            raise ConfigurationError("atom values must be sorted ascending")
        if np.any(w <= 0) or np.any(w > 1):
            raise ConfigurationError("weights must lie in (0, 1]")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ConfigurationError(f"weights sum to {w.sum()!r}, not 1")
        object.__setattr__(self, "values", _readonly(v))
        object.__setattr__(self, "weights", _readonly(w))

    @classmethod
    def from_eigenvalues(cls, eigenvalues):
        """Empirical distribution of a multiset of eigenvalues."""
        lam = np.asarray(eigenvalues, dtype=float)
        vals, counts = np.unique(lam, return_counts=True)
        w = counts / lam.size
        # Renormalise so the weights sum to one to machine precision.
        return cls(vals, w / w.sum())

    @property
    def atoms(self):
        return list(zip(self.values.tolist(), self.weights.tolist()))

    def cdf(self, t):
        """Right-continuous distribution function ``H(t)``."""
        t = np.asarray(t, dtype=float)
        cum = np.concatenate([[0.0], np.cumsum(self.weights)])
        cum[-1] = 1.0
        return cum[np.searchsorted(self.values, t, side="right")]

    def moment(self, k):
        return float(np.dot(self.weights, self.values**k))

    @property
    def mean(self):
        return self.moment(1)

    def scaled(self, s):
        return SpectrumModel(self.values * s, self.weights)

    def quantiles(self, levels):
        """Left-continuous inverse ``inf{t : H(t) >= u}``."""
        cum = np.cumsum(self.weights)
        cum[-1] = 1.0
        idx = np.searchsorted(cum, np.asarray(levels, dtype=float) - 1e-15, side="left")
        return self.values[np.minimum(idx, self.values.size - 1)]


def spectral_distribution(spec):
    """Empirical spectral distribution ``H_n`` of a covariance spec."""
    return SpectrumModel.from_eigenvalues(spec.eigenvalues)
