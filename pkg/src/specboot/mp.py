"""The Marchenko-Pastur map ``H -> Psi(H, c)``.

Two routes are provided.

``solve_stieltjes`` evaluates the Stieltjes transform ``m(z)`` of
``Psi(H, c)`` at any ``z`` in the upper half plane by continuation from far
above the real axis followed by Newton polishing.

Everything on the real axis (density, distribution function, quantiles and
quantile sensitivities) goes through the companion transform
``mu(z) = -(1 - c)/z + c m(z)``.  On the support, ``v = -1/mu = a + ib``
satisfies

    c * sum_k w_k t_k^2 / ((t_k - a)^2 + b^2) = 1,

which for fixed ``a`` is monotone in ``b^2`` and therefore trivially solvable.
The support in the ``a`` coordinate is the set where the left-hand side at
``b = 0`` exceeds one; its edges are found by bisection because that function
is convex between consecutive atoms.  The distribution function has a closed
form in ``(a, b)``, so no quadrature error enters the CDF or the quantiles.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from ._seeding import stream
from .errors import ConfigurationError, DomainError, SolverError
from .spectra import CovarianceSpec, SpectrumModel
from .sampling import EllipticalLaw, sample_unit_sphere

_BISECT_STEPS = 62


def _as_model(H):
    if isinstance(H, SpectrumModel):
        return H
    if isinstance(H, CovarianceSpec):
        return SpectrumModel.from_eigenvalues(H.eigenvalues)
    return SpectrumModel.from_eigenvalues(np.asarray(H, dtype=float))


# -- complex plane -------------------------------------------------------------


def solve_stieltjes(H, c, z, tol=1e-10, max_iter=200):
    """Stieltjes transform ``m`` of ``Psi(H, c)`` at ``z`` (scalar or array).

    The returned ``m`` satisfies ``m = sum_k w_k / (t_k (1 - c - c z m) - z)``
    with ``(c - 1)/z + c m`` in the upper half plane.

    Raises
    ------
    SolverError
        If some point fails to reach residual ``tol``.
    """
    H = _as_model(H)
    if not c > 0:
        raise ConfigurationError(f"c must be positive, got {c}")
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z).ravel()
    if np.any(z.imag <= 0):
        raise DomainError("solve_stieltjes needs Im z > 0")
    t = H.values
    w = H.weights
    scale = max(float(t.max()), 1e-300)

    def G(mu, zz):
        return -1.0 / mu + c * np.sum(w * t / (1.0 + np.outer(mu, t)), axis=1) - zz

    def dG(mu):
        return 1.0 / mu**2 - c * np.sum(w * t**2 / (1.0 + np.outer(mu, t)) ** 2, axis=1)

    # Far above the axis the damped fixed point is a contraction.
    y0 = np.maximum(z.imag, 4.0 * (scale * (1.0 + c) + np.abs(z.real)))
    zz = z.real + 1j * y0
    mu = -1.0 / zz
    for _ in range(2000):
        new = -1.0 / (zz - c * np.sum(w * t / (1.0 + np.outer(mu, t)), axis=1))
        step = 0.5 * (new - mu)
        mu = mu + step
        if np.max(np.abs(step)) < 1e-15 * np.max(np.abs(mu)):
            break

    # Track Im z down geometrically with Newton steps kept in the upper half plane.
    y = y0.copy()
    while True:
        y = np.maximum(y / 3.0, z.imag)
        zz = z.real + 1j * y
        for _ in range(max_iter):
            g = G(mu, zz)
            delta = g / dG(mu)
            cand = mu - delta
            bad = ~(cand.imag > 0) | ~np.isfinite(cand)
            while np.any(bad):
                delta = np.where(bad, 0.5 * delta, delta)
                cand = mu - delta
                bad = (~(cand.imag > 0) | ~np.isfinite(cand)) & (np.abs(delta) > 1e-300)
                if np.all(np.abs(delta[bad]) <= 1e-300):
                    break
            mu = cand
            if np.max(np.abs(delta) / np.maximum(np.abs(mu), 1e-300)) < 1e-14:
                break
        if np.all(y <= z.imag):
            break

    m = (mu + (1.0 - c) / z) / c
    # Polish directly on the original form of the equation.
    for _ in range(5):
        denom = np.outer(1.0 - c - c * z * m, t) - z[:, None]
        r = m - np.sum(w / denom, axis=1)
        dr = 1.0 - np.sum(w * t * (c * z)[:, None] / denom**2, axis=1)
        m_new = m - r / dr
        ok = np.isfinite(m_new) & ((c - 1.0) / z + c * m_new).imag.__gt__(0)
        m = np.where(ok, m_new, m)
    denom = np.outer(1.0 - c - c * z * m, t) - z[:, None]
    resid = np.abs(m - np.sum(w / denom, axis=1))
    if not np.all(resid < tol) or not np.all(((c - 1.0) / z + c * m).imag > 0):
        worst = int(np.argmax(resid))
        raise SolverError(
            f"Marchenko-Pastur solve did not converge (residual {resid[worst]:.3g})",
            residual=float(resid[worst]),
            z=complex(z[worst]),
        )
    return complex(m[0]) if scalar else m


# -- real axis -----------------------------------------------------------------


class RealAxisSolver:
    """Boundary values of the MP map on the real axis for a discrete ``H``.

    Parameters
    ----------
    values, weights : array_like
        Atoms of ``H`` (any order, duplicates and zeros allowed).
    c : float
        Aspect ratio ``p/n``.
    """

    def __init__(self, values, weights, c):
        if not c > 0:
            raise ConfigurationError(f"c must be positive, got {c}")
        values = np.asarray(values, dtype=float)
        weights = np.asarray(weights, dtype=float)
        self.c = float(c)
        pos = values > 0
        t, inv = np.unique(values[pos], return_inverse=True)
        w = np.bincount(inv, weights=weights[pos], minlength=t.size)
        self.t = t
        self.w = w
        self.A = w * t**2
        self.mass_positive = float(w.sum())
        self.sum_wt = float(np.dot(w, t))
        self.zero_atom = 1.0 - min(1.0 / self.c, self.mass_positive) if t.size else 1.0
        # weights sum to one only up to roundoff; do not invent an atom from it
        if self.zero_atom < 1e-12:
            self.zero_atom = 0.0
        self.edges = self._find_edges() if t.size else np.empty((0, 2))

    # g(a) = c sum A / (t - a)^2 and its derivative
    def _g(self, a):
        r = 1.0 / (self.t - a[:, None])
        return self.c * ((r * r) @ self.A)

    def _dg(self, a):
        r = 1.0 / (self.t - a[:, None])
        return 2.0 * self.c * ((r * r * r) @ self.A)

    def _find_edges(self):
        t = self.t
        reach = 2.0 * np.sqrt(self.c * np.sum(self.A))
        # The two neighbouring atoms alone bound g from below on a gap by
        # c (A_k^(1/3) + A_(k+1)^(1/3))^3 / L^2; gaps where that is >= 1 stay closed.
        cube = np.cbrt(self.A)
        bound = self.c * (cube[:-1] + cube[1:]) ** 3 / np.diff(t) ** 2
        cand = np.flatnonzero(bound < 1.0)
        # Minimum of the convex function g on each remaining gap.
        lo, hi = t[cand].copy(), t[cand + 1].copy()
        for _ in range(_BISECT_STEPS):
            mid = 0.5 * (lo + hi)
            neg = self._dg(mid) < 0
            lo = np.where(neg, mid, lo)
            hi = np.where(neg, hi, mid)
        amin = 0.5 * (lo + hi)
        split = self._g(amin) < 1.0 if amin.size else np.zeros(0, bool)
        amin = amin[split]
        gaps = cand[split]
        # Roots of g = 1: outer left, outer right, and two per split gap.
        lo = np.concatenate([[t[0] - reach], [t[-1]], t[gaps], amin])
        hi = np.concatenate([[t[0]], [t[-1] + reach], amin, t[gaps + 1]])
        rising = np.concatenate([[True], [False], np.zeros(gaps.size, bool), np.ones(gaps.size, bool)])
        for _ in range(_BISECT_STEPS):
            mid = 0.5 * (lo + hi)
            below = self._g(mid) < 1.0
            move_lo = below == rising
            lo = np.where(move_lo, mid, lo)
            hi = np.where(move_lo, hi, mid)
        roots = 0.5 * (lo + hi)
        left, right = roots[0], roots[1]
        inner = np.column_stack([roots[2 : 2 + gaps.size], roots[2 + gaps.size :]]).ravel()
        ends = np.concatenate([[left], inner, [right]])
        return ends.reshape(-1, 2)

    def solve_b2(self, a, S0=None):
        """``b^2`` on the support for real ``a``; zero outside.

        ``S0`` is an optional warm start of the same shape as ``a``.
        """
        scalar = np.ndim(a) == 0
        a = np.atleast_1d(np.asarray(a, dtype=float))
        d = (self.t - a[:, None]) ** 2
        tiny = 1e-28 * self.t[-1] ** 2
        near = d.min(axis=1) < tiny
        S = np.zeros(a.size) if S0 is None else np.maximum(np.asarray(S0, dtype=float), 0.0)
        S = np.where(near, np.maximum(S, tiny), S)
        active = np.arange(a.size)
        for _ in range(200):
            r = 1.0 / (d[active] + S[active, None])
            s1 = r @ self.A
            s2 = (r * r) @ self.A
            q = np.log(self.c * s1)
            new = np.maximum(S[active] + q * s1 / s2, 0.0)
            done = np.abs(new - S[active]) <= 1e-15 * new + 1e-300
            S[active] = new
            active = active[~done]
            if active.size == 0:
                break
        return float(S[0]) if scalar else S

    def evaluate(self, a, S):
        """Return ``x, density, dx/da, cdf`` at points ``(a, b^2 = S)``."""
        a = np.asarray(a, dtype=float)
        c, t, w, A = self.c, self.t, self.w, self.A
        diff = a[:, None] - t
        D = diff**2 + S[:, None]
        x = a + c * self.sum_wt + c * np.sum(A * diff / D, axis=1)
        b = np.sqrt(S) + 0.0
        v2 = a**2 + S
        with np.errstate(divide="ignore", invalid="ignore"):
            dens = np.where(b > 0, b / (c * np.pi * v2), 0.0)
            xb = np.where(b > 0, x * b / v2, 0.0)
        P = np.sum(A / D**2, axis=1)
        Q = np.sum(A * diff / D**2, axis=1)
        R = np.sum(A * diff**2 / D**2, axis=1)
        dxda = 2.0 - 2.0 * c * (R - Q**2 / P)
        arg_v = np.arctan2(b, a)
        arg_vt = np.arctan2(b[:, None], diff)
        cdf = ((xb - arg_v) / c - np.sum(w * (arg_vt - arg_v[:, None]), axis=1)) / np.pi + 1.0
        return x, dens, dxda, cdf

    def edge_values(self):
        """Support endpoints in ``x`` and the CDF there, shape ``(k, 2)`` each."""
        ends = self.edges.ravel()
        x, _, _, cdf = self.evaluate(ends, np.zeros(ends.size))
        if self.edges.size and self.edges[0, 0] == 0.0:
            x[0] = 0.0
        return x.reshape(-1, 2), cdf.reshape(-1, 2)

    def nodes(self, total=512, min_per_interval=16):
        """Midpoint-in-angle nodes on every support interval.

        Returns a list of dicts with keys ``a, S, x, density, cdf, weight``; the
        weights integrate against the continuous part of ``Psi(H, c)``.
        """
        if not self.edges.size:
            return []
        xe, _ = self.edge_values()
        widths = np.maximum(xe[:, 1] - xe[:, 0], 0.0)
        share = widths / widths.sum() if widths.sum() > 0 else np.full(widths.size, 1.0 / widths.size)
        out = []
        for (lo, hi), frac in zip(self.edges, share):
            N = max(min_per_interval, int(round(total * frac)))
            theta = np.pi * (np.arange(N) + 0.5) / N
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            a = mid - half * np.cos(theta)
            S = self.solve_b2(a)
            x, dens, dxda, cdf = self.evaluate(a, S)
            weight = dens * dxda * half * np.sin(theta) * (np.pi / N)
            out.append(dict(a=a, S=S, x=x, density=dens, dxda=dxda, cdf=cdf, weight=weight))
        return out

    def _table(self, total):
        """Monotone ``(a, cdf)`` table including support endpoints."""
        ends_cdf = self.edge_values()[1]
        a_parts, f_parts = [], []
        for k, nd in enumerate(self.nodes(total)):
            a_parts.append(np.concatenate([[self.edges[k, 0]], nd["a"], [self.edges[k, 1]]]))
            f_parts.append(np.concatenate([[ends_cdf[k, 0]], nd["cdf"], [ends_cdf[k, 1]]]))
        a_tab = np.concatenate(a_parts)
        f_tab = np.maximum.accumulate(np.concatenate(f_parts))
        return a_tab, f_tab

    def quantiles(self, levels, total=256, return_ab=False):
        """Quantile function of ``Psi(H, c)`` at ``levels`` in ``(0, 1)``."""
        u = np.asarray(levels, dtype=float)
        q = np.zeros(u.shape)
        a_out = np.full(u.shape, np.nan)
        S_out = np.zeros(u.shape)
        cont = u > self.zero_atom + 1e-13
        if np.any(cont) and self.edges.size:
            a_tab, f_tab = self._table(total)
            uc = np.minimum(u[cont], f_tab[-1])
            idx = np.clip(np.searchsorted(f_tab, uc, side="left"), 1, a_tab.size - 1)
            a_lo, a_hi = a_tab[idx - 1], a_tab[idx]
            f_lo, f_hi = f_tab[idx - 1], f_tab[idx]
            span = np.where(f_hi > f_lo, f_hi - f_lo, 1.0)
            a = a_lo + np.clip((uc - f_lo) / span, 0.0, 1.0) * (a_hi - a_lo)
            S = self.solve_b2(a)
            act = np.arange(a.size)
            for _ in range(40):
                aa, SS = a[act], S[act]
                _, dens, dxda, F = self.evaluate(aa, SS)
                err = F - uc[act]
                lo_, hi_ = np.where(err < 0, aa, a_lo[act]), np.where(err < 0, a_hi[act], aa)
                a_lo[act], a_hi[act] = lo_, hi_
                with np.errstate(divide="ignore", invalid="ignore"):
                    a_new = aa - err / (dens * dxda)
                inside = (a_new > lo_) & (a_new < hi_) & np.isfinite(a_new)
                a_new = np.where(inside, a_new, 0.5 * (lo_ + hi_))
                done = (np.abs(err) < 1e-13) | (hi_ - lo_ <= 4e-16 * np.maximum(np.abs(aa), 1.0))
                a[act] = np.where(done, aa, a_new)
                act = act[~done]
                if act.size == 0:
                    break
                S[act] = self.solve_b2(a[act], S[act])
            x = self.evaluate(a, S)[0]
            q[cont] = x
            a_out[cont] = a
            S_out[cont] = S
        if return_ab:
            return q, a_out, S_out
        return q

    def quantile_jacobian(self, a, S, values, weights):
        """``d quantile / d t_k`` for every (unmerged) atom ``t_k`` of ``H``.

        Rows with ``a`` NaN correspond to quantiles inside the zero atom.
        """
        values = np.asarray(values, dtype=float)
        weights = np.asarray(weights, dtype=float)
        v2 = a**2 + S
        J = self.c * weights * (v2[:, None] / ((values - a[:, None]) ** 2 + S[:, None]))
        J[np.isnan(a)] = 0.0
        return J


# -- tabulated distribution ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MPDistribution:
    """Tabulated ``Psi(H, c)``.

    ``x``, ``density`` and ``cdf`` form a plotting grid; ``quad_x`` and
    ``quad_w`` integrate against the continuous part.  The zero atom is carried
    separately and is not included in ``density``.
    """

    c: float
    source: SpectrumModel
    zero_atom: float
    x: np.ndarray
    density: np.ndarray
    cdf: np.ndarray
    support_intervals: tuple
    quad_x: np.ndarray = field(repr=False)
    quad_w: np.ndarray = field(repr=False)
    solver: RealAxisSolver = field(repr=False)

    @property
    def continuous_mass(self):
        return float(self.quad_w.sum())

    @property
    def total_mass(self):
        return self.zero_atom + self.continuous_mass

    def cdf_at(self, t):
        """Distribution function at arbitrary points (linear in the table)."""
        t = np.asarray(t, dtype=float)
        out = np.interp(t, self.x, self.cdf, left=0.0, right=1.0)
        return np.where(t < 0, 0.0, out)

    def quantile(self, u):
        return self.solver.quantiles(u)

    def stieltjes(self, z):
        return solve_stieltjes(self.source, self.c, z)

    def expect(self, f):
        return centering_parameter(self, f)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["x", "density", "cdf"])
            for row in zip(self.x, self.density, self.cdf):
                wr.writerow([f"{v:.6g}" for v in row])


def esd_grid(H, c, grid_points=2048, background_points=256):
    """Tabulate the limiting spectral distribution ``Psi(H, c)``.

    Parameters
    ----------
    H : SpectrumModel, CovarianceSpec or array of eigenvalues
    c : float
        Aspect ratio ``p/n``.
    grid_points : int
        Number of nodes placed on the support (split across intervals).
    background_points : int
        Uniform zero-density points covering ``[0, (1 + sqrt(c))^2 max(H) 1.05]``.
    """
    H = _as_model(H)
    solver = RealAxisSolver(H.values, H.weights, c)
    nodes = solver.nodes(grid_points)
    if nodes:
        xe, fe = solver.edge_values()
        support = tuple((float(lo), float(hi)) for lo, hi in xe)
        qx = np.concatenate([nd["x"] for nd in nodes])
        qw = np.concatenate([nd["weight"] for nd in nodes])
        xs = [qx, xe.ravel()]
        ds = [np.concatenate([nd["density"] for nd in nodes]), np.zeros(xe.size)]
        fs = [np.concatenate([nd["cdf"] for nd in nodes]), fe.ravel()]
        top = max(xe[-1, 1], (1.0 + np.sqrt(c)) ** 2 * H.values[-1]) * 1.05
    else:
        support, qx, qw, xs, ds, fs = (), np.empty(0), np.empty(0), [], [], []
        top = 1.0
    bg = np.linspace(0.0, top, background_points)
    inside = np.zeros(bg.size, bool)
    for lo, hi in support:
        inside |= (bg >= lo) & (bg <= hi)
    bg = bg[~inside]
    # CDF is constant off the support: take it from the nearest support edge below.
    if support:
        edge_x = np.array([s[1] for s in support])
        edge_f = solver.edge_values()[1][:, 1]
        k = np.searchsorted(edge_x, bg, side="right") - 1
        bg_cdf = np.where(k >= 0, edge_f[np.maximum(k, 0)], solver.zero_atom)
    else:
        bg_cdf = np.ones(bg.size)
    x = np.concatenate(xs + [bg])
    dens = np.concatenate(ds + [np.zeros(bg.size)])
    cdf = np.concatenate(fs + [bg_cdf])
    order = np.argsort(x, kind="stable")
    x, dens, cdf = x[order], dens[order], np.clip(np.maximum.accumulate(cdf[order]), 0.0, 1.0)
    return MPDistribution(
        c=float(c),
        source=H,
        zero_atom=solver.zero_atom,
        x=x,
        density=dens,
        cdf=cdf,
        support_intervals=support,
        quad_x=qx,
        quad_w=qw,
        solver=solver,
    )


# -- centering -------------------------------------------------------------------


def _x_minus_log(x):
    with np.errstate(divide="ignore"):
        return x - np.log(x) - 1.0


FUNCTIONS = {
    "one": lambda x: np.ones_like(x),
    "identity": lambda x: x,
    "square": lambda x: x**2,
    "x_minus_log": _x_minus_log,
}


def resolve_function(f):
    """Map a label from ``FUNCTIONS`` (or a callable) to a vectorised callable."""
    if callable(f):
        return f
    try:
        return FUNCTIONS[f]
    except KeyError:
        raise ConfigurationError(f"unknown function label {f!r}") from None


def centering_parameter(dist, f):
    """``integral f dPsi(H, c)`` by quadrature plus the zero-atom contribution."""
    fn = resolve_function(f)
    value = float(np.dot(fn(dist.quad_x), dist.quad_w))
    if dist.zero_atom > 0:
        with np.errstate(divide="ignore", invalid="ignore"):
            f0 = float(np.asarray(fn(np.array([0.0])))[0])
        if not np.isfinite(f0):
            raise DomainError("f is undefined at 0 but Psi(H, c) has an atom there")
        value += dist.zero_atom * f0
    return value


def centering_moments(H, n, p):
    """Exact centering for ``f(x) = x`` and ``f(x) = x^2`` at finite ``(n, p)``.

    Returns ``(tr(Sigma)/p, tr(Sigma^2)/p + tr(Sigma)^2/(n p))``.
    """
    if isinstance(H, SpectrumModel):
        m1, m2 = H.moment(1), H.moment(2)
    else:
        lam = np.asarray(getattr(H, "eigenvalues", H), dtype=float)
        m1, m2 = lam.mean(), np.mean(lam**2)
    return m1, m2 + (p / n) * m1**2


def centering_parameter_mc(
    spectrum, law, n, p, f, reps=30, expansion=40, seed=0, max_dim=4000, return_se=False
):
    """Monte Carlo centering from an ``expansion``-fold enlarged problem.

    Averages ``(1/(E p)) sum_j f(lambda_j)`` over ``reps`` sample covariances of
    ``E n`` observations in dimension ``E p`` with population ``I_E (x) Sigma``
    and radial law evaluated at dimension ``E p``.

    Parameters
    ----------
    spectrum : array_like, SpectrumModel or CovarianceSpec
        Population eigenvalues (length ``p``).
    law : EllipticalLaw
        Any object with ``sample(dim, rng, size)``.
    """
    if expansion < 1 or reps < 1:
        raise ConfigurationError("expansion and reps must be at least 1")
    if isinstance(spectrum, SpectrumModel):
        lam = spectrum.quantiles((np.arange(p) + 0.5) / p)
    else:
        lam = np.asarray(getattr(spectrum, "eigenvalues", spectrum), dtype=float)
    if lam.size != p:
        raise ConfigurationError(f"spectrum has {lam.size} values, expected p={p}")
    E = int(expansion)
    big_p, big_n = E * p, E * n
    if big_p > max_dim:
        raise ConfigurationError(
            f"expanded dimension {big_p} exceeds max_dim={max_dim}; lower expansion or raise the cap"
        )
    fn = resolve_function(f)
    root = np.sqrt(np.tile(lam, E))
    vals = []
    for r in range(reps):
        rng = stream(seed, r)
        xi = np.sqrt(law.sample(big_p, rng, big_n))
        x = (xi[:, None] * sample_unit_sphere(big_p, rng, big_n)) * root
        if big_p > big_n:
            eig = np.linalg.eigvalsh(x @ x.T / big_n)
            eig = np.concatenate([np.maximum(eig, 0.0), np.zeros(big_p - big_n)])
        else:
            eig = np.maximum(np.linalg.eigvalsh(x.T @ x / big_n), 0.0)
        vals.append(float(np.mean(fn(eig))))
    vals = np.array(vals)
    mean = float(vals.mean())
    if return_se:
        se = float(vals.std(ddof=1) / np.sqrt(reps)) if reps > 1 else float("nan")
        return mean, se
    return mean
