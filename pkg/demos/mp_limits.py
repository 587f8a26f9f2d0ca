"""Limiting eigenvalue laws for sample covariance matrices.

Run with ``python demos/mp_limits.py``.  The script first checks the solver on
the identity covariance, where the density has a closed form, then looks at a
spiked population to show how a handful of large eigenvalues changes the bulk.
"""

import numpy as np

from specboot import SpectrumModel, esd_grid, make_covariance_setting, sample_dataset, paper_law
from specboot import centering_parameter, sample_covariance_eigs


def identity_check():
    print("identity covariance")
    for c in (0.25, 0.5, 2.0):
        d = esd_grid(SpectrumModel.from_eigenvalues([1.0]), c)
        a, b = (1 - np.sqrt(c)) ** 2, (1 + np.sqrt(c)) ** 2
        inside = (d.x > a + 1e-3) & (d.x < b - 1e-3)
        exact = np.sqrt((b - d.x[inside]) * (d.x[inside] - a)) / (2 * np.pi * c * d.x[inside])
        err = np.max(np.abs(d.density[inside] - exact))
        supp = ", ".join(f"[{lo:.3f}, {hi:.3f}]" for lo, hi in d.support_intervals)
        print(f"  c={c:<5} support {supp}  zero atom {d.zero_atom:.3f}  max density error {err:.1e}")


def spiked_population():
    # Five spikes of size 4/3 over a flat background: the bulk barely moves,
    # which is why this setting is hard to tell apart from the identity.
    p, n = 200, 400
    spec = make_covariance_setting("S1", p)
    H = SpectrumModel.from_eigenvalues(spec.eigenvalues)
    d = esd_grid(H, p / n)
    X = sample_dataset(spec, paper_law("i"), n, seed=1)
    eigs = sample_covariance_eigs(X)
    print(f"\nspiked population, p={p}, n={n}")
    print(f"  predicted support {tuple(round(v, 3) for pair in d.support_intervals for v in pair)}")
    print(f"  observed range    ({eigs.min():.3f}, {eigs.max():.3f})")
    for f in ("identity", "square"):
        print(f"  E[{f}] under the limit law: {centering_parameter(d, f):.4f}"
              f"   sample average: {np.mean(eigs if f == 'identity' else eigs**2):.4f}")

    # a coarse text histogram against the predicted density
    edges = np.linspace(0, 3.2, 17)
    counts, _ = np.histogram(eigs, edges)
    print("\n  bin          observed  predicted")
    for lo, hi, k in zip(edges[:-1], edges[1:], counts):
        pred = (d.cdf_at(hi) - d.cdf_at(lo)) * p
        print(f"  [{lo:.1f}, {hi:.1f})  {k:8d}  {float(pred):9.1f}  {'#' * int(k / 2)}")


if __name__ == "__main__":
    identity_check()
    spiked_population()
