"""Confidence intervals and tests for the stable rank.

Run with ``python demos/stable_rank_inference.py``.

The stable rank tr(S)^2 / tr(S^2) counts how many directions effectively carry
variance.  Below we put an interval around it and run the one-sided rank test
and the sphericity test, once on a slowly decaying spectrum and once on a
spherical population.
"""

import numpy as np

from specboot import CovarianceSpec, make_covariance_setting, paper_law, sample_dataset
from specboot import sphericity_test, stable_rank_ci, stable_rank_test

p, n = 80, 160

populations = {
    "decaying spectrum": make_covariance_setting("S2", p),
    "spherical": CovarianceSpec("eigen_profile", np.ones(p), p),
}

for name, spec in populations.items():
    lam = spec.eigenvalues
    true_rank = lam.sum() ** 2 / (lam @ lam)
    X = sample_dataset(spec, paper_law("i"), n, seed=11)
    print(f"{name}: true stable rank {true_rank:.2f} (r/p = {true_rank / p:.3f})")

    ci = stable_rank_ci(X, B=200, opts={"master_seed": 1})
    print("  " + ci.summary())
    lo, hi = ci.interval
    print(f"  covers the truth: {lo <= true_rank <= hi}")

    for eps in (0.3, 0.9):
        res = stable_rank_test(X, eps, B=200, opts={"master_seed": 2})
        print(f"  H0: r <= {eps:.1f} p  ->  {'reject' if res.reject else 'keep'}")

    sph = sphericity_test(X, B=200, opts={"master_seed": 3})
    print(f"  sphericity: {'reject' if sph.reject else 'keep'} "
          f"(statistic {sph.statistic:.3f}, threshold {sph.threshold:.3f})\n")
