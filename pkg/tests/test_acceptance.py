"""Acceptance criteria, each at its stated tolerance.

Every test reports one PASS/FAIL line (collected in the terminal summary) and
then asserts the same condition.  The slow ones run the full trial counts.
"""

import numpy as np
import pytest

from specboot.estimators import eigenvalue_cap, estimate_all
from specboot.experiments import ExperimentConfig, reproduce_table, run_experiment
from specboot.inference import closed_form_rank_variance, limiting_rank_variance, stable_rank_test
from specboot.mp import centering_moments, centering_parameter, esd_grid
from specboot.quest import estimate_population_spectrum
from specboot.sampling import paper_law, sample_dataset, sample_unit_sphere
from specboot.spectra import CovarianceSpec, SpectrumModel, make_covariance_setting, rescaled_s1, s1_scale_for_ratio

from _metrics import ks_distance, levy_distance
from _report import report

pytestmark = pytest.mark.acceptance


def summary_row(res, stat):
    rows = [r for r in res.summary if r[3] == stat]
    assert len(rows) == 1
    return rows[0]


def test_criterion_01_mp_closed_form():
    worst = 0.0
    for c in (0.25, 0.5, 2.0):
        d = esd_grid(SpectrumModel.from_eigenvalues([1.0]), c)
        a, b = (1 - np.sqrt(c)) ** 2, (1 + np.sqrt(c)) ** 2
        band = 0.01 * (b - a)
        keep = (d.x > a + band) & (d.x < b - band)
        exact = np.sqrt((b - d.x[keep]) * (d.x[keep] - a)) / (2 * np.pi * c * d.x[keep])
        worst = max(worst, float(np.max(np.abs(d.density[keep] - exact))))
        if c == 2.0:
            atom = d.zero_atom
    ok = worst < 1e-3 and atom == 1 - 1 / 2.0
    report(1, ok, f"MP density sup error {worst:.2e} (< 1e-3); zero atom at c=2 is {atom}")
    assert ok


def test_criterion_02_moment_identity():
    worst = 0.0
    p = 200
    for setting in ("S1", "S2", "S3"):
        lam = make_covariance_setting(setting, p).eigenvalues
        H = SpectrumModel.from_eigenvalues(lam)
        for c in (0.5, 1.0, 1.5):
            n = int(round(p / c))
            d = esd_grid(H, p / n)
            th1, th2 = centering_moments(H, n, p)
            for got, want in ((centering_parameter(d, "identity"), th1), (centering_parameter(d, "square"), th2)):
                worst = max(worst, abs(got / want - 1))
    ok = worst < 1e-3
    report(2, ok, f"centering vs moment identity, worst relative error {worst:.2e} (< 1e-3)")
    assert ok


def test_criterion_03_quadratic_form_variance():
    p, draws = 20, 10**6
    C = make_covariance_setting("S1", p).matrix
    law = paper_law("i")
    rng = np.random.default_rng(2024)
    vals = []
    for _ in range(10):
        m = draws // 10
        xi2 = law.sample(p, rng, m)
        u = sample_unit_sphere(p, rng, m)
        vals.append(xi2 * np.einsum("ij,jk,ik->i", u, C, u))
    mc = np.concatenate(vals).var()
    t1, t2 = np.trace(C), np.trace(C @ C)
    exact = law.fourth_moment(p) / (p * (p + 2)) * (t1**2 + 2 * t2) - t1**2
    rel = abs(mc / exact - 1)
    ok = rel < 0.02
    report(3, ok, f"var(xi^2 u'Cu) MC {mc:.4f} vs closed form {exact:.4f}, rel {rel:.2%} (< 2%)")
    assert ok


def test_criterion_04_varsigma_consistency():
    spec = make_covariance_setting("S1", 200)
    dev = [abs(estimate_all(sample_dataset(spec, paper_law("i"), 400, seed=40_000 + t)).varsigma_sq_hat / 200 - 2)
           for t in range(200)]
    m = float(np.mean(dev))
    ok = m < 0.15
    report(4, ok, f"mean |varsigma^2/p - 2| over 200 trials = {m:.4f} (< 0.15)")
    assert ok


@pytest.mark.slow
def test_criterion_05_square_lss_cell(tmp_path):
    cfg = ExperimentConfig(design="table1", ratios=(0.5,), laws=("i",), settings=("S1",), trials=2000,
                           boot_runs=100, B=250, master_seed=5, output_dir=str(tmp_path / "t1"),
                           statistics=("lss:square",))
    row = summary_row(run_experiment(cfg), "lss_square")
    ground_sd, boot_sd, boot_p95 = row[5], row[9], row[11]
    checks = (abs(ground_sd / 3.31 - 1) <= 0.10, abs(boot_sd / 3.27 - 1) <= 0.10, abs(boot_p95 / 5.85 - 1) <= 0.15)
    ok = all(checks)
    report(5, ok, f"ground sd {ground_sd:.3f} (3.31 +-10%), boot sd {boot_sd:.3f} (3.27 +-10%), "
                  f"boot p95 {boot_p95:.3f} (5.85 +-15%)")
    assert ok


@pytest.mark.slow
def test_criterion_06_largest_eigenvalue_cell(tmp_path):
    res = reproduce_table(3, 0.1, tmp_path / "t3", cells=[("i", "S1", 0.5)], master_seed=6)
    row = summary_row(res, "largest_eig")
    ground, boot = row[4], row[7]
    ok = abs(ground / 2.90 - 1) <= 0.02 and abs(boot / 2.93 - 1) <= 0.02
    report(6, ok, f"ground mean {ground:.4f} (2.90 +-2%), bootstrap mean of means {boot:.4f} (2.93 +-2%)")
    assert ok


@pytest.mark.slow
def test_criterion_07_interval_coverage(tmp_path):
    res = reproduce_table(5, 0.6, tmp_path / "t5", cells=[("i", "S1", 0.5)], master_seed=7)
    width = summary_row(res, "width_pct")[4]
    coverage = summary_row(res, "coverage_pct")[4]
    ok = 91 <= coverage <= 98 and 1.5 <= width <= 2.5
    report(7, ok, f"coverage {coverage:.2f}% over 300 trials (91..98), mean width {width:.3f}% of r (1.5..2.5)")
    assert ok


@pytest.mark.slow
def test_criterion_08_rank_test_level_and_power():
    n, p, trials = 400, 200, 200
    rates = {}
    for target in (0.098, 0.105):
        spec = rescaled_s1(p, s1_scale_for_ratio(p, target))
        rej = 0
        for t in range(trials):
            X = sample_dataset(spec, paper_law("i"), n, seed=80_000 + int(target * 1e4) * 1000 + t)
            rej += stable_rank_test(X, 0.1, alpha=0.05, B=250, opts={"master_seed": t}).reject
        rates[target] = rej / trials
    ok = rates[0.098] <= 0.07 and rates[0.105] >= 0.90
    report(8, ok, f"rejection rate {rates[0.098]:.1%} at r/p=0.098 (<= 7%), {rates[0.105]:.1%} at 0.105 (>= 90%)")
    assert ok


@pytest.fixture(scope="module")
def identity_estimates():
    n, p = 800, 400
    spec = CovarianceSpec("eigen_profile", np.ones(p), p)
    out = []
    for t in range(50):
        X = sample_dataset(spec, paper_law("i"), n, seed=90_000 + t)
        b = estimate_all(X)
        est = estimate_population_spectrum(b.sample_eigs, n)
        out.append(eigenvalue_cap(est.eigenvalues, b.b_hat))
    return out


@pytest.mark.slow
def test_criterion_09_quest_consistency(identity_estimates):
    ks = [ks_distance(e, np.ones(e.size)) for e in identity_estimates]
    med = float(np.median(ks))
    ok = med <= 0.15
    report(9, ok, f"median Kolmogorov distance to delta_1 over 50 trials = {med:.3f} (<= 0.15)")
    assert ok


@pytest.mark.slow
def test_criterion_09_supplement_weak_distance(identity_estimates):
    # Not a substitute for criterion 9: the Levy distance metrizes weak convergence,
    # which is the consistency notion the estimator actually targets.
    levy = float(np.median([levy_distance(e, np.ones(e.size)) for e in identity_estimates]))
    mae = float(np.median([np.mean(np.abs(e - 1)) for e in identity_estimates]))
    print(f"supplement: median Levy distance {levy:.4f}, median mean |lambda - 1| {mae:.4f}")
    assert levy <= 0.15 and mae <= 0.15


def test_criterion_10_limit_formula():
    rng = np.random.default_rng(10)
    worst, negative = 0.0, 0
    for _ in range(1000):
        k = rng.integers(1, 10)
        t = rng.uniform(0.01, 10, k)
        w = rng.dirichlet(np.ones(k))
        phi = [float(w @ t**j) for j in range(1, 5)]
        c, tau = rng.uniform(0.01, 5), rng.uniform(0, 20)
        lm = limiting_rank_variance(phi, c, tau)
        closed = closed_form_rank_variance(phi, c)
        worst = max(worst, abs(lm.var_rank - closed))
        negative += lm.var_rank < 0
    ok = worst <= 1e-10 and negative == 0
    report(10, ok, f"quadratic form vs closed form, worst error {worst:.1e} (<= 1e-10); {negative} negative")
    assert ok
