import csv

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specboot.errors import ConfigurationError, DomainError
from specboot.mp import (
    RealAxisSolver,
    centering_moments,
    centering_parameter,
    centering_parameter_mc,
    esd_grid,
    solve_stieltjes,
)
from specboot.sampling import paper_law
from specboot.spectra import SpectrumModel, make_covariance_setting

DELTA1 = SpectrumModel.from_eigenvalues([1.0])


def quadratic_oracle(c, z):
    # one-atom H turns the fixed point into c z m^2 + (z + c - 1) m + 1 = 0
    roots = np.roots([c * z, z + c - 1, 1])
    good = [m for m in roots if m.imag > 0 and ((c - 1) / z + c * m).imag > 0]
    assert len(good) == 1
    return good[0]


def mp_density(x, c):
    a, b = (1 - np.sqrt(c)) ** 2, (1 + np.sqrt(c)) ** 2
    return np.sqrt(np.clip((b - x) * (x - a), 0, None)) / (2 * np.pi * c * x)


@pytest.mark.parametrize("c", [0.1, 0.25, 0.5, 1.0, 2.0, 4.0])
def test_delta1_matches_quadratic(c):
    for z in (1j, 0.5 + 0.01j, 3 + 0.2j, -1 + 2j):
        assert solve_stieltjes(DELTA1, c, z) == pytest.approx(quadratic_oracle(c, z), abs=1e-9)


def test_point_mass_scaling():
    c, t = 0.5, 3.0
    for z in (1j, 2 + 0.1j):
        m_t = solve_stieltjes(SpectrumModel.from_eigenvalues([t]), c, z)
        assert m_t == pytest.approx(solve_stieltjes(DELTA1, c, z / t) / t, abs=1e-10)


def test_residual_s1():
    H = SpectrumModel.from_eigenvalues(make_covariance_setting("S1", 200).eigenvalues)
    z, c = 0.5 + 0.05j, 0.5
    m = solve_stieltjes(H, c, z)
    resid = m - np.sum(H.weights / (H.values * (1 - c - c * z * m) - z))
    assert abs(resid) < 1e-10
    assert ((c - 1) / z + c * m).imag > 0


def test_herglotz_on_grid():
    H = SpectrumModel.from_eigenvalues(make_covariance_setting("S2", 40).eigenvalues)
    x, y = np.meshgrid(np.linspace(-1, 3, 25), [1e-3, 1e-2, 0.1, 1, 10])
    m = solve_stieltjes(H, 1.5, (x + 1j * y).ravel())
    assert np.all(m.imag > 0)


def test_solve_stieltjes_rejects_lower_half_plane():
    with pytest.raises(DomainError):
        solve_stieltjes(DELTA1, 0.5, 1 - 1j)


@pytest.mark.parametrize("c", [0.25, 0.5, 2.0])
def test_closed_form_density(c):
    d = esd_grid(DELTA1, c)
    a, b = (1 - np.sqrt(c)) ** 2, (1 + np.sqrt(c)) ** 2
    band = 0.01 * (b - a)
    keep = (d.x > a + band) & (d.x < b - band)
    assert keep.sum() > 500
    assert np.max(np.abs(d.density[keep] - mp_density(d.x[keep], c))) < 1e-3
    assert d.support_intervals[0] == pytest.approx((a, b), abs=1e-9)


def test_zero_atom_values():
    assert esd_grid(DELTA1, 4.0).zero_atom == 0.75
    assert esd_grid(DELTA1, 2.0).zero_atom == 0.5
    # roundoff in the weights must not create an atom
    assert esd_grid(make_covariance_setting("S2", 40).eigenvalues, 0.5).zero_atom == 0.0


def test_total_mass_s2():
    d = esd_grid(make_covariance_setting("S2", 200).eigenvalues, 0.7)
    assert d.total_mass == pytest.approx(1, abs=1e-4)
    assert np.all(d.density >= 0)
    assert np.all(np.diff(d.cdf) >= 0)
    assert d.cdf_at(-1) == 0 and d.cdf_at(1e6) == 1


@pytest.mark.parametrize("setting,c", [("S1", 0.5), ("S1", 1.5), ("S3", 1.0), ("S2", 2.0)])
def test_mass_and_atom_general(setting, c):
    d = esd_grid(make_covariance_setting(setting, 200).eigenvalues, c)
    assert d.zero_atom == pytest.approx(max(0, 1 - 1 / c), abs=1e-14)
    assert d.total_mass == pytest.approx(1, abs=1e-4)


def test_stieltjes_and_density_routes_agree():
    # integrating the real-axis density against 1/(x - z) reproduces the complex solver
    H = make_covariance_setting("S1", 200).eigenvalues
    for c in (0.5, 2.0):
        d = esd_grid(H, c)
        for z in (1 + 1j, 0.3 + 0.5j, 2 + 0.2j):
            m = d.zero_atom / (0 - z) + np.sum(d.quad_w / (d.quad_x - z))
            assert m == pytest.approx(d.stieltjes(z), abs=1e-6)


def test_quantiles_invert_cdf():
    d = esd_grid(make_covariance_setting("S1", 200).eigenvalues, 0.5)
    u = np.linspace(0.02, 0.98, 49)
    x = d.quantile(u)
    assert np.all(np.diff(x) > 0)
    assert np.allclose(d.cdf_at(x), u, atol=2e-3)


def test_gap_between_bulks():
    # well separated atoms at small c give two support intervals
    H = SpectrumModel(np.array([1.0, 10.0]), np.array([0.5, 0.5]))
    d = esd_grid(H, 0.05)
    assert len(d.support_intervals) == 2
    lo, hi = d.support_intervals
    assert lo[1] < 1.6 < 7 < hi[0]
    assert d.cdf_at(4.0) == pytest.approx(0.5, abs=1e-9)


def test_low_c_concentrates_on_atoms():
    H = SpectrumModel(np.array([1.0, 2.0, 3.0]), np.array([0.2, 0.5, 0.3]))
    d = esd_grid(H, 1e-3)
    for t, w in zip(H.values, H.weights):
        mass = d.cdf_at(t + 0.1) - d.cdf_at(t - 0.1)
        assert mass >= w - 0.05


def test_real_axis_solver_b2_positive_inside():
    solver = RealAxisSolver(np.array([1.0]), np.array([1.0]), 0.5)
    (lo, hi), = solver.edges
    assert solver.solve_b2(0.5 * (lo + hi)) > 0


@pytest.mark.parametrize("setting", ["S1", "S2", "S3"])
@pytest.mark.parametrize("c", [0.5, 1.0, 1.5])
def test_moment_identity(setting, c):
    lam = make_covariance_setting(setting, 200).eigenvalues
    H = SpectrumModel.from_eigenvalues(lam)
    n = int(round(200 / c))
    d = esd_grid(H, 200 / n)
    th1, th2 = centering_moments(H, n, 200)
    assert centering_parameter(d, "identity") == pytest.approx(th1, rel=1e-3)
    # the finite-n term tr^2/(n p) is c * m1^2 with c = p/n
    assert centering_parameter(d, "square") == pytest.approx(th2, rel=1e-3)


def test_centering_examples():
    d = esd_grid(DELTA1, 0.3)
    assert centering_parameter(d, "one") == pytest.approx(1, abs=1e-4)
    assert centering_parameter(d, "square") == pytest.approx(1.3, rel=1e-6)
    assert centering_parameter(d, lambda x: x**3) == pytest.approx(1 + 3 * 0.3 + 0.09, rel=1e-6)
    with pytest.raises(DomainError):
        centering_parameter(esd_grid(DELTA1, 2.0), "x_minus_log")
    with pytest.raises(ConfigurationError):
        centering_parameter(d, "cube")


def test_centering_moments_examples():
    assert centering_moments(np.ones(7), 7, 7) == pytest.approx((1, 2))
    spec = make_covariance_setting("S1", 10)
    t1, t2 = centering_moments(spec, 20, 10)
    assert t1 == pytest.approx(7 / 6)
    assert t2 == pytest.approx((5 * 16 / 9 + 5) / 10 + (35 / 3) ** 2 / 200)


@settings(max_examples=15, deadline=None)
@given(
    st.lists(st.floats(0.2, 5), min_size=1, max_size=6),
    st.floats(0.1, 3),
    st.floats(0.2, 5),
)
def test_centering_scaling(values, c, s):
    H = SpectrumModel.from_eigenvalues(values)
    a = esd_grid(H, c, grid_points=256)
    b = esd_grid(H.scaled(s), c, grid_points=256)
    assert centering_parameter(b, "identity") == pytest.approx(s * centering_parameter(a, "identity"), rel=1e-6)
    assert centering_parameter(b, "square") == pytest.approx(s**2 * centering_parameter(a, "square"), rel=1e-6)


def test_mc_identity_is_trace_preserving():
    lam = make_covariance_setting("S1", 20).eigenvalues
    m, se = centering_parameter_mc(lam, paper_law("i"), 40, 20, "identity", reps=20, expansion=5, return_se=True)
    assert abs(m - lam.mean()) < 4 * se + 1e-12


def test_mc_square_matches_moments():
    m, se = centering_parameter_mc(np.ones(50), paper_law("i"), 100, 50, "square", reps=200, expansion=1, return_se=True)
    # finite n bias of E tr(S^2)/p is O(1/n) on top of 1 + c
    assert abs(m - 1.5) < 4 * se + 0.02


def test_mc_agrees_with_quadrature_x_minus_log():
    lam = make_covariance_setting("S2", 40).eigenvalues
    q = centering_parameter(esd_grid(lam, 0.5), "x_minus_log")
    m, se = centering_parameter_mc(lam, paper_law("i"), 80, 40, "x_minus_log", reps=30, expansion=10, seed=1, return_se=True)
    assert abs(m - q) < 3 * se


def test_mc_memory_guard():
    with pytest.raises(ConfigurationError):
        centering_parameter_mc(np.ones(200), paper_law("i"), 400, 200, "identity", expansion=40)


def test_csv_export(tmp_path):
    d = esd_grid(DELTA1, 0.5, grid_points=256)
    d.to_csv(tmp_path / "mp.csv")
    with open(tmp_path / "mp.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x", "density", "cdf"]
    assert len(rows) - 1 == d.x.size
    assert float(rows[-1][2]) == pytest.approx(1.0)
