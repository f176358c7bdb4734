import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from h2plus.coords import Geometry
from h2plus.density import (AsymmetricProfileError, DensityProfile, Extremum, IllConditionedFit,
                            Topology, axial_density, axial_grid, axial_profile,
                            class_from_extrema, classify_topology, critical_R_scan,
                            eval_density, find_extrema, fit_two_exponentials, midpoint_fit,
                            one_sided_curvature)
from h2plus.gaussian import reference_basis, variational_ground


def spheroidal_norm(source, R, n=48):
    """Integrate rho over all space on a (xi, eta) Gauss grid, independent of the
    solver's own normalisation quadrature (different nodes, Cartesian evaluation)."""
    g = Geometry(R)
    p = np.sqrt(-0.5 * source_energy(source) * R * R)
    edges = 1.0 + np.r_[0.0, np.geomspace(0.02, 80.0, 32)] / p
    x, w = np.polynomial.legendre.leggauss(n)
    xi = np.concatenate([0.5 * (b - a) * x + 0.5 * (a + b) for a, b in zip(edges[:-1], edges[1:])])
    wx = np.concatenate([0.5 * (b - a) * w for a, b in zip(edges[:-1], edges[1:])])
    eta, we = np.polynomial.legendre.leggauss(96)
    XI, ETA = np.meshgrid(xi, eta, indexing="ij")
    z = 0.5 * R * XI * ETA
    s = 0.5 * R * np.sqrt((XI**2 - 1) * (1 - ETA**2))
    pts = np.stack([s, np.zeros_like(s), z], axis=-1)
    rho = eval_density(source, g, pts)
    jac = 2 * np.pi * R**3 / 8 * (XI**2 - ETA**2)
    return float(wx @ (rho * jac) @ we)


def source_energy(source):
    return getattr(source, "E_elec", getattr(source, "E_var", None))


@pytest.mark.parametrize("R", [0.008, 2.0])
def test_exact_density_normalised(R, exact_cache):
    assert spheroidal_norm(exact_cache(R), R) == pytest.approx(1.0, abs=1e-8)


def test_variational_density_normalised(var2):
    assert spheroidal_norm(var2, 2.0) == pytest.approx(1.0, abs=1e-8)


def test_density_mirror_symmetric(rng, sol2, var2):
    g = Geometry(2.0)
    pts = rng.uniform(-4, 4, size=(200, 3))
    flipped = pts * [1, 1, -1]
    for src in (sol2, var2):
        a, b = eval_density(src, g, pts), eval_density(src, g, flipped)
        np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-300)


def test_far_points_flagged(sol2):
    g = Geometry(2.0)
    pts = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 500.0]])
    rho, flags = eval_density(sol2, g, pts, return_flags=True)
    assert list(flags) == [False, True]
    assert rho[1] >= 0


def test_geometry_mismatch_rejected(sol2):
    with pytest.raises(ValueError):
        eval_density(sol2, Geometry(2.5), np.zeros((1, 3)))


def test_exact_and_variational_agree_at_midpoint(sol2, var2):
    a, b = axial_density(sol2, [0.0])[0], axial_density(var2, [0.0])[0]
    assert abs(a - b) / a < 5e-3


def test_axial_grid_contains_landmarks():
    z = axial_grid(0.01, 5.0, 401)
    assert 0.0 in z and 0.005 in z and -0.005 in z
    np.testing.assert_array_equal(z, -z[::-1])
    assert np.all(np.diff(z) > 0)
    assert np.sum(np.abs(z) <= 0.01) >= 200
    with pytest.raises(ValueError):
        axial_grid(1.0, 5.0, 400)
    with pytest.raises(ValueError):
        axial_grid(1.0, 2.0, 401)


def test_exact_profile_peaks_at_nuclei(sol2):
    prof = axial_profile(sol2, Geometry(2.0))
    assert prof.asymmetry() < 1e-10
    rep = classify_topology(prof)
    assert rep.cls is Topology.TWO_MAX
    assert sorted(abs(m.z) for m in rep.maxima) == [1.0, 1.0]
    assert rep.kappa0 > 0


def test_exact_is_two_max_in_united_atom_regime(exact_cache):
    rep = classify_topology(axial_profile(exact_cache(0.008), Geometry(0.008)))
    assert rep.cls is Topology.TWO_MAX


def test_reference_basis_single_max_at_small_R():
    v = variational_ground(reference_basis(0.008), Geometry(0.008))
    assert classify_topology(axial_profile(v, Geometry(0.008))).cls is Topology.ONE_MAX


def test_kappa0_matches_angular_identity(exact_cache):
    # on the bond segment xi = 1 and eta = 2z/R; Y''(0) = A Y(0) and Y'(0) = 0
    for R in (2.0, 0.5):
        sol = exact_cache(R)
        N, X1, Y0 = sol.norm_const, float(sol.X(np.array([1.0]))[0]), float(sol.Y(0.0))
        expected = 2 * (2 / R) ** 2 * N**2 * X1**2 * sol.A * Y0**2
        rep = classify_topology(axial_profile(sol, Geometry(R), n=2001))
        assert np.sign(rep.kappa0) == np.sign(expected)
        assert rep.kappa0 == pytest.approx(expected, rel=1e-3)


# -- synthetic profiles ----------------------------------------------------------

def synthetic(fn, R=1.0):
    z = axial_grid(R, 0.5 * R + 2.0, 401)
    return DensityProfile("synthetic", R, z, fn(z))


def test_synthetic_classes():
    cases = {
        Topology.ONE_MAX: lambda z: np.exp(-z**2),
        Topology.TWO_MAX: lambda z: np.exp(-(z - 0.5) ** 2 / 0.05) + np.exp(-(z + 0.5) ** 2 / 0.05),
        Topology.THREE_MAX: lambda z: (np.exp(-(z - 0.5) ** 2 / 0.02)
                                       + np.exp(-(z + 0.5) ** 2 / 0.02) + np.exp(-z**2 / 0.02)),
        Topology.FLAT: lambda z: np.exp(-z**6),
    }
    for expected, fn in cases.items():
        assert classify_topology(synthetic(fn)).cls is expected, expected


def test_asymmetric_profile_rejected():
    with pytest.raises(AsymmetricProfileError):
        classify_topology(synthetic(lambda z: np.exp(-(z - 0.01) ** 2)))


def test_plateaus_reported_once():
    z = np.linspace(-1, 1, 11)
    rho = np.array([0, 1, 2, 3, 3, 3, 3, 3, 2, 1, 0], dtype=float)
    ext = find_extrema(z, rho, 1e-12)
    assert len(ext) == 1 and ext[0].kind == "max" and ext[0].z == 0.0


def test_one_sided_curvature_of_parabola():
    z = np.array([-0.2, -0.1, 0.0, 0.1, 0.3])
    assert one_sided_curvature(z, 1 - 3 * z**2) == pytest.approx(-6.0, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=3, max_size=30))
def test_extrema_alternate_and_classification_is_stable(values):
    half = np.cumsum(np.abs(values))
    rho = np.r_[half[::-1], half[1:]] if len(half) > 1 else half
    rho = np.r_[rho, 0.0]
    z = np.linspace(-1, 1, len(rho))
    ext = find_extrema(z, rho, 1e-12)
    kinds = [e.kind for e in ext]
    assert all(a != b for a, b in zip(kinds, kinds[1:]))
    c1 = class_from_extrema(ext, 1.0, 1.0, 1e-6)
    assert class_from_extrema(ext, 1.0, 1.0, 1e-6) is c1


def test_class_from_extrema_examples():
    mx = lambda z: Extremum(z, 1.0, "max")
    mn = lambda z: Extremum(z, 0.5, "min")
    assert class_from_extrema([mx(0.0)], -1.0, 1.0, 1e-6) is Topology.ONE_MAX
    assert class_from_extrema([mx(-0.5), mn(0.0), mx(0.5)], 1.0, 1.0, 1e-6) is Topology.TWO_MAX
    assert class_from_extrema([mx(-0.5), mn(-0.2), mx(0.0), mn(0.2), mx(0.5)], -1.0, 1.0,
                              1e-6) is Topology.THREE_MAX
    assert class_from_extrema([mx(0.0)], 1e-9, 1.0, 1e-6) is Topology.FLAT


# -- two-exponential midpoint model ----------------------------------------------

def test_fit_recovers_cosh():
    eta = np.linspace(0, 0.1, 41)
    fit = fit_two_exponentials(eta, np.cosh(2 * eta), 4.0, 0.1)
    assert fit.c1 == pytest.approx(0.5, abs=1e-12) and fit.c2 == pytest.approx(0.5, abs=1e-12)
    assert fit.balance < 1e-11 and abs(fit.slope) < 1e-11


def test_fit_recovers_decaying_exponential():
    eta = np.linspace(0, 0.1, 41)
    fit = fit_two_exponentials(eta, 3 * np.exp(-eta), 1.0, 0.1)
    assert fit.c1 == pytest.approx(3.0, abs=1e-10) and abs(fit.c2) < 1e-10
    assert fit.slope == pytest.approx(-3.0, rel=1e-10)


def test_fit_rejects_degenerate_window():
    with pytest.raises(IllConditionedFit):
        fit_two_exponentials(np.linspace(0, 1e-8, 5), np.ones(5), 1.0, 1e-8)
    with pytest.raises(ValueError):
        fit_two_exponentials(np.linspace(0, 0.1, 5), np.ones(5), -1.0, 0.1)


def test_midpoint_fit_balanced_at_equilibrium(sol2):
    fit = midpoint_fit(sol2, window=0.02)
    assert fit.balance < 1e-6
    assert fit.residual < 1e-9


def test_midpoint_fit_imbalance_scales_with_window_cubed(sol2):
    b = [midpoint_fit(sol2, window=w).balance for w in (0.1, 0.05)]
    assert b[0] / b[1] == pytest.approx(8.0, rel=0.15)


def test_fit_slope_is_model_derivative_at_zero(sol2):
    fit = midpoint_fit(sol2)
    assert fit.slope == pytest.approx(float(fit.derivative(0.0)), rel=1e-10, abs=1e-15)
    h = 1e-5
    fd = (fit(h) - fit(0.0)) / h
    assert abs(fd - fit.slope) < 1e-4


def test_midpoint_fit_window_bounds(sol2):
    with pytest.raises(ValueError):
        midpoint_fit(sol2, window=0.5)


# -- scanning R -------------------------------------------------------------------

def test_exact_scan_near_equilibrium_has_no_transition():
    scan = critical_R_scan("exact", 1.9, 2.1, n=8)
    assert scan.brackets == [] and scan.three_max == []
    assert all(c is Topology.TWO_MAX for c in scan.classes)


def test_exact_scan_in_united_atom_regime_follows_sign_of_A():
    scan = critical_R_scan("exact", 0.008, 0.012, n=8)
    assert scan.brackets == []
    assert np.all(scan.kappa0 > 0)


@pytest.mark.slow
def test_bisection_narrows_reference_basis_transition():
    basis = reference_basis(2.0)
    scan = critical_R_scan(basis, 0.05, 0.1, n=8, dR=1e-4)
    assert scan.source == "variational"
    assert len(scan.brackets) >= 1
    for lo, hi in scan.brackets:
        assert 0 < hi - lo < 1e-4


def test_scan_argument_validation():
    with pytest.raises(ValueError):
        critical_R_scan("exact", 1.0, 0.5)
    with pytest.raises(ValueError):
        critical_R_scan("exact", 0.5, 1.0, n=4)
    with pytest.raises(ValueError):
        critical_R_scan("bogus", 0.5, 1.0)
