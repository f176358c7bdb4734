import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from h2plus.coords import (DomainError, Geometry, SpheroidalPoint, axial_to_spheroidal,
                           cartesian_to_spheroidal, nuclear_distances, to_cartesian,
                           volume_element)


def test_geometry_rejects_nonpositive_R():
    for R in (0.0, -1.0, float("nan")):
        with pytest.raises(DomainError):
            Geometry(R)
    g = Geometry(1.4)
    assert g.zB - g.zA == 1.4
    assert g.ZA == g.ZB == 1.0


@pytest.mark.parametrize("xi,eta", [(0.99, 0.0), (1.0, 1.01), (2.0, -1.5)])
def test_point_invariants(xi, eta):
    with pytest.raises(DomainError):
        SpheroidalPoint(xi, eta)


@pytest.mark.parametrize("xi,eta,expected", [
    (1.0, 1.0, (0.0, 0.0, 1.0)),
    (1.0, 0.0, (0.0, 0.0, 0.0)),
    (2.0, 0.0, (np.sqrt(3.0), 0.0, 0.0)),
])
def test_to_cartesian_examples(xi, eta, expected):
    g = Geometry(2.0)
    np.testing.assert_allclose(to_cartesian(SpheroidalPoint(xi, eta), g), expected, atol=1e-15)


def test_to_cartesian_equator_distances():
    g = Geometry(2.0)
    x, y, z = to_cartesian(SpheroidalPoint(2.0, 0.0), g)
    r1, r2 = nuclear_distances(x, y, z, g)
    assert r1 == pytest.approx(2.0, abs=1e-14)
    assert r2 == pytest.approx(2.0, abs=1e-14)


@pytest.mark.parametrize("z,xi,eta", [(0.0, 1.0, 0.0), (1.0, 1.0, 1.0), (3.0, 3.0, 1.0),
                                      (-3.0, 3.0, -1.0)])
def test_axial_to_spheroidal_examples(z, xi, eta):
    p = axial_to_spheroidal(z, Geometry(2.0))
    assert (p.xi, p.eta) == (xi, eta)


def test_volume_element_examples():
    assert volume_element(SpheroidalPoint(1.0, 1.0), Geometry(3.3)) == 0.0
    assert volume_element(SpheroidalPoint(2.0, 0.0), Geometry(2.0)) == 4.0
    assert volume_element(SpheroidalPoint(1.0, 0.0), Geometry(1.0)) == 0.125


def test_axial_round_trip_random(rng):
    for _ in range(1000):
        R = 10 ** rng.uniform(-3, 1.5)
        z = rng.uniform(-5, 5) * R
        g = Geometry(R)
        x, y, z2 = to_cartesian(axial_to_spheroidal(z, g), g)
        assert x == 0.0 and y == 0.0
        assert abs(z2 - z) <= 1e-14 * max(abs(z), 0.5 * R)


@settings(max_examples=300, deadline=None)
@given(xi=st.floats(1.0, 50.0), eta=st.floats(-1.0, 1.0), phi=st.floats(0, 2 * np.pi),
       R=st.floats(1e-3, 30.0))
def test_distances_match_spheroidal_definition(xi, eta, phi, R):
    g = Geometry(R)
    x, y, z = to_cartesian(SpheroidalPoint(xi, eta, phi), g)
    r1, r2 = nuclear_distances(x, y, z, g)
    assert r1 == pytest.approx(R * (xi + eta) / 2, rel=1e-13, abs=1e-13 * R * xi)
    assert r2 == pytest.approx(R * (xi - eta) / 2, rel=1e-13, abs=1e-13 * R * xi)
    assert volume_element(SpheroidalPoint(xi, eta), g) >= 0.0


def test_cartesian_to_spheroidal_inverts(rng):
    g = Geometry(1.7)
    xi = 1 + rng.exponential(2.0, 200)
    eta = rng.uniform(-1, 1, 200)
    pts = np.array([to_cartesian(SpheroidalPoint(a, b, 0.3), g) for a, b in zip(xi, eta)])
    xi2, eta2 = cartesian_to_spheroidal(*pts.T, g)
    np.testing.assert_allclose(xi2, xi, rtol=1e-12)
    np.testing.assert_allclose(eta2, eta, atol=1e-12)
