import numpy as np
import pytest
import scipy.sparse as sp

from h2plus import fd_oracle as fo


@pytest.fixture(scope="module")
def oracle2():
    return fo.ground_energy(2.0)


def test_gridspec_invariants():
    with pytest.raises(ValueError):
        fo.GridSpec(8, 32, 10.0)
    with pytest.raises(ValueError):
        fo.GridSpec(32, 32, 3.0)
    assert fo.GridSpec(16, 16, 5.0).refined().n_xi == 32


def test_assembled_pencil_symmetric_and_weights_positive():
    P = fo.assemble(2.0, fo.GridSpec(24, 20, 12.0))
    asym = abs(P.K - P.K.T).max()
    assert asym <= 1e-14 * abs(P.K).max()
    assert np.all(P.M > 0)
    assert P.K.shape == (23 * 21, 23 * 21)


def test_separated_solution_is_consistent_to_second_order(sol2):
    res = []
    for spec in fo.default_grids(2.0, n0=40, levels=3):
        P = fo.assemble(2.0, spec)
        xi, eta = fo.node_coordinates(P)
        res.append(fo.consistency_residual(P, sol2.psi(xi, eta), sol2.E_elec))
    ratios = np.array(res[:-1]) / np.array(res[1:])
    np.testing.assert_allclose(ratios, 4.0, rtol=0.1)


def test_agrees_with_separated_solver(oracle2, sol2):
    assert abs(oracle2.E_extrapolated - sol2.E_elec) < 1e-4
    assert oracle2.error_estimate < 1e-4


def test_second_order_convergence(oracle2):
    E = oracle2.E_grid
    assert E[0] > E[1] > E[2]
    assert (E[0] - E[1]) / (E[1] - E[2]) == pytest.approx(4.0, rel=0.1)


def test_extrapolant_within_finest_spread(oracle2):
    E = oracle2.E_grid
    assert abs(oracle2.E_extrapolated - E[-1]) <= abs(E[-1] - E[-2])


def test_united_atom_regime():
    res = fo.ground_energy(0.008)
    assert -2.0 < res.E_extrapolated < -1.999


def test_eigenvector_properties(oracle2):
    est = oracle2.estimates[-1]
    P, v = est.pencil, est.vector
    assert v.min() >= -1e-10 * np.abs(v).max()
    # evenness in eta (the eta grid is symmetric)
    V = v.reshape(P.shape)
    fold = np.sqrt(np.sum(P.M.reshape(P.shape) * (V - V[:, ::-1]) ** 2))
    h = max(est.spec.h, 2.0 / est.spec.n_eta)
    assert fold < 10 * h**2
    mu = 0.5 * 4.0 * est.E_elec
    assert fo.rayleigh_quotient(P, v) == pytest.approx(mu, rel=1e-12)


def test_density_peaks_at_nuclei_and_dips_mid_bond(oracle2):
    # exact-density corroboration: maximum on the node row nearest xi = 1 at eta = +-1,
    # and a minimum at eta = 0 along that row
    est = oracle2.estimates[-1]
    V = est.vector.reshape(est.pencil.shape)
    i, j = np.unravel_index(np.argmax(V), V.shape)
    assert i == 0 and j in (0, V.shape[1] - 1)
    row = V[0]
    mid = V.shape[1] // 2
    assert row[mid] == row.min()


def test_stagnation_is_reported():
    P = fo.assemble(8.0, fo.GridSpec(16, 16, 8.0))
    with pytest.raises(fo.StagnationError) as info:
        fo.inverse_iteration(P, max_iter=2)
    assert info.value.iterations == 2


def test_needs_three_nested_grids():
    g = fo.default_grids(2.0)
    with pytest.raises(ValueError):
        fo.ground_energy(2.0, g[:2])
    with pytest.raises(ValueError):
        fo.ground_energy(2.0, [g[0], g[2], g[2].refined()])
