"""Brute-force finite-difference oracle for the unseparated (xi, eta) problem.

The two-dimensional equation

    [d_xi (xi^2-1) d_xi + d_eta (1-eta^2) d_eta + 2 R xi] psi
        = -(1/2) R^2 E (xi^2 - eta^2) psi

is discretised without separating variables.  xi is mapped as xi = cosh(u),
which keeps the decaying tail cheap and turns the degenerate coefficient at
xi = 1 into a plain symmetry condition.  Second-order conservative
differences (coefficients at half points) and trapezoid weights give a
symmetric pencil K psi = mu M psi with mu = R^2 E / 2 and M diagonal and
positive.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .coords import Geometry

SHIFT_ENERGY = -2.1  # below the whole spectrum (E > -2 for every R)


class StagnationError(RuntimeError):
    def __init__(self, message, iterations, residual):
        super().__init__(f"{message} (iterations={iterations}, residual={residual:.3e})")
        self.iterations = iterations
        self.residual = residual


@dataclass(frozen=True)
class GridSpec:
    n_xi: int    # intervals in u = acosh(xi)
    n_eta: int   # intervals on [-1, 1]
    xi_max: float

    def __post_init__(self):
        if self.n_xi < 16 or self.n_eta < 16:
            raise ValueError("n_xi and n_eta must be >= 16")
        if not self.xi_max > 3.0:
            raise ValueError("xi_max must be > 3")

    @property
    def h(self) -> float:
        return np.arccosh(self.xi_max) / self.n_xi

    def refined(self, factor: int = 2) -> "GridSpec":
        return GridSpec(self.n_xi * factor, self.n_eta * factor, self.xi_max)


@dataclass
class Pencil:
    """Discrete pencil on a tensor grid; unknown (i, j) sits at i * n_eta_nodes + j."""

    K: sp.csc_matrix
    M: np.ndarray          # diagonal of the weight matrix
    u: np.ndarray          # u_1 .. u_{N-1}  (u = 0 carries no mass; u_N is Dirichlet)
    eta: np.ndarray        # eta_0 .. eta_M  (endpoints included, natural condition)
    R: float
    spec: GridSpec

    @property
    def xi(self) -> np.ndarray:
        return np.cosh(self.u)

    @property
    def shape(self) -> tuple[int, int]:
        return self.u.size, self.eta.size

    def energy(self, mu: float) -> float:
        return 2.0 * mu / self.R**2


def _stiffness_1d(coef_half, n_nodes, spacing):
    """Tridiagonal matrix of sum_k coef_half[k] (v[k+1]-v[k])^2 / spacing.

    coef_half[k] couples node k and k+1.  If there are as many edges as
    nodes, the last edge ends on a Dirichlet zero beyond the final node.
    """
    c = np.asarray(coef_half) / spacing
    diag = np.zeros(n_nodes)
    diag[: c.size] += c
    inner = c[: n_nodes - 1]
    diag[1 : 1 + inner.size] += inner
    return sp.diags([diag, -inner, -inner], [0, 1, -1], format="csr")


def assemble(R: float, spec: GridSpec) -> Pencil:
    Geometry(R)
    N, Me = spec.n_xi, spec.n_eta
    h = spec.h
    k = 2.0 / Me
    u = h * np.arange(1, N)                  # interior nodes; u_N is the Dirichlet wall
    u_half = h * (np.arange(1, N) + 0.5)     # edges (i, i+1), last one hits the wall
    eta = np.linspace(-1.0, 1.0, Me + 1)
    eta_half = 0.5 * (eta[:-1] + eta[1:])
    w_eta = np.full(Me + 1, k)
    w_eta[[0, -1]] = 0.5 * k

    Ku = _stiffness_1d(np.sinh(u_half), N - 1, h)
    Keta = _stiffness_1d(1.0 - eta_half**2, Me + 1, k)

    s = np.sinh(u)
    c = np.cosh(u)
    W_eta = sp.diags(w_eta)
    K = (sp.kron(Ku, W_eta)
         + sp.kron(sp.diags(h * s), Keta)
         - 2.0 * R * sp.kron(sp.diags(h * s * c), W_eta))
    M = np.kron(h * s * c * c, w_eta) - np.kron(h * s, w_eta * eta**2)
    return Pencil(K=K.tocsc(), M=M, u=u, eta=eta, R=R, spec=spec)


@dataclass
class GridEstimate:
    spec: GridSpec
    E_elec: float
    iterations: int
    residual: float
    seconds: float
    vector: np.ndarray = field(repr=False)
    pencil: Pencil = field(repr=False)


def rayleigh_quotient(pencil: Pencil, v: np.ndarray) -> float:
    return float(v @ (pencil.K @ v)) / float(v @ (pencil.M * v))


def inverse_iteration(pencil: Pencil, shift_energy: float = SHIFT_ENERGY, tol: float = 1e-13,
                      max_iter: int = 5000) -> tuple[float, np.ndarray, int, float]:
    """Lowest generalised eigenpair by shifted inverse iteration.

    Starts from a vector that is even in eta, so the nearly degenerate odd
    partner (sigma-u at large R) is never seeded beyond rounding.
    """
    sigma = 0.5 * pencil.R**2 * shift_energy
    lu = splu((pencil.K - sigma * sp.diags(pencil.M)).tocsc())
    n_u, n_eta = pencil.shape
    v = np.outer(np.exp(-pencil.xi), np.ones(n_eta)).ravel()
    v /= np.sqrt(v @ (pencil.M * v))
    mu_old = rayleigh_quotient(pencil, v)
    resid = np.inf
    for it in range(1, max_iter + 1):
        v = lu.solve(pencil.M * v)
        v /= np.sqrt(v @ (pencil.M * v))
        mu = rayleigh_quotient(pencil, v)
        r = pencil.K @ v - mu * (pencil.M * v)
        resid = float(np.sqrt(r @ (r / pencil.M))) / abs(mu)
        if abs(mu - mu_old) <= tol * abs(mu) and resid < 1e-6:
            break
        mu_old = mu
    else:
        raise StagnationError("inverse iteration did not converge", max_iter, resid)
    if v.sum() < 0:
        v = -v
    return mu, v, it, resid


def grid_energy(R: float, spec: GridSpec) -> GridEstimate:
    t = time.perf_counter()
    pencil = assemble(R, spec)
    mu, v, it, resid = inverse_iteration(pencil)
    return GridEstimate(spec, pencil.energy(mu), it, resid, time.perf_counter() - t, v, pencil)


@dataclass
class OracleResult:
    R: float
    estimates: list[GridEstimate]
    E_extrapolated: float
    error_estimate: float
    extrapolants: list[float]

    @property
    def E_grid(self) -> list[float]:
        return [e.E_elec for e in self.estimates]

    @property
    def E_tot(self) -> float:
        return self.E_extrapolated + 1.0 / self.R


def default_xi_max(R: float, E_guess: float = -1.0, decay: float = 22.0) -> float:
    p = R * np.sqrt(-0.5 * E_guess)
    return max(1.0 + decay / p, 3.5)


def default_grids(R: float, n0: int = 40, levels: int = 3) -> list[GridSpec]:
    # a rough energy only sets the radial cutoff
    E_guess = -2.0 if R < 0.5 else -0.5 - 1.0 / R if R > 3 else -1.2
    base = GridSpec(n0, n0, default_xi_max(R, max(E_guess, -2.0)))
    return [GridSpec(n0 * 2**k, n0 * 2**k, base.xi_max) for k in range(levels)]


def ground_energy(R: float, spec_sequence: list[GridSpec] | None = None) -> OracleResult:
    """Richardson-extrapolated ground-state E_elec from nested grids h, h/2, h/4, ..."""
    specs = default_grids(R) if spec_sequence is None else list(spec_sequence)
    if len(specs) < 3:
        raise ValueError("need at least three nested grids")
    for a, b in zip(specs[:-1], specs[1:]):
        if (b.n_xi != 2 * a.n_xi or b.n_eta != 2 * a.n_eta or b.xi_max != a.xi_max):
            raise ValueError("grids must be nested halvings with a common xi_max")
    estimates = [grid_energy(R, s) for s in specs]
    E = [e.E_elec for e in estimates]
    extrap = [(4.0 * f - c) / 3.0 for c, f in zip(E[:-1], E[1:])]
    return OracleResult(R=R, estimates=estimates, E_extrapolated=extrap[-1],
                        error_estimate=abs(extrap[-1] - extrap[-2]), extrapolants=extrap)


def consistency_residual(pencil: Pencil, psi: np.ndarray, E_elec: float) -> float:
    """Relative gap between the Rayleigh quotient of ``psi`` (sampled on the grid
    nodes) and the eigenvalue it is claimed to have; O(h^2) for a smooth eigenfunction."""
    mu = 0.5 * pencil.R**2 * E_elec
    return abs(rayleigh_quotient(pencil, psi) - mu) / abs(mu)


def node_coordinates(pencil: Pencil) -> tuple[np.ndarray, np.ndarray]:
    """Flattened (xi, eta) of every unknown, in the pencil's ordering."""
    n_u, n_eta = pencil.shape
    return np.repeat(pencil.xi, n_eta), np.tile(pencil.eta, n_u)
