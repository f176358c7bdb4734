"""Exact sigma-g ground state of the one-electron diatomic via separation of variables.

With Psi = X(xi) Y(eta), p^2 = -E R^2 / 2 and the attractive two-center
potential, the separated pair reads

    (xi^2 - 1) X'' + 2 xi X' + (-p^2 xi^2 + 2 R xi + A) X = 0
    (1 - eta^2) Y'' - 2 eta Y' + ( p^2 eta^2 - A) Y = 0

The angular line is solved as a tridiagonal eigenproblem (``angular``); the
radial line by two-sided shooting with logarithmic-derivative matching.  The
outer loop searches E_elec until both lines admit the same A.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .angular import AngularSolution, TruncationError, angular_eigenvalue
from .coords import DomainError, Geometry

log = logging.getLogger(__name__)

E_LOWER = -2.0          # united-atom (He+) limit
E_UPPER = -0.5 - 1e-9   # separated-atom (H 1s) limit
BISECT_WIDTH = 1e-6
TAIL_DECAY = 30.0       # p * (xi_max - 1) for the inward start


class SolverError(RuntimeError):
    """The eigenvalue search failed; ``diagnostics`` says where."""

    def __init__(self, message: str, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class BracketError(SolverError):
    pass


class RadialIntegrationError(SolverError):
    pass


def _p_of(E_elec: float, R: float) -> float:
    return R * np.sqrt(-0.5 * E_elec)


def default_match_point(p: float) -> float:
    # outward growth to the match point stays near e^2 for every p
    return 1.0 + min(2.0 / p, 4.0)


def default_outer_point(p: float, xi_match: float) -> float:
    # decayed by e^-TAIL_DECAY relative to xi=1; also keeps p*xi_max >= 25
    return max(1.0 + TAIL_DECAY / p, 25.0 / p, xi_match + 1.0)


# -- Frobenius start at the regular singular point xi = 1 ----------------------

def _potential_coeffs(E_elec, A, R):
    """q(xi) = -p^2 xi^2 + 2R xi + A written as q0 + q1 t + q2 t^2, t = xi - 1."""
    p2 = -0.5 * E_elec * R * R
    return (-p2 + 2 * R + A, -2 * p2 + 2 * R, -p2)


def radial_start(E_elec: float, A: float, R: float) -> tuple[float, float]:
    """Value and slope of the regular radial solution at xi = 1 (X(1) = 1)."""
    q0 = 0.5 * E_elec * R * R + 2 * R + A
    return 1.0, -0.5 * q0


def frobenius_coeffs(E_elec: float, A: float, R: float, n_terms: int = 80) -> np.ndarray:
    """Taylor coefficients a_k of the regular solution about xi = 1, a_0 = 1.

    From the ODE in t = xi - 1:
        2 (k+1)^2 a_{k+1} = -(k(k+1) + q0) a_k - q1 a_{k-1} - q2 a_{k-2}
    The series converges for |t| < 2 (next singular point is xi = -1).
    """
    q0, q1, q2 = _potential_coeffs(E_elec, A, R)
    a = np.zeros(n_terms)
    a[0] = 1.0
    for k in range(n_terms - 1):
        s = (k * (k + 1) + q0) * a[k]
        if k >= 1:
            s += q1 * a[k - 1]
        if k >= 2:
            s += q2 * a[k - 2]
        a[k + 1] = -s / (2.0 * (k + 1) ** 2)
    return a


def _series_eval(a, t):
    t = np.asarray(t, dtype=float)
    X = np.polynomial.polynomial.polyval(t, a)
    dX = np.polynomial.polynomial.polyval(t, a[1:] * np.arange(1, a.size))
    return X, dX


def _rhs(E_elec, A, R):
    q0, q1, q2 = _potential_coeffs(E_elec, A, R)

    def f(xi, y):
        t = xi - 1.0
        q = q0 + t * (q1 + t * q2)
        return [y[1], -(2.0 * xi * y[1] + q * y[0]) / (t * (xi + 1.0))]

    return f


def _count_nodes(values) -> int:
    s = np.sign(values)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


@dataclass(frozen=True)
class RadialFunction:
    """Piecewise representation of X(xi) on [1, inf).

    Frobenius series on [1, 1+t0], outward dense output up to ``xi_match``,
    inward dense output (rescaled to be continuous) up to ``xi_max`` and the
    asymptotic form e^{-p xi} xi^{R/p - 1} beyond.
    """

    R: float
    p: float
    series: np.ndarray
    t0: float
    xi_match: float
    xi_max: float
    outward: object
    inward: object
    inward_scale: float

    def _tail(self, xi):
        X_end, dX_end = self._inner(np.array([self.xi_max]))
        sigma = self.R / self.p - 1.0
        ratio = np.exp(-self.p * (xi - self.xi_max)) * (xi / self.xi_max) ** sigma
        return X_end[0] * ratio, X_end[0] * ratio * (-self.p + sigma / xi)

    def _inner(self, xi):
        y = self.inward(xi)
        return self.inward_scale * y[0], self.inward_scale * y[1]

    def evaluate(self, xi):
        """Return (X, dX/dxi) at ``xi`` (array-like, xi >= 1)."""
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        X = np.empty_like(xi)
        dX = np.empty_like(xi)
        s = xi <= 1.0 + self.t0
        o = ~s & (xi <= self.xi_match)
        i = (xi > self.xi_match) & (xi <= self.xi_max)
        tail = xi > self.xi_max
        if s.any():
            X[s], dX[s] = _series_eval(self.series, xi[s] - 1.0)
        if o.any():
            y = self.outward(xi[o])
            X[o], dX[o] = y[0], y[1]
        if i.any():
            X[i], dX[i] = self._inner(xi[i])
        if tail.any():
            X[tail], dX[tail] = self._tail(xi[tail])
        return X, dX

    def __call__(self, xi):
        return self.evaluate(xi)[0]


@dataclass(frozen=True)
class ShootResult:
    mismatch: float
    nodes: int
    log_deriv_out: float
    log_deriv_in: float
    radial: RadialFunction | None


def _shoot(E_elec, A, R, xi_match, xi_max, rtol=1e-12, dense=True) -> ShootResult:
    p = _p_of(E_elec, R)
    f = _rhs(E_elec, A, R)
    t0 = min(0.2, 0.5 / max(p, 1.0), 0.5 * (xi_match - 1.0))
    a = frobenius_coeffs(E_elec, A, R)
    X0, dX0 = _series_eval(a, t0)
    atol = 1e-30
    out = solve_ivp(f, (1.0 + t0, xi_match), [float(X0), float(dX0)], method="DOP853",
                    rtol=rtol, atol=atol, dense_output=dense)
    if not out.success:
        raise RadialIntegrationError(f"outward integration failed: {out.message}",
                                     E_elec=E_elec, A=A, R=R)
    Xm, dXm = out.y[0, -1], out.y[1, -1]
    if not (np.isfinite(Xm) and np.isfinite(dXm)):
        raise RadialIntegrationError("outward solution overflowed; xi_match too far out",
                                     E_elec=E_elec, xi_match=xi_match)
    sigma = R / p - 1.0
    inn = solve_ivp(f, (xi_max, xi_match), [1.0, -p + sigma / xi_max], method="DOP853",
                    rtol=rtol, atol=atol, dense_output=dense)
    if not inn.success:
        raise RadialIntegrationError(f"inward integration failed: {inn.message}",
                                     E_elec=E_elec, A=A, R=R)
    Xi, dXi = inn.y[0, -1], inn.y[1, -1]
    nodes = _count_nodes(np.r_[X0, out.y[0]]) + _count_nodes(inn.y[0])
    ld_out = dXm / Xm
    ld_in = dXi / Xi
    radial = None
    if dense:
        radial = RadialFunction(R=R, p=p, series=a, t0=t0, xi_match=xi_match, xi_max=xi_max,
                                outward=out.sol, inward=inn.sol, inward_scale=Xm / Xi)
    return ShootResult(ld_out - ld_in, nodes, ld_out, ld_in, radial)


def radial_mismatch(E_elec: float, A: float, R: float, xi_match: float, xi_max: float,
                    rtol: float = 1e-12) -> float:
    """Outward minus inward logarithmic derivative of X at ``xi_match``.

    Positive below the eigenvalue, negative just above it.
    """
    if not 1.0 < xi_match < xi_max:
        raise ValueError("need 1 < xi_match < xi_max")
    if _p_of(E_elec, R) * xi_max < 25.0:
        raise ValueError("xi_max too small: asymptotic tail not decayed (p*xi_max < 25)")
    return _shoot(E_elec, A, R, xi_match, xi_max, rtol).mismatch


# -- the eigen-record ----------------------------------------------------------

@dataclass(frozen=True)
class SigmaGSolution:
    R: float
    E_elec: float
    E_tot: float
    A: float
    p: float
    angular: AngularSolution
    radial: RadialFunction
    norm_const: float = float("nan")
    residuals: dict = field(default_factory=dict)
    truncation: dict = field(default_factory=dict)

    @property
    def angular_coeffs(self) -> np.ndarray:
        return self.angular.coeffs

    @property
    def radial_grid(self) -> tuple[np.ndarray, np.ndarray]:
        """Sampled (xi, X(xi)) from xi = 1 to xi_max."""
        r = self.radial
        xi = np.r_[np.linspace(1.0, r.xi_match, 201), np.linspace(r.xi_match, r.xi_max, 401)[1:]]
        return xi, r(xi)

    def X(self, xi):
        return self.radial(xi)

    def Y(self, eta, deriv: int = 0):
        return self.angular(eta, deriv)

    def psi(self, xi, eta):
        """Normalised wavefunction norm_const * X(xi) * Y(eta)."""
        return self.norm_const * self.radial(xi) * self.angular(eta)


def _gauss_panels(edges, n):
    x, w = np.polynomial.legendre.leggauss(n)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (b - a) * x + 0.5 * (b + a))
        weights.append(0.5 * (b - a) * w)
    return np.concatenate(nodes), np.concatenate(weights)


def radial_moments(radial: RadialFunction, n_xi: int = 48) -> tuple[float, float]:
    """(int X^2 dxi, int X^2 xi^2 dxi) over [1, inf).

    Panelled Gauss-Legendre: panels of width ~1/p beyond the match point
    follow the exponential decay; the remainder past xi_max is integrated
    from the asymptotic form in closed form (it is below e^-50 anyway).
    """
    r = radial
    width = min(1.0 / r.p, 1.0)
    inner = np.linspace(1.0, r.xi_match, max(2, int(np.ceil((r.xi_match - 1.0) / width))) + 1)
    outer = np.linspace(r.xi_match, r.xi_max, max(2, int(np.ceil((r.xi_max - r.xi_match) / width))) + 1)
    edges = np.r_[1.0, 1.0 + r.t0, inner[inner > 1.0 + r.t0], outer[1:]]
    xi, w = _gauss_panels(edges, n_xi)
    X2 = r(xi) ** 2
    X_end = r(np.array([r.xi_max]))[0]
    tail0 = X_end**2 / (2 * r.p)
    tail2 = tail0 * r.xi_max**2
    return float(w @ X2) + tail0, float(w @ (X2 * xi * xi)) + tail2


def angular_moments(angular: AngularSolution, n_eta: int = 64) -> tuple[float, float]:
    """(int Y^2 deta, int eta^2 Y^2 deta) over [-1, 1] by Gauss-Legendre."""
    x, w = np.polynomial.legendre.leggauss(n_eta)
    Y2 = angular(x) ** 2
    return float(w @ Y2), float(w @ (Y2 * x * x))


def normalize(sol: SigmaGSolution, n_eta: int = 64, n_xi: int = 48) -> float:
    """Constant N with 2 pi int int |N X Y|^2 (R^3/8)(xi^2 - eta^2) dxi deta = 1."""
    X0, X2 = radial_moments(sol.radial, n_xi)
    Y0, Y2 = angular_moments(sol.angular, n_eta)
    integral = 2 * np.pi * sol.R**3 / 8.0 * (X2 * Y0 - X0 * Y2)
    if not (np.isfinite(integral) and integral > 0):
        raise SolverError("normalisation integral is not positive", integral=integral)
    return float(1.0 / np.sqrt(integral))


# -- outer eigenvalue search --------------------------------------------------

BISECT_RTOL = 1e-9


def _classify(E, R, rtol, xi_match=None, xi_max=None, dense=True):
    """Return (is_above_eigenvalue, ShootResult, AngularSolution) at trial E."""
    p = _p_of(E, R)
    ang = angular_eigenvalue(p * p)
    xm = default_match_point(p) if xi_match is None else xi_match
    xM = default_outer_point(p, xm) if xi_max is None else xi_max
    sr = _shoot(E, ang.A, R, xm, xM, rtol, dense)
    return (sr.nodes > 0 or sr.mismatch < 0.0), sr, ang


def solve_ground(R: float, tol: float = 1e-12, *, rtol: float = 1e-12,
                 n_eta: int = 64, n_xi: int = 48) -> SigmaGSolution:
    """Sigma-g ground state at internuclear separation ``R`` (Bohr).

    Bisection on E_elec over (-2, -0.5) using node count and mismatch sign,
    then Brent's method on the continuous mismatch once the bracket is below
    1e-6 Hartree wide.
    """
    Geometry(R)
    if tol < 1e-12:
        raise ValueError("tol must be >= 1e-12")

    lo, hi = E_LOWER, E_UPPER
    coarse = max(rtol, BISECT_RTOL)
    above_lo, _, _ = _classify(lo, R, coarse, dense=False)
    above_hi, _, _ = _classify(hi, R, coarse, dense=False)
    if above_lo or not above_hi:
        raise BracketError("no sign change over the initial energy bracket",
                           R=R, bracket=(lo, hi), above_lo=above_lo, above_hi=above_hi)
    n_bisect = 0
    while hi - lo > BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        above, _, _ = _classify(mid, R, coarse, dense=False)
        if above:
            hi = mid
        else:
            lo = mid
        n_bisect += 1

    # freeze the matching geometry so the mismatch is a smooth function of E
    p_ref = _p_of(lo, R)
    xi_match = default_match_point(p_ref)
    xi_max = default_outer_point(p_ref, xi_match)

    def m(E):
        _, sr, _ = _classify(E, R, rtol, xi_match, xi_max, dense=False)
        if sr.nodes:
            return -np.inf
        return sr.mismatch

    m_lo, m_hi = m(lo), m(hi)
    while not (m_lo > 0 > m_hi and np.isfinite(m_hi)):
        # a node slipped into the upper end; keep halving from above
        if hi - lo < tol:
            raise BracketError("could not obtain a continuous mismatch bracket",
                               R=R, bracket=(lo, hi), m_lo=m_lo, m_hi=m_hi)
        mid = 0.5 * (lo + hi)
        mm = m(mid)
        if mm > 0:
            lo, m_lo = mid, mm
        else:
            hi, m_hi = mid, mm
    E, rr = brentq(m, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, full_output=True,
                   disp=False)
    if not rr.converged:
        raise SolverError("secant refinement did not converge", R=R, bracket=(lo, hi))

    _, sr, ang = _classify(E, R, rtol, xi_match, xi_max)
    p = _p_of(E, R)
    if not (E_LOWER < E < -0.5):
        raise SolverError("energy outside (-2, -0.5)", R=R, E_elec=E)
    sol = SigmaGSolution(
        R=R, E_elec=E, E_tot=E + 1.0 / R, A=ang.A, p=p, angular=ang, radial=sr.radial,
        residuals={"angular": ang.residual, "radial_match": abs(sr.mismatch)},
        truncation={"l_max": ang.l_max, "xi_match": xi_match, "xi_max": xi_max,
                    "rtol": rtol, "tol": tol, "bisections": n_bisect,
                    "secant_iterations": rr.iterations},
    )
    return replace(sol, norm_const=normalize(sol, n_eta, n_xi))


# -- scans ---------------------------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    R: float
    E_elec: float
    E_tot: float
    A: float
    p: float
    topology_class: str | None = None
    diagnostics: dict = field(default_factory=dict)


@dataclass
class ScanResult:
    rows: list[ScanRow]
    failures: list[tuple[float, str]] = field(default_factory=list)

    @property
    def R(self) -> np.ndarray:
        return np.array([r.R for r in self.rows])

    @property
    def E_elec(self) -> np.ndarray:
        return np.array([r.E_elec for r in self.rows])

    @property
    def E_tot(self) -> np.ndarray:
        return np.array([r.E_tot for r in self.rows])

    @property
    def monotone(self) -> bool:
        """E_elec strictly increasing with R over the successful rows."""
        return bool(np.all(np.diff(self.E_elec) > 0))


def row_from_solution(sol: SigmaGSolution, topology_class: str | None = None) -> ScanRow:
    diag = dict(sol.residuals)
    diag.update(l_max=sol.truncation["l_max"])
    return ScanRow(sol.R, sol.E_elec, sol.E_tot, sol.A, sol.p, topology_class, diag)


def energy_curve(R_list, tol: float = 1e-12) -> ScanResult:
    """Solve on each R of a strictly increasing list; failures are kept, not raised."""
    R_arr = np.asarray(R_list, dtype=float)
    if R_arr.size == 0 or np.any(R_arr <= 0) or np.any(np.diff(R_arr) <= 0):
        raise DomainError("R_list must be positive and strictly increasing")
    result = ScanResult(rows=[])
    for R in R_arr:
        try:
            result.rows.append(row_from_solution(solve_ground(float(R), tol)))
        except (SolverError, TruncationError) as exc:
            log.warning("solve_ground failed at R=%g: %s", R, exc)
            result.failures.append((float(R), str(exc)))
    if not result.monotone:
        log.warning("E_elec is not strictly increasing over the scan")
    return result
