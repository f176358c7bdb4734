"""Electron densities from either solver and their topology along the bond axis."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .coords import Geometry, cartesian_to_spheroidal
from .gaussian import BasisSpec, VariationalSolution, variational_ground
from .separated import SigmaGSolution, solve_ground

log = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-10


class Topology(str, Enum):
    ONE_MAX = "ONE_MAX"
    FLAT = "FLAT"
    TWO_MAX = "TWO_MAX"
    THREE_MAX = "THREE_MAX"

    def __str__(self):
        return self.value


class AsymmetricProfileError(ValueError):
    pass


class IllConditionedFit(ValueError):
    pass


def source_tag(source) -> str:
    if isinstance(source, SigmaGSolution):
        return "exact"
    if isinstance(source, VariationalSolution):
        return "variational"
    raise TypeError(f"not a density source: {type(source).__name__}")


def eval_density(source, g: Geometry, points, return_flags: bool = False):
    """rho = |Psi|^2 at Cartesian ``points`` of shape (..., 3).

    For the exact source, points past the tabulated radial range use the
    asymptotic tail; ``return_flags=True`` also returns that mask.
    """
    if abs(source.R - g.R) > 1e-12 * g.R:
        raise ValueError(f"source was solved at R={source.R}, geometry has R={g.R}")
    pts = np.asarray(points, dtype=float)
    x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
    if isinstance(source, SigmaGSolution):
        xi, eta = cartesian_to_spheroidal(x, y, z, g)
        flags = xi > source.radial.xi_max
        if flags.any():
            log.debug("%d points beyond xi_max use the asymptotic tail", int(flags.sum()))
        psi = source.norm_const * source.radial(xi.ravel()).reshape(xi.shape) * source.angular(eta)
    elif isinstance(source, VariationalSolution):
        flags = np.zeros(x.shape, dtype=bool)
        psi = source.psi(x, y, z)
    else:
        raise TypeError(f"not a density source: {type(source).__name__}")
    rho = psi * psi
    return (rho, flags) if return_flags else rho


def axial_density(source, z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    pts = np.stack([np.zeros_like(z), np.zeros_like(z), z], axis=-1)
    return eval_density(source, Geometry(source.R), pts)


# -- profiles -----------------------------------------------------------------------

@dataclass(frozen=True)
class DensityProfile:
    source: str
    R: float
    z: np.ndarray
    rho: np.ndarray

    @property
    def peak(self) -> float:
        return float(self.rho.max())

    def asymmetry(self) -> float:
        """max |rho(z) - rho(-z)| relative to the peak."""
        return float(np.max(np.abs(self.rho - self.rho[::-1])) / self.peak)


def axial_grid(R: float, half_width: float, n: int) -> np.ndarray:
    """Symmetric z-grid holding 0 and +-R/2 exactly.

    A uniform grid over the whole width is merged with an equally dense one
    over |z| <= R, so the bond region stays resolved even when R is much
    smaller than the width.
    """
    if n < 201 or n % 2 == 0:
        raise ValueError("n must be odd and >= 201")
    if half_width < 0.5 * R + 2.0:
        raise ValueError("half_width must be >= R/2 + 2")
    m = (n - 1) // 2
    pos = np.unique(np.r_[np.linspace(0.0, half_width, m + 1)[1:],
                          np.linspace(0.0, R, m + 1)[1:], 0.5 * R])
    # collapse points that differ only by rounding
    pos = pos[np.r_[True, np.diff(pos) > 1e-12 * half_width]]
    return np.r_[-pos[::-1], 0.0, pos]


def axial_profile(source, g: Geometry, half_width: float | None = None, n: int = 401) -> DensityProfile:
    if half_width is None:
        half_width = 0.5 * g.R + 2.0
    z = axial_grid(g.R, half_width, n)
    pts = np.stack([np.zeros_like(z), np.zeros_like(z), z], axis=-1)
    return DensityProfile(source_tag(source), g.R, z, eval_density(source, g, pts))


# -- topology -----------------------------------------------------------------------

@dataclass(frozen=True)
class Extremum:
    z: float
    rho: float
    kind: str  # "max" or "min"


@dataclass(frozen=True)
class MidpointFit:
    """Y(eta) ~ c1 exp(-sqrt(A)|eta|) + c2 exp(sqrt(A)|eta|) near eta = 0."""

    A: float
    c1: float
    c2: float
    slope: float
    residual: float
    window: float

    def __call__(self, eta):
        k = np.sqrt(self.A)
        e = np.abs(np.asarray(eta, dtype=float))
        return self.c1 * np.exp(-k * e) + self.c2 * np.exp(k * e)

    def derivative(self, eta):
        """d/deta of the model for eta > 0."""
        k = np.sqrt(self.A)
        e = np.asarray(eta, dtype=float)
        return k * (-self.c1 * np.exp(-k * e) + self.c2 * np.exp(k * e))

    @property
    def balance(self) -> float:
        """|c1 - c2| / (c1 + c2)."""
        return abs(self.c1 - self.c2) / abs(self.c1 + self.c2)


@dataclass(frozen=True)
class TopologyReport:
    cls: Topology
    extrema: tuple[Extremum, ...]
    kappa0: float
    source: str
    R: float
    flat_threshold: float
    fit: MidpointFit | None = None

    @property
    def maxima(self) -> list[Extremum]:
        return [e for e in self.extrema if e.kind == "max"]


def find_extrema(z, rho, tol) -> list[Extremum]:
    """Strict interior extrema; steps smaller than ``tol`` count as level.

    A level run is reported once, at its middle sample.  Endpoints never
    qualify.
    """
    d = np.diff(rho)
    s = np.sign(d)
    s[np.abs(d) <= tol] = 0
    idx = np.flatnonzero(s)
    out = []
    for e0, e1 in zip(idx[:-1], idx[1:]):
        if s[e0] == s[e1]:
            continue
        mid = (e0 + 1 + e1) // 2
        out.append(Extremum(float(z[mid]), float(rho[mid]), "max" if s[e0] > 0 else "min"))
    return out


def one_sided_curvature(z, rho) -> float:
    """d^2 rho/dz^2 at z = 0 from the samples at 0 and the next two with z > 0."""
    i0 = int(np.flatnonzero(z == 0.0)[0])
    z0, z1, z2 = z[i0:i0 + 3]
    r0, r1, r2 = rho[i0:i0 + 3]
    return float(2.0 * ((r2 - r1) / (z2 - z1) - (r1 - r0) / (z1 - z0)) / (z2 - z0))


def class_from_extrema(extrema, kappa0: float, R: float, flat_threshold: float) -> Topology:
    """Topology class implied by an extrema list and the midpoint curvature."""
    zscale = 1e-9 * max(R, 1.0)
    maxima = [e for e in extrema if e.kind == "max"]
    center_max = any(abs(e.z) <= zscale for e in maxima)
    between = [e for e in extrema if zscale < abs(e.z) < 0.5 * R - zscale]
    if abs(kappa0) < flat_threshold and not between:
        return Topology.FLAT
    if center_max:
        return Topology.THREE_MAX if len(maxima) >= 3 else Topology.ONE_MAX
    return Topology.TWO_MAX


def classify_topology(profile: DensityProfile, eps_rel: float = 1e-8,
                      eps_flat: float = 1e-4) -> TopologyReport:
    """Classify the axial density; ``eps_flat`` is scaled by the peak density."""
    if profile.asymmetry() > SYMMETRY_TOL:
        raise AsymmetricProfileError(
            f"profile is not symmetric under z -> -z (deviation {profile.asymmetry():.2e})")
    peak = profile.peak
    extrema = find_extrema(profile.z, profile.rho, eps_rel * peak)
    kappa0 = one_sided_curvature(profile.z, profile.rho)
    threshold = eps_flat * peak
    cls = class_from_extrema(extrema, kappa0, profile.R, threshold)
    return TopologyReport(cls, tuple(extrema), kappa0, profile.source, profile.R, threshold)


# -- the two-exponential midpoint model ------------------------------------------

def fit_two_exponentials(eta, Y, A: float, window: float) -> MidpointFit:
    """Least-squares c1, c2 for samples Y(eta), eta in [0, window]."""
    if not A > 0:
        raise ValueError("the two-exponential model needs A > 0")
    k = np.sqrt(A)
    if k * window < 1e-6:
        raise IllConditionedFit(
            f"sqrt(A)*window = {k * window:.2e} < 1e-6: the two exponentials are "
            f"indistinguishable; use a window of at least {1e-5 / k:.3g}")
    eta = np.asarray(eta, dtype=float)
    Y = np.asarray(Y, dtype=float)
    basis = np.column_stack([np.exp(-k * eta), np.exp(k * eta)])
    (c1, c2), *_ = np.linalg.lstsq(basis, Y, rcond=None)
    resid = float(np.sqrt(np.mean((basis @ [c1, c2] - Y) ** 2)) / np.max(np.abs(Y)))
    return MidpointFit(A=A, c1=float(c1), c2=float(c2), slope=float(-k * (c1 - c2)),
                  residual=resid, window=window)


def midpoint_fit(sol: SigmaGSolution, window: float = 0.1, n_samples: int = 41) -> MidpointFit:
    """Fit Y(eta) on [0, window] to c1 e^{-sqrt(A) eta} + c2 e^{sqrt(A) eta} with the solver's A.

    c1 and c2 depend on the window; report it alongside.
    """
    if not 0 < window <= 0.2:
        raise ValueError("window must lie in (0, 0.2]")
    eta = np.linspace(0.0, window, n_samples)
    return fit_two_exponentials(eta, sol.Y(eta), sol.A, window)


# -- scanning R -------------------------------------------------------------------

def solve_source(source, R: float):
    """Density source at separation R.

    ``source`` is "exact", a BasisSpec (relocated onto the nuclei at each R),
    or a callable R -> BasisSpec.
    """
    if isinstance(source, str):
        if source != "exact":
            raise ValueError(f"unknown source {source!r}")
        return solve_ground(R)
    basis = source.relocated(R) if isinstance(source, BasisSpec) else source(R)
    return variational_ground(basis, Geometry(R))


def midpoint_curvature(sol, n: int = 401) -> float:
    """kappa0 on the same fine axial spacing that ``axial_profile`` uses."""
    h = sol.R / ((n - 1) // 2)
    z = np.array([0.0, h, 2 * h])
    return one_sided_curvature(z, axial_density(sol, z))


@dataclass
class CriticalScan:
    R: np.ndarray
    kappa0: np.ndarray
    classes: list[Topology]
    brackets: list[tuple[float, float]] = field(default_factory=list)
    three_max: list[float] = field(default_factory=list)
    source: str = ""


def critical_R_scan(source, R_lo: float, R_hi: float, n: int = 8, dR: float = 1e-4,
                    profile_points: int = 401) -> CriticalScan:
    """Sign changes of the midpoint curvature kappa0(R) on [R_lo, R_hi].

    Each sign change is refined by bisection until the bracket is narrower
    than ``dR``.  An empty bracket list is a valid outcome.
    """
    if not R_lo < R_hi:
        raise ValueError("need R_lo < R_hi")
    if n < 8:
        raise ValueError("need n >= 8")
    Rs = np.linspace(R_lo, R_hi, n)
    kappas, classes, tag = [], [], ""
    for R in Rs:
        sol = solve_source(source, float(R))
        tag = source_tag(sol)
        rep = classify_topology(axial_profile(sol, Geometry(float(R)), n=profile_points))
        kappas.append(rep.kappa0)
        classes.append(rep.cls)
    scan = CriticalScan(Rs, np.array(kappas), classes, source=tag)
    scan.three_max = [float(R) for R, c in zip(Rs, classes) if c is Topology.THREE_MAX]

    scan.brackets = transition_brackets(source, Rs, scan.kappa0, dR, profile_points)
    return scan


def transition_brackets(source, Rs, kappas, dR: float = 1e-4, profile_points: int = 401):
    """Bisect every sign change of kappa0 between consecutive R to width < dR."""
    out = []
    for i in range(len(Rs) - 1):
        klo, khi = kappas[i], kappas[i + 1]
        if np.sign(klo) == np.sign(khi):
            continue
        lo, hi = float(Rs[i]), float(Rs[i + 1])
        while hi - lo >= dR:
            mid = 0.5 * (lo + hi)
            km = midpoint_curvature(solve_source(source, mid), profile_points)
            if np.sign(km) == np.sign(klo):
                lo, klo = mid, km
            else:
                hi = mid
        out.append((lo, hi))
    return out
