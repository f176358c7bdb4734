"""Prolate spheroidal (elliptic) coordinates for two nuclei on the z-axis.

Nuclei sit at z = -R/2 (A) and z = +R/2 (B).  With r1, r2 the distances to
A and B::

    xi  = (r1 + r2) / R        in [1, inf)
    eta = (r1 - r2) / R        in [-1, 1]

All quantities are in atomic units (Bohr, Hartree).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """A coordinate or geometry lies outside its valid domain."""


@dataclass(frozen=True)
class Geometry:
    """Homonuclear one-electron diatomic with unit charges at +-R/2."""

    R: float

    def __post_init__(self):
        if not np.isfinite(self.R) or self.R <= 0.0:
            raise DomainError(f"internuclear separation must be > 0, got R={self.R!r}")

    @property
    def zA(self) -> float:
        return -0.5 * self.R

    @property
    def zB(self) -> float:
        return 0.5 * self.R

    @property
    def ZA(self) -> float:
        return 1.0

    @property
    def ZB(self) -> float:
        return 1.0

    @property
    def nuclear_repulsion(self) -> float:
        return 1.0 / self.R


@dataclass(frozen=True)
class SpheroidalPoint:
    xi: float
    eta: float
    phi: float = 0.0

    def __post_init__(self):
        if not self.xi >= 1.0:
            raise DomainError(f"xi must be >= 1, got {self.xi!r}")
        if not abs(self.eta) <= 1.0:
            raise DomainError(f"|eta| must be <= 1, got {self.eta!r}")


def to_cartesian(p: SpheroidalPoint, g: Geometry) -> tuple[float, float, float]:
    half = 0.5 * g.R
    rho = half * np.sqrt((p.xi * p.xi - 1.0) * (1.0 - p.eta * p.eta))
    return (float(rho * np.cos(p.phi)), float(rho * np.sin(p.phi)), float(half * p.xi * p.eta))


def axial_to_spheroidal(z: float, g: Geometry) -> SpheroidalPoint:
    """Spheroidal coordinates of the on-axis point (0, 0, z)."""
    half = 0.5 * g.R
    if abs(z) <= half:
        return SpheroidalPoint(xi=1.0, eta=z / half)
    return SpheroidalPoint(xi=abs(z) / half, eta=float(np.sign(z)))


def volume_element(p: SpheroidalPoint, g: Geometry) -> float:
    """Jacobian (R^3/8)(xi^2 - eta^2) of dV = J dxi deta dphi."""
    return g.R**3 / 8.0 * (p.xi * p.xi - p.eta * p.eta)


def nuclear_distances(x, y, z, g: Geometry):
    """Distances (r1, r2) from Cartesian points to nuclei A and B."""
    x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
    s2 = x * x + y * y
    r1 = np.sqrt(s2 + (z - g.zA) ** 2)
    r2 = np.sqrt(s2 + (z - g.zB) ** 2)
    return r1, r2


def cartesian_to_spheroidal(x, y, z, g: Geometry):
    """Vectorised (xi, eta) for arbitrary Cartesian points.

    Rounding can push xi slightly below 1 or |eta| slightly above 1; both are
    clipped back onto the domain.
    """
    r1, r2 = nuclear_distances(x, y, z, g)
    xi = np.maximum((r1 + r2) / g.R, 1.0)
    eta = np.clip((r1 - r2) / g.R, -1.0, 1.0)
    return xi, eta
