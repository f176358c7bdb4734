"""Angular (eta) equation of the separated two-center problem.

The even solution Y(eta) is expanded in normalised Legendre functions
``sqrt((2l+1)/2) P_l`` with even l.  In that basis the angular operator

    d/deta (1 - eta^2) d/deta + p^2 eta^2

is symmetric tridiagonal, and the separation constant A is its algebraically
largest eigenvalue (A = 0 at p = 0, A ~ p^2/3 for small p).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre as npleg
from scipy.linalg import eigh_tridiagonal, solve_banded

# Relative change in A accepted between l_max and l_max + 8.
STABILITY_TOL = 1e-13
L_MAX_CAP = 1200


class TruncationError(RuntimeError):
    """An expansion did not settle as its truncation was grown."""


@dataclass(frozen=True)
class AngularSolution:
    A: float
    coeffs: np.ndarray  # c_l for l = 0, 2, ..., l_max in the normalised basis
    l_max: int
    residual: float

    @property
    def degrees(self) -> np.ndarray:
        return np.arange(0, self.l_max + 1, 2)

    def legendre_series(self) -> np.ndarray:
        """Coefficients in the plain P_l basis (all l, odd ones zero)."""
        out = np.zeros(self.l_max + 1)
        ls = self.degrees
        out[ls] = self.coeffs * np.sqrt((2 * ls + 1) / 2.0)
        return out

    def __call__(self, eta, deriv: int = 0):
        """Y(eta) or its ``deriv``-th derivative."""
        series = self.legendre_series()
        if deriv:
            series = npleg.legder(series, deriv)
        return npleg.legval(np.asarray(eta, dtype=float), series)


def eta2_matrix_elements(l_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and l <-> l+2 couplings of eta^2 in the normalised even basis.

    Both follow from applying eta P_l = ((l+1) P_{l+1} + l P_{l-1})/(2l+1)
    twice.
    """
    ls = np.arange(0, l_max + 1, 2, dtype=float)
    diag = (2 * ls**2 + 2 * ls - 1) / ((2 * ls - 1) * (2 * ls + 3))
    lo = ls[:-1]
    off = (lo + 1) * (lo + 2) / ((2 * lo + 3) * np.sqrt((2 * lo + 1) * (2 * lo + 5)))
    return diag, off


def angular_matrix(p_sq: float, l_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Tridiagonal (diag, offdiag) of -diag(l(l+1)) + p_sq * T."""
    ls = np.arange(0, l_max + 1, 2, dtype=float)
    diag, off = eta2_matrix_elements(l_max)
    return -ls * (ls + 1) + p_sq * diag, p_sq * off


def _largest_pair(p_sq: float, l_max: int) -> tuple[float, np.ndarray, float]:
    d, e = angular_matrix(p_sq, l_max)
    n = d.size
    top = (n - 1, n - 1)
    # Sturm bisection resolves A to relative (not ||T||-absolute) accuracy,
    # which matters once A ~ p^2/3 is tiny next to diagonals ~ -l(l+1).
    A = float(eigh_tridiagonal(d, e, eigvals_only=True, select="i", select_range=top,
                               lapack_driver="stebz", tol=np.finfo(float).tiny)[0])
    _, v = eigh_tridiagonal(d, e, select="i", select_range=top)
    c = v[:, 0]
    shift = A + 4 * np.finfo(float).eps * max(abs(A), 1e-100)
    band = np.zeros((3, n))
    band[0, 1:], band[1], band[2, :-1] = e, d - shift, e
    for _ in range(2):
        c = solve_banded((1, 1), band, c)
        c = c / np.linalg.norm(c)
    if c[0] < 0:
        c = -c
    Mc = d * c
    Mc[:-1] += e * c[1:]
    Mc[1:] += e * c[:-1]
    residual = float(np.linalg.norm(Mc - A * c)) / max(1.0, abs(A))
    return A, c, residual


def default_l_max(p_sq: float) -> int:
    # Y is concentrated within ~1/p of eta = +-1 for large p.
    p = np.sqrt(max(p_sq, 0.0))
    l = 16 + 4 * int(np.ceil(p))
    return l + (l % 2)


def angular_eigenvalue(p_sq: float, l_max: int | None = None, *, grow: bool = True) -> AngularSolution:
    """Separation constant A and expansion coefficients for the even ground state.

    The truncation is accepted once A moves by less than ``STABILITY_TOL``
    (relative to max(1, |A|)) when l_max grows by 8.  With ``grow=False`` a
    failed check raises instead of enlarging l_max.
    """
    if p_sq < 0:
        raise ValueError(f"p_sq must be >= 0, got {p_sq}")
    if l_max is None:
        l_max = default_l_max(p_sq)
    if l_max < 8 or l_max % 2:
        raise ValueError(f"l_max must be an even integer >= 8, got {l_max}")

    A, c, res = _largest_pair(p_sq, l_max)
    while True:
        A2, c2, res2 = _largest_pair(p_sq, l_max + 8)
        if abs(A2 - A) <= STABILITY_TOL * max(1.0, abs(A)):
            return AngularSolution(A=A, coeffs=c, l_max=l_max, residual=res)
        if not grow or l_max + 8 > L_MAX_CAP:
            raise TruncationError(
                f"angular eigenvalue not stable at l_max={l_max}: "
                f"A={A!r} vs {A2!r} at l_max+8 (p_sq={p_sq})"
            )
        l_max, A, c, res = l_max + 8, A2, c2, res2
