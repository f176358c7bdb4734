"""Finite s-type Gaussian basis variational solver for the one-electron diatomic.

Primitives are normalised s Gaussians (2a/pi)^{3/4} exp(-a |r - C|^2) with
centres on the z-axis.  Each carries a group tag: A and B sit on the nuclei,
U functions sit at the bond midpoint and stand in for the united-atom (He+)
component of the three-centre expansion.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import erf

from .coords import Geometry

T_SWITCH = 1e-3
GROUPS = ("A", "B", "U")


# -- Boys function ---------------------------------------------------------------

def boys_f0(t):
    """F0(t) = int_0^1 exp(-t u^2) du for t >= 0 (scalar or array).

    Maclaurin series below ``T_SWITCH``, closed form with erf above.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(np.isnan(t_arr)):
        raise ValueError("boys_f0 requires t >= 0")
    out = np.empty_like(t_arr)
    small = t_arr <= T_SWITCH
    ts = t_arr[small]
    # sum_k (-t)^k / (k! (2k+1)); six terms leave < 1e-22 at T_SWITCH
    out[small] = 1 - ts / 3 + ts**2 / 10 - ts**3 / 42 + ts**4 / 216 - ts**5 / 1320
    tl = t_arr[~small]
    rt = np.sqrt(tl)
    out[~small] = 0.5 * np.sqrt(np.pi) * erf(rt) / rt
    return float(out) if np.ndim(t) == 0 else out


# -- basis definition -----------------------------------------------------------

@dataclass(frozen=True)
class Primitive:
    center_z: float
    exponent: float
    group: str = "A"

    def __post_init__(self):
        if not self.exponent > 0:
            raise ValueError(f"exponent must be > 0, got {self.exponent}")
        if self.group not in GROUPS:
            raise ValueError(f"group must be one of {GROUPS}, got {self.group!r}")
        if self.group == "U" and self.center_z != 0.0:
            raise ValueError("mid-bond (U) primitives must sit at z = 0")


def even_tempered(alpha0: float, beta: float, n: int) -> list[float]:
    """Ascending exponents alpha0 * beta**k, k = 0..n-1."""
    if not alpha0 > 0 or not beta > 1 or n < 1:
        raise ValueError("need alpha0 > 0, beta > 1, n >= 1")
    return [alpha0 * beta**k for k in range(n)]


@dataclass(frozen=True)
class BasisSpec:
    primitives: tuple[Primitive, ...]

    def __post_init__(self):
        object.__setattr__(self, "primitives", tuple(self.primitives))
        if not self.primitives:
            raise ValueError("a basis needs at least one primitive")

    def __len__(self):
        return len(self.primitives)

    @property
    def centers(self) -> np.ndarray:
        return np.array([q.center_z for q in self.primitives])

    @property
    def exponents(self) -> np.ndarray:
        return np.array([q.exponent for q in self.primitives])

    @property
    def groups(self) -> np.ndarray:
        return np.array([q.group for q in self.primitives])

    def without(self, group: str) -> "BasisSpec":
        return BasisSpec(tuple(q for q in self.primitives if q.group != group))

    def __add__(self, other: "BasisSpec") -> "BasisSpec":
        return BasisSpec(self.primitives + other.primitives)

    def relocated(self, R: float) -> "BasisSpec":
        """Same basis with A/B primitives moved onto nuclei at -R/2, +R/2."""
        where = {"A": -0.5 * R, "B": 0.5 * R, "U": 0.0}
        return BasisSpec(tuple(Primitive(where[q.group], q.exponent, q.group)
                               for q in self.primitives))

    def mirrored(self) -> "BasisSpec":
        swap = {"A": "B", "B": "A", "U": "U"}
        return BasisSpec(tuple(Primitive(-q.center_z + 0.0, q.exponent, swap[q.group])
                               for q in self.primitives))

    @classmethod
    def even_tempered(cls, center_z, group, alpha0, beta, n) -> "BasisSpec":
        return cls(tuple(Primitive(center_z, a, group) for a in even_tempered(alpha0, beta, n)))


def two_center_basis(R: float, alpha0: float, beta: float, n: int) -> BasisSpec:
    return (BasisSpec.even_tempered(-0.5 * R, "A", alpha0, beta, n)
            + BasisSpec.even_tempered(0.5 * R, "B", alpha0, beta, n))


def reference_basis(R: float, n: int = 12, with_midbond: bool = True) -> BasisSpec:
    """Desk-scale three-centre basis: 12 s per nucleus (0.02 x 2.6^k) + 6 s mid-bond (0.05 x 3^k)."""
    basis = two_center_basis(R, 0.02, 2.6, n)
    if with_midbond:
        basis = basis + BasisSpec.even_tempered(0.0, "U", 0.05, 3.0, 6)
    return basis


# -- basis files ----------------------------------------------------------------

class BasisFormatError(ValueError):
    pass


_PRIM = re.compile(r"^center\s+(\S+)\s+group\s+(\S+)\s+exp\s+(\S+)$")
_EVEN = re.compile(r"^eventempered\s+center\s+(\S+)\s+group\s+(\S+)\s+alpha0\s+(\S+)"
                   r"\s+beta\s+(\S+)\s+n\s+(\S+)$")


def parse_basis(text: str) -> BasisSpec:
    """Parse the line-oriented basis format (``#`` starts a comment)."""
    prims: list[Primitive] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if m := _PRIM.match(line):
                prims.append(Primitive(float(m[1]), float(m[3]), m[2]))
            elif m := _EVEN.match(line):
                n = int(m[5])
                prims.extend(BasisSpec.even_tempered(float(m[1]), m[2], float(m[3]),
                                                     float(m[4]), n).primitives)
            else:
                raise BasisFormatError("unrecognised directive")
        except ValueError as exc:
            raise BasisFormatError(f"line {lineno}: {exc}: {raw.strip()!r}") from exc
    if not prims:
        raise BasisFormatError("basis file defines no primitives")
    return BasisSpec(tuple(prims))


REFERENCE_BASIS_FILE = Path(__file__).with_name("data") / "reference.basis"


def load_basis(path) -> BasisSpec:
    return parse_basis(Path(path).read_text(encoding="utf-8"))


def format_basis(basis: BasisSpec) -> str:
    return "".join(f"center {q.center_z!r} group {q.group} exp {q.exponent!r}\n"
                   for q in basis.primitives)


# -- one-electron integrals over normalised s primitives ------------------------

def _pair(alpha, za, beta, zb):
    gamma = alpha + beta
    mu = alpha * beta / gamma
    d2 = (za - zb) ** 2
    S = np.exp(-mu * d2) * (2.0 * np.sqrt(alpha * beta) / gamma) ** 1.5
    return gamma, mu, d2, S


def overlap(a: Primitive, b: Primitive) -> float:
    return float(_pair(a.exponent, a.center_z, b.exponent, b.center_z)[3])


def kinetic(a: Primitive, b: Primitive) -> float:
    _, mu, d2, S = _pair(a.exponent, a.center_z, b.exponent, b.center_z)
    return float(mu * (3.0 - 2.0 * mu * d2) * S)


def nuclear_attraction(a: Primitive, b: Primitive, g: Geometry) -> float:
    """-sum_C <a| Z_C / |r - C| |b> over both nuclei."""
    gamma, _, _, S = _pair(a.exponent, a.center_z, b.exponent, b.center_z)
    P = (a.exponent * a.center_z + b.exponent * b.center_z) / gamma
    pref = 2.0 * np.sqrt(gamma / np.pi) * S
    return float(-sum(Z * pref * boys_f0(gamma * (P - zc) ** 2)
                      for Z, zc in ((g.ZA, g.zA), (g.ZB, g.zB))))


def build_matrices(basis: BasisSpec, g: Geometry) -> tuple[np.ndarray, np.ndarray]:
    """Overlap S and core Hamiltonian H = T + V (vectorised over all pairs)."""
    z = basis.centers
    a = basis.exponents
    za, zb = z[:, None], z[None, :]
    al, be = a[:, None], a[None, :]
    gamma, mu, d2, S = _pair(al, za, be, zb)
    T = mu * (3.0 - 2.0 * mu * d2) * S
    P = (al * za + be * zb) / gamma
    pref = 2.0 * np.sqrt(gamma / np.pi) * S
    V = -(g.ZA * pref * boys_f0(gamma * (P - g.zA) ** 2)
          + g.ZB * pref * boys_f0(gamma * (P - g.zB) ** 2))
    H = T + V
    # exact symmetry; the pair formulas are symmetric up to rounding in P
    return 0.5 * (S + S.T), 0.5 * (H + H.T)


# -- generalized eigenproblem ----------------------------------------------------

class EmptyBasisError(ValueError):
    pass


@dataclass
class VariationalSolution:
    E_var: float
    coefficients: np.ndarray
    overlap_eigenvalues: np.ndarray
    retained: int
    tau: float
    basis: BasisSpec | None = None
    R: float | None = None
    S: np.ndarray | None = field(default=None, repr=False)

    @property
    def dropped(self) -> int:
        return self.overlap_eigenvalues.size - self.retained

    @property
    def condition(self) -> float:
        """Ratio of largest to smallest retained overlap eigenvalue."""
        kept = self.overlap_eigenvalues[self.overlap_eigenvalues >= self.tau]
        return float(kept.max() / kept.min())

    @property
    def E_tot(self) -> float:
        return self.E_var + 1.0 / self.R

    def group_coefficients(self, group: str) -> np.ndarray:
        return self.coefficients[self.basis.groups == group]

    def group_norms(self) -> dict[str, float]:
        """Norm of each group's partial wavefunction (c_A, c_B, c_U summaries)."""
        out = {}
        for grp in GROUPS:
            m = self.basis.groups == grp
            c = self.coefficients[m]
            out[grp] = float(np.sqrt(max(c @ self.S[np.ix_(m, m)] @ c, 0.0))) if m.any() else 0.0
        return out

    def psi(self, x, y, z):
        """Wavefunction at Cartesian points (arrays broadcast together)."""
        x, y, z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, z)))
        s2 = (x * x + y * y)[..., None]
        dz = z[..., None] - self.basis.centers
        a = self.basis.exponents
        norm = (2.0 * a / np.pi) ** 0.75
        return np.exp(-a * (s2 + dz * dz)) @ (self.coefficients * norm)


def solve_generalized(S: np.ndarray, H: np.ndarray, tau: float = 1e-10) -> VariationalSolution:
    """Lowest root of H c = E S c by canonical orthogonalisation.

    Overlap eigenvectors with eigenvalue below ``tau`` are discarded before
    the projected standard eigenproblem is solved.
    """
    s, U = np.linalg.eigh(S)
    keep = s >= tau
    if not keep.any():
        raise EmptyBasisError(f"all overlap eigenvalues are below tau={tau}")
    X = U[:, keep] / np.sqrt(s[keep])
    e, C = np.linalg.eigh(X.T @ H @ X)
    c = X @ C[:, 0]
    # sign convention: largest-magnitude coefficient positive
    if c[np.argmax(np.abs(c))] < 0:
        c = -c
    return VariationalSolution(E_var=float(e[0]), coefficients=c, overlap_eigenvalues=s,
                               retained=int(keep.sum()), tau=tau, S=S)


def variational_ground(basis: BasisSpec, g: Geometry, tau: float = 1e-10) -> VariationalSolution:
    S, H = build_matrices(basis, g)
    sol = solve_generalized(S, H, tau)
    sol.basis = basis
    sol.R = g.R
    return sol
