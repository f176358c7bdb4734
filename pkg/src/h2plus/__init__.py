"""Exact, finite-difference and Gaussian-variational solutions of the H2+ ground state,
with axial electron-density topology analysis."""

__version__ = "0.1.0"

from .angular import AngularSolution, TruncationError, angular_eigenvalue
from .coords import (DomainError, Geometry, SpheroidalPoint, axial_to_spheroidal,
                     to_cartesian, volume_element)
from .density import (DensityProfile, Topology, TopologyReport, axial_profile,
                      classify_topology, critical_R_scan, eval_density, midpoint_fit)
from .fd_oracle import GridSpec, OracleResult, ground_energy
from .gaussian import (BasisSpec, Primitive, VariationalSolution, boys_f0, build_matrices,
                       even_tempered, load_basis, parse_basis, reference_basis,
                       solve_generalized, variational_ground)
from .separated import (ScanResult, SigmaGSolution, SolverError, energy_curve, normalize,
                        radial_mismatch, radial_start, solve_ground)

__all__ = [
    "AngularSolution", "BasisSpec", "DensityProfile", "DomainError", "Geometry", "GridSpec",
    "OracleResult", "Primitive", "ScanResult", "SigmaGSolution", "SolverError",
    "SpheroidalPoint", "Topology", "TopologyReport", "TruncationError", "VariationalSolution",
    "angular_eigenvalue", "axial_profile", "axial_to_spheroidal", "boys_f0", "build_matrices",
    "classify_topology", "critical_R_scan", "energy_curve", "eval_density", "even_tempered",
    "ground_energy", "load_basis", "midpoint_fit", "normalize", "parse_basis",
    "radial_mismatch", "radial_start", "reference_basis", "solve_generalized", "solve_ground",
    "to_cartesian", "variational_ground", "volume_element",
]
