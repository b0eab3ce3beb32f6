"""Dirac bound states on the zero-gravity Kerr-Newman double-sheeted spacetime.

Units are hbar = c = m = 1 throughout: energies in mc^2, lengths in the
reduced Compton wavelength.  The public entry points are re-exported here.
"""
__version__ = "0.1.0"

from .geometry import ALPHA_S, ModelParams, OblatePoint, frame_data, mhat
from .fields import appell_field, field_grid, generalized_potential, potential
from .operator import check_m_equals_l_chi, separated_dirac_residual
from .angular import AngularSolveRequest, angular_eigenvalue, branch_eigenvalues, matrix_eigenvalues
from .radial import RadialSolveRequest, asymptotic_omega, radial_rhs, shoot_radial
from .spectrum import (EigenPair, SpectrumReport, bohr_energy, check_sufficient_conditions, point_spectrum,
                       sommerfeld_comparison, sommerfeld_energy)
from .wavefunction import BoundState, abs2_profile, normalize, reconstruct, sheet_weights

__all__ = [
    "ALPHA_S", "ModelParams", "OblatePoint", "frame_data", "mhat",
    "appell_field", "field_grid", "generalized_potential", "potential",
    "check_m_equals_l_chi", "separated_dirac_residual",
    "AngularSolveRequest", "angular_eigenvalue", "branch_eigenvalues", "matrix_eigenvalues",
    "RadialSolveRequest", "asymptotic_omega", "radial_rhs", "shoot_radial",
    "EigenPair", "SpectrumReport", "bohr_energy", "check_sufficient_conditions", "point_spectrum",
    "sommerfeld_comparison", "sommerfeld_energy",
    "BoundState", "abs2_profile", "normalize", "reconstruct", "sheet_weights",
]
