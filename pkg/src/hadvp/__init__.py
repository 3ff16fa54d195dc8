"""Hadronic vacuum-polarization corrections to hydrogenlike energy levels.

All internal quantities are in natural units (hbar = c = 1) with energies in
GeV and lengths in GeV^-1.  Conversions happen only at the I/O boundary, see
:mod:`hadvp.core`.
"""

from hadvp.core import ALPHA, CONSTANTS, HBAR_C, M_E, M_MU, M_P, M_Z
from hadvp.nuclear import FermiNucleus, PointNucleus, SphereNucleus, builtin_radii, make_model
from hadvp.polarization import builtin_params, load_params
from hadvp.potentials import (
    PotentialMethod, PotentialSpec, full_potential_table, make_potential,
    uehling_convolved, uehling_full, uehling_leptonic, uehling_point_approx,
    uehling_sphere_closed,
)
from hadvp.shifts import (
    ShiftMethod, ShiftRequest, ShiftResult, muonic_vp_ratio, shift_1s_closed_form,
    shift_expansion, shift_nonrel, shift_perturbative,
)
from hadvp.solver import SolverConfig, eigenvalue_shift, expectation_value, solve_dirac_fns
from hadvp.wavefunctions import BoundStateLabel, dirac_coulomb

__version__ = "0.1.0"

__all__ = [
    "ALPHA", "CONSTANTS", "HBAR_C", "M_E", "M_MU", "M_P", "M_Z",
    "FermiNucleus", "PointNucleus", "SphereNucleus", "builtin_radii", "make_model",
    "builtin_params", "load_params",
    "PotentialMethod", "PotentialSpec", "full_potential_table", "make_potential",
    "uehling_convolved", "uehling_full", "uehling_leptonic", "uehling_point_approx",
    "uehling_sphere_closed",
    "ShiftMethod", "ShiftRequest", "ShiftResult", "muonic_vp_ratio", "shift_1s_closed_form",
    "shift_expansion", "shift_nonrel", "shift_perturbative",
    "SolverConfig", "eigenvalue_shift", "expectation_value", "solve_dirac_fns",
    "BoundStateLabel", "dirac_coulomb",
]
