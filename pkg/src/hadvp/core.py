"""Physical constants and unit conversions.

Everything inside the package works in natural units: energies in GeV,
lengths in GeV^-1.  The helpers here convert at the boundary only.

The constant values are frozen (CODATA 2018 / PDG) so that results are
reproducible bit for bit.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

ALPHA = 7.2973525693e-3
M_E = 0.51099895000e-3     # GeV
M_MU = 0.1056583755        # GeV
M_Z = 91.1876              # GeV
M_P = 0.93827208816        # GeV, proton
HBAR_C = 0.1973269804      # GeV fm


@dataclass(frozen=True)
class Constants:
    alpha: float = ALPHA
    m_e: float = M_E
    m_mu: float = M_MU
    m_Z: float = M_Z
    m_p: float = M_P
    hbar_c: float = HBAR_C


CONSTANTS = Constants()


class LengthUnit(str, enum.Enum):
    GEV_INV = "gev-1"
    FM = "fm"
    #: reduced Compton wavelength of the electron, 1/m_e
    COMPTON = "compton"


class EnergyUnit(str, enum.Enum):
    GEV = "GeV"
    EV = "eV"
    MEV = "meV"


# size of one unit expressed in GeV^-1
_LENGTH_IN_GEV_INV = {
    LengthUnit.GEV_INV: 1.0,
    LengthUnit.FM: 1.0 / HBAR_C,
    LengthUnit.COMPTON: 1.0 / M_E,
}

# size of one unit expressed in GeV
_ENERGY_IN_GEV = {
    EnergyUnit.GEV: 1.0,
    EnergyUnit.EV: 1e-9,
    EnergyUnit.MEV: 1e-12,
}


def convert_length(x, from_unit, to_unit):
    """Rescale a length (scalar or array) between units."""
    from_unit, to_unit = LengthUnit(from_unit), LengthUnit(to_unit)
    if from_unit is to_unit:
        return x
    return x * (_LENGTH_IN_GEV_INV[from_unit] / _LENGTH_IN_GEV_INV[to_unit])


def convert_energy(x, from_unit, to_unit):
    """Rescale an energy (scalar or array) between units."""
    from_unit, to_unit = EnergyUnit(from_unit), EnergyUnit(to_unit)
    if from_unit is to_unit:
        return x
    return x * (_ENERGY_IN_GEV[from_unit] / _ENERGY_IN_GEV[to_unit])


def fm_to_natural(x_fm):
    return x_fm / HBAR_C


def natural_to_fm(x):
    return x * HBAR_C


def gev_to_ev(e):
    return e * 1e9


def gev_to_mev(e):
    return e * 1e12
