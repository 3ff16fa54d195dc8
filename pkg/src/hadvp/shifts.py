"""First-order hadronic vacuum-polarization energy shifts.

Methods
-------
``nonrel-point``        -4 B1 C1 m^3 (Z alpha)^4 / n^3, s states only.
``rel-point-analytic``  point-Coulomb Dirac state with the closed-form point
                        potential, as a finite sum of 2F1 terms.
``rel-point-numeric``   the same expectation value by radial quadrature, with
                        the closed-form or the all-region potential.
``rel-fns-approx``      B-spline states of the extended nucleus with the
                        first-region finite-size potential.
``rel-fns-full``        B-spline states with the all-region potential.

Energies are GeV internally; ``ShiftResult`` reports eV.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from hadvp.core import ALPHA, M_MU, M_P, gev_to_ev
from hadvp.nuclear import PointNucleus, make_model
from hadvp.polarization import LoopSpecies, PolarizationParamSet, builtin_params
from hadvp.potentials import (
    PotentialMethod, convolved_potential_table, full_potential_table,
    leptonic_volume_integral, uehling_point_approx, uehling_sphere_closed,
)
from hadvp.solver import SolverConfig, eigenvalue_shift, expectation_value, solve_dirac_fns
from hadvp.specfun import hyp2f1
from hadvp.wavefunctions import (
    BoundStateLabel, QuantumNumberError, coulomb_moment_e1, dirac_coulomb,
    nonrel_density_at_origin,
)

#: literature value of the hadronic/muonic ratio, shipped for display
LITERATURE_MUONIC_RATIO = (0.671, 0.015)
#: literature non-relativistic reduced-mass 2s value in muonic hydrogen, meV
LITERATURE_MUONIC_2S_MEV = -0.0112


class ShiftError(ValueError):
    pass


class ShiftMethod(str, enum.Enum):
    NONREL_POINT = "nonrel-point"
    REL_POINT_ANALYTIC = "rel-point-analytic"
    REL_POINT_NUMERIC = "rel-point-numeric"
    REL_FNS_APPROX = "rel-fns-approx"
    REL_FNS_FULL = "rel-fns-full"


_POINT_METHODS = {ShiftMethod.NONREL_POINT, ShiftMethod.REL_POINT_ANALYTIC,
                  ShiftMethod.REL_POINT_NUMERIC}


@dataclass(frozen=True)
class ShiftRequest:
    """One energy-shift computation.

    ``radius_uncertainty_fm`` drives the radius error (recomputed at
    R_rms +- sigma); ``alternate_params``, when given, drives the
    parameter-set error.  ``evaluation`` selects the expectation value or
    the eigenvalue difference for the finite-size methods.
    """

    label: BoundStateLabel
    model: object
    method: ShiftMethod
    params: PolarizationParamSet = field(default_factory=builtin_params)
    potential: PotentialMethod = PotentialMethod.CLOSED_FORM
    radius_uncertainty_fm: float = 0.0
    alternate_params: PolarizationParamSet | None = None
    solver_config: SolverConfig | None = None
    evaluation: str = "expectation"
    numeric_uncertainty: bool = True

    def __post_init__(self):
        object.__setattr__(self, "method", ShiftMethod(self.method))
        object.__setattr__(self, "potential", PotentialMethod(self.potential))
        if self.model.Z != self.label.Z:
            raise ShiftError(f"state Z={self.label.Z} differs from nuclear Z={self.model.Z}")
        point = isinstance(self.model, PointNucleus)
        if self.method in _POINT_METHODS and not point:
            raise ShiftError(f"method {self.method.value} requires a point nucleus")
        if self.method not in _POINT_METHODS and point:
            raise ShiftError(f"method {self.method.value} requires an extended nucleus")
        if self.method is ShiftMethod.NONREL_POINT and self.label.l != 0:
            raise ShiftError("the non-relativistic formula applies to s states only")
        if self.evaluation not in ("expectation", "eigenvalue"):
            raise ShiftError(f"unknown evaluation '{self.evaluation}'")
        if self.radius_uncertainty_fm < 0:
            raise ShiftError("radius uncertainty must be non-negative")


@dataclass(frozen=True)
class ShiftResult:
    """Energy shift in eV with its uncertainty components (all >= 0)."""

    value: float
    uncertainty_param: float = 0.0
    uncertainty_radius: float = 0.0
    uncertainty_numeric: float = 0.0
    method: str = ""
    label: str = ""

    def __post_init__(self):
        for name in ("uncertainty_param", "uncertainty_radius", "uncertainty_numeric"):
            if getattr(self, name) < 0:
                raise ShiftError(f"{name} must be non-negative")

    @property
    def uncertainty(self) -> float:
        return math.sqrt(self.uncertainty_param ** 2 + self.uncertainty_radius ** 2
                         + self.uncertainty_numeric ** 2)

    def in_units(self, factor: float) -> "ShiftResult":
        """Rescaled copy, e.g. factor 1e3 for meV."""
        return replace(self, value=self.value * factor,
                       uncertainty_param=self.uncertainty_param * factor,
                       uncertainty_radius=self.uncertainty_radius * factor,
                       uncertainty_numeric=self.uncertainty_numeric * factor)


# --- analytic and expansion formulas (GeV) -------------------------------

def _first(params):
    reg = params.first
    return reg.B, reg.C


def shift_1s_closed_form_gev(Z, mass, params: PolarizationParamSet) -> float:
    za = Z * ALPHA
    if not za < 1.0:
        raise QuantumNumberError(f"Z alpha = {za:.4f} >= 1")
    B1, C1 = _first(params)
    lam = za * mass
    g = math.sqrt(1.0 - za * za)
    z = 2.0 * lam * math.sqrt(C1)
    return -za * lam * z ** (2.0 * g) * B1 / g ** 2 * hyp2f1(2 * g, 2 * g, 1 + 2 * g, -z)


def shift_1s_closed_form(Z, mass, params: PolarizationParamSet | None = None) -> float:
    """Exact point-nucleus 1s shift with the closed-form potential, eV."""
    return gev_to_ev(shift_1s_closed_form_gev(Z, mass, params or builtin_params()))


def shift_nonrel(label: BoundStateLabel, params: PolarizationParamSet | None = None,
                 reduced_mass_with: float | None = None) -> float:
    """-4 B1 C1 m^3 (Z alpha)^4 / n^3 in eV, s states only.

    ``reduced_mass_with`` (a nuclear mass, GeV) replaces m by the reduced
    mass, a non-relativistic display mode only.
    """
    if label.l != 0:
        raise ShiftError("the non-relativistic formula applies to s states only")
    B1, C1 = _first(params or builtin_params())
    m = label.mass
    if reduced_mass_with is not None:
        m = m * reduced_mass_with / (m + reduced_mass_with)
    # |psi(0)|^2 * int d^3r dV = (Z alpha m)^3 / (pi n^3) * (-4 pi Z alpha B1 C1)
    dens = nonrel_density_at_origin(label.n, label.Z, m)
    return gev_to_ev(-4.0 * math.pi * label.Z * ALPHA * B1 * C1 * dens)


def _expansion_terms(label: BoundStateLabel, params):
    B1, C1 = _first(params)
    m, za = label.mass, label.Z * ALPHA
    s = math.sqrt(C1)
    key = (label.n, label.kappa)
    if key == (1, -1):
        return {4: -4 * B1 * C1 * m ** 3 * za ** 4,
                5: 32.0 / 3.0 * B1 * C1 * s * m ** 4 * za ** 5,
                6: -4 * B1 * C1 * m ** 3 * za ** 6
                * (1 + 6 * C1 * m * m - math.log(2 * za * s * m))}
    if key == (2, -1):
        return {4: -0.5 * B1 * C1 * m ** 3 * za ** 4,
                5: 4.0 / 3.0 * B1 * C1 * s * m ** 4 * za ** 5}
    if key == (2, 1):
        return {6: -B1 * C1 * (3 + 4 * C1 * m * m) * m ** 3 / 32.0 * za ** 6,
                7: B1 * C1 * s * (5 + 24 * C1 * m * m) * m ** 4 / 60.0 * za ** 7}
    if key == (2, -2):
        return {6: -B1 * C1 ** 2 * m ** 5 / 8.0 * za ** 6,
                7: 2.0 * B1 * C1 ** 2 * s * m ** 6 / 5.0 * za ** 7}
    raise ShiftError(f"no Z alpha expansion for state {label.name}")


def expansion_orders(label: BoundStateLabel) -> tuple:
    """Powers of Z alpha available for ``label``."""
    return tuple(sorted(_expansion_terms(label, builtin_params())))


def shift_expansion(label: BoundStateLabel, order: int | None = None,
                    params: PolarizationParamSet | None = None) -> float:
    """Z alpha expansion summed through (Z alpha)^order (all terms if None), eV.

    The 1s series runs through (Z alpha)^6 with its logarithm, 2s through
    (Z alpha)^5 and both 2p states through (Z alpha)^7; higher orders are
    not extrapolated.
    """
    terms = _expansion_terms(label, params or builtin_params())
    if order is None:
        order = max(terms)
    if order < min(terms) or order > max(terms):
        raise ShiftError(f"{label.name}: order {order} outside the available "
                         f"range {min(terms)}..{max(terms)}")
    return gev_to_ev(sum(v for k, v in terms.items() if k <= order))


def shift_rel_point_analytic_gev(label: BoundStateLabel, params) -> float:
    """<delta V_point> for the point-Coulomb Dirac state, any (n, kappa)."""
    B1, C1 = _first(params)
    return -2.0 * label.Z * ALPHA * B1 * coulomb_moment_e1(label, math.sqrt(C1))


# --- numeric pipelines ---------------------------------------------------

_GL16 = np.polynomial.legendre.leggauss(16)


def _point_grid(label, s, n_panels=400):
    """Gauss-Legendre nodes on geometric panels for point-Coulomb states."""
    a = label.n / (label.Z * ALPHA * label.mass)
    edges = np.geomspace(1e-8 * min(s, a), 120.0 * label.n * a, n_panels + 1)
    x, w = _GL16
    lo, hi = edges[:-1, None], edges[1:, None]
    r = (0.5 * (hi - lo) * (x + 1.0) + lo).ravel()
    wr = (0.5 * (hi - lo) * w).ravel()
    return r, wr


def _point_numeric_gev(label, params, potential, n_panels=400):
    s = math.sqrt(params.first.C)
    if potential is PotentialMethod.FULL:
        V = full_potential_table(label.Z, params, PointNucleus(label.Z))
    elif potential is PotentialMethod.CLOSED_FORM:
        V = lambda r: uehling_point_approx(label.Z, params, r)
    else:
        raise ShiftError("a point nucleus has no convolution potential")
    wf = dirac_coulomb(label)
    r, w = _point_grid(label, s, n_panels)
    return float(np.sum(w * wf.radial_density(r) * V(r)))


def fns_potential(Z, params, model, full: bool):
    """Potential evaluator used by the finite-size pipelines."""
    if full:
        return full_potential_table(Z, params, model)
    if model.kind == "sphere":
        R = model.R
        return lambda r: uehling_sphere_closed(Z, params, R, r)
    return convolved_potential_table(Z, params, model)


def _fns_gev(label, model, params, full, config, evaluation):
    V = fns_potential(label.Z, params, model, full)
    config = config or SolverConfig(states=(label,))
    if label not in config.states:
        config = replace(config, states=tuple(config.states) + (label,))
    if evaluation == "eigenvalue":
        return eigenvalue_shift(label, model, V, config, scale="auto")
    state = solve_dirac_fns(label.Z, model, None, config)[label]
    return expectation_value(state, V)


def _value_gev(req: ShiftRequest, model, params, refined=False) -> float:
    m = req.method
    if m is ShiftMethod.NONREL_POINT:
        return shift_nonrel(req.label, params) * 1e-9
    if m is ShiftMethod.REL_POINT_ANALYTIC:
        return shift_rel_point_analytic_gev(req.label, params)
    if m is ShiftMethod.REL_POINT_NUMERIC:
        return _point_numeric_gev(req.label, params, req.potential, 600 if refined else 400)
    config = req.solver_config or SolverConfig(states=(req.label,))
    if refined:
        config = config.refined()
    return _fns_gev(req.label, model, params, m is ShiftMethod.REL_FNS_FULL, config,
                    req.evaluation)


def _with_radius(model, r_rms_fm):
    kw = {"skin_fm": model.t_fm} if model.kind == "fermi" else {}
    return make_model(model.kind, model.Z, r_rms_fm, **kw)


def shift_perturbative(req: ShiftRequest) -> ShiftResult:
    """Evaluate ``req`` and assemble its uncertainty budget (eV)."""
    value = _value_gev(req, req.model, req.params)
    u_num = 0.0
    if req.numeric_uncertainty and req.method in (
            ShiftMethod.REL_POINT_NUMERIC, ShiftMethod.REL_FNS_APPROX, ShiftMethod.REL_FNS_FULL):
        u_num = abs(_value_gev(req, req.model, req.params, refined=True) - value)
    u_rad = 0.0
    if req.radius_uncertainty_fm > 0 and not isinstance(req.model, PointNucleus):
        r0, sig = req.model.rms_radius_fm(), req.radius_uncertainty_fm
        up = _value_gev(req, _with_radius(req.model, r0 + sig), req.params)
        dn = _value_gev(req, _with_radius(req.model, r0 - sig), req.params)
        u_rad = 0.5 * abs(up - dn)
    u_par = 0.0
    if req.alternate_params is not None:
        u_par = abs(_value_gev(req, req.model, req.alternate_params) - value)
    return ShiftResult(gev_to_ev(value), gev_to_ev(u_par), gev_to_ev(u_rad), gev_to_ev(u_num),
                       req.method.value, req.label.name)


# --- comparison with the muon loop ---------------------------------------

def muonic_vp_ratio(Z: int = 1, params: PolarizationParamSet | None = None,
                    n: int = 1) -> float:
    """Non-relativistic hadronic over muon-loop shift of an s state.

    Both are |psi(0)|^2 times the volume integral of the potential, so the
    ratio does not depend on n or on the bound-lepton mass.
    """
    params = params or builtin_params()
    B1, C1 = _first(params)
    had = -4.0 * math.pi * Z * ALPHA * B1 * C1
    mu = leptonic_volume_integral(LoopSpecies.MUON, Z)
    return had / mu


def muonic_hydrogen_label(text: str) -> BoundStateLabel:
    """Muonic-hydrogen state: bound muon, Z = 1, no reduced mass."""
    return BoundStateLabel.parse(text, Z=1, mass=M_MU)


__all__ = [
    "ShiftError", "ShiftMethod", "ShiftRequest", "ShiftResult",
    "shift_1s_closed_form", "shift_nonrel", "shift_expansion", "expansion_orders",
    "shift_perturbative", "muonic_vp_ratio", "muonic_hydrogen_label", "fns_potential",
    "LITERATURE_MUONIC_RATIO", "LITERATURE_MUONIC_2S_MEV", "M_P",
]
