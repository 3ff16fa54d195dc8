"""Nuclear charge distributions: point, homogeneous sphere, Fermi.

Radii are given in fm on the public fields; every method that takes or
returns a radius or momentum works in natural units (GeV^-1, GeV).
Densities are normalized to one (multiply by Z e for the charge density).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from hadvp.core import ALPHA, HBAR_C
from hadvp.specfun import sph_bessel_j

SQRT_5_3 = math.sqrt(5.0 / 3.0)
FERMI_SKIN_DEFAULT = 2.3  # fm, 10%-90% fall-off distance


class NuclearModelError(ValueError):
    pass


def rms_to_sphere_radius(r_rms):
    """Radius of the homogeneous sphere with the given rms radius."""
    if not r_rms > 0:
        raise NuclearModelError(f"rms radius must be positive, got {r_rms}")
    return SQRT_5_3 * r_rms


def sphere_to_rms_radius(R):
    if not R > 0:
        raise NuclearModelError(f"sphere radius must be positive, got {R}")
    return R / SQRT_5_3


def _check_Z(Z):
    if int(Z) != Z or Z < 1:
        raise NuclearModelError(f"Z must be a positive integer, got {Z}")
    if Z * ALPHA >= 1.0:
        raise NuclearModelError(f"Z alpha = {Z * ALPHA:.4f} >= 1 is not supported")


@dataclass(frozen=True)
class PointNucleus:
    Z: int

    kind = "point"

    def __post_init__(self):
        _check_Z(self.Z)

    @property
    def radius(self) -> float:
        """Length scale in GeV^-1 (zero for a point)."""
        return 0.0

    def normalized_form_factor(self, q):
        return np.ones_like(np.asarray(q, dtype=float))

    def coulomb_potential(self, r):
        """Potential energy -Z alpha / r of the bound lepton, GeV."""
        return -self.Z * ALPHA / np.asarray(r, dtype=float)

    def rms_radius_fm(self) -> float:
        return 0.0


@dataclass(frozen=True)
class SphereNucleus:
    """Homogeneously charged sphere of radius ``R_fm``."""

    Z: int
    R_fm: float

    kind = "sphere"

    def __post_init__(self):
        _check_Z(self.Z)
        if not self.R_fm > 0:
            raise NuclearModelError(f"sphere radius must be positive, got {self.R_fm}")

    @classmethod
    def from_rms(cls, Z, r_rms_fm):
        return cls(Z, rms_to_sphere_radius(r_rms_fm))

    @property
    def R(self) -> float:
        return self.R_fm / HBAR_C

    @property
    def radius(self) -> float:
        return self.R

    def rms_radius_fm(self) -> float:
        return sphere_to_rms_radius(self.R_fm)

    def density(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= self.R, 3.0 / (4.0 * math.pi * self.R ** 3), 0.0)

    def normalized_form_factor(self, q):
        x = np.asarray(q, dtype=float) * self.R
        return 3.0 * _j1_over_x(x)

    def coulomb_potential(self, r):
        r = np.asarray(r, dtype=float)
        R = self.R
        with np.errstate(divide="ignore"):
            outside = -self.Z * ALPHA / r
        inside = -self.Z * ALPHA * (3.0 - (r / R) ** 2) / (2.0 * R)
        return np.where(r <= R, inside, outside)


def _j1_over_x(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = np.abs(x) < 1e-2
    xs2 = x[small] ** 2
    out[small] = (1.0 - xs2 / 10.0 * (1.0 - xs2 / 28.0 * (1.0 - xs2 / 54.0))) / 3.0
    xl = x[~small]
    out[~small] = sph_bessel_j(1, xl) / xl
    return out


@dataclass(frozen=True)
class FermiNucleus:
    """Two-parameter Fermi distribution rho ~ 1 / (1 + exp((r - c) / a)).

    ``t_fm`` is the 10%-90% skin thickness, t = 4 ln(3) a.
    """

    Z: int
    c_fm: float
    t_fm: float = FERMI_SKIN_DEFAULT
    _cache: dict = field(default_factory=dict, init=False, repr=False,
                         compare=False, hash=False)

    kind = "fermi"

    def __post_init__(self):
        _check_Z(self.Z)
        if not (self.c_fm > 0 and self.t_fm > 0):
            raise NuclearModelError("Fermi parameters c and t must be positive")

    @classmethod
    def from_rms(cls, Z, r_rms_fm, t_fm=FERMI_SKIN_DEFAULT):
        """Fix c so that the distribution has the requested rms radius."""
        a = t_fm / (4.0 * math.log(3.0))
        lo, hi = 1e-3, 5.0 * r_rms_fm + 10.0 * a

        def mismatch(c):
            return _fermi_moments(c, a)[1] - r_rms_fm ** 2

        if mismatch(lo) > 0:
            raise NuclearModelError(
                f"rms radius {r_rms_fm} fm too small for skin thickness {t_fm} fm")
        c = brentq(mismatch, lo, hi, xtol=1e-14, rtol=1e-14)
        return cls(Z, c, t_fm)

    @property
    def a_fm(self) -> float:
        return self.t_fm / (4.0 * math.log(3.0))

    @property
    def c(self) -> float:
        return self.c_fm / HBAR_C

    @property
    def a(self) -> float:
        return self.a_fm / HBAR_C

    @property
    def radius(self) -> float:
        return self.c

    @property
    def extent(self) -> float:
        """Radius beyond which the density is below 1e-26 of its center."""
        return self.c + 60.0 * self.a

    @cached_property
    def _norm(self) -> float:
        # 4 pi int r^2 f(r) dr in GeV^-3
        n, _ = _fermi_moments(self.c_fm, self.a_fm)
        return n / HBAR_C ** 3

    def rms_radius_fm(self) -> float:
        return math.sqrt(_fermi_moments(self.c_fm, self.a_fm)[1])

    def density(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(over="ignore"):
            return 1.0 / (1.0 + np.exp((r - self.c) / self.a)) / self._norm

    def normalized_form_factor(self, q):
        """4 pi int r^2 rho(r) j0(q r) dr by panel Gauss-Legendre.

        Panels are no wider than a/2 or 2/q_max, so both the skin and the
        oscillation of j0 are resolved with 16 nodes per panel.
        """
        qa = np.atleast_1d(np.asarray(q, dtype=float))
        if np.any(qa < 0) or not np.all(np.isfinite(qa)):
            raise NuclearModelError("form factor needs finite q >= 0")
        q_max = float(qa.max()) if qa.size else 0.0
        width = min(0.5 * self.a, 2.0 / q_max if q_max > 0 else np.inf)
        n_pan = max(64, int(math.ceil(self.extent / width)))
        edges = np.linspace(0.0, self.extent, n_pan + 1)
        x, w = np.polynomial.legendre.leggauss(16)
        r = (0.5 * np.diff(edges)[:, None] * (x[None, :] + 1.0) + edges[:-1, None]).ravel()
        wr = (0.5 * np.diff(edges)[:, None] * w[None, :]).ravel()
        mass = wr * 4.0 * math.pi * r * r * self.density(r)
        out = np.empty_like(qa)
        for lo in range(0, qa.size, 256):
            chunk = qa[lo:lo + 256]
            out[lo:lo + 256] = sph_bessel_j(0, np.outer(chunk, r)) @ mass
        if not np.all(np.isfinite(out)):
            raise NuclearModelError("Fermi form factor quadrature produced non-finite values")
        return out[0] if np.ndim(q) == 0 else out

    def form_factor_spline(self, q_max, n=4001):
        """Cubic spline of the normalized form factor on [0, q_max], cached."""
        key = ("ff", float(q_max), n)
        if key not in self._cache:
            q = np.linspace(0.0, q_max, n)
            self._cache[key] = CubicSpline(q, self.normalized_form_factor(q))
        return self._cache[key]

    def coulomb_potential(self, r):
        """Potential energy of the bound lepton, interpolated from a table."""
        spline_in, spline_out = self._potential_tables()
        r = np.asarray(r, dtype=float)
        ext = self.extent
        rc = np.clip(r, 0.0, ext)
        enclosed = spline_in(rc)
        outer = spline_out(rc)
        with np.errstate(divide="ignore", invalid="ignore"):
            phi = np.where(r > 0, enclosed / np.where(r > 0, r, 1.0), 0.0) + outer
            phi = np.where(r >= ext, 1.0 / r, phi)
            # at the origin the enclosed-charge term vanishes like r^2
            phi = np.where(r == 0, outer, phi)
        return -self.Z * ALPHA * phi

    def _potential_tables(self):
        if "pot" in self._cache:
            return self._cache["pot"]
        ext = self.extent
        # Gauss-Legendre panels; accurate enclosed charge and outer moment
        edges = np.unique(np.concatenate([
            np.linspace(0.0, self.c, 200),
            np.linspace(self.c, ext, 400)]))
        nodes, weights = np.polynomial.legendre.leggauss(10)
        q_in = [0.0]
        q_out = [0.0]
        for lo, hi in zip(edges[:-1], edges[1:]):
            x = 0.5 * (hi - lo) * (nodes + 1.0) + lo
            w = 0.5 * (hi - lo) * weights
            rho = self.density(x) * 4.0 * math.pi
            q_in.append(q_in[-1] + np.sum(w * rho * x * x))
            q_out.append(q_out[-1] + np.sum(w * rho * x))
        q_in = np.array(q_in)
        q_out = np.array(q_out)
        # outer moment integral from r to infinity
        outer = q_out[-1] - q_out
        tables = (CubicSpline(edges, q_in), CubicSpline(edges, outer))
        self._cache["pot"] = tables
        return tables


def _fermi_moments(c_fm, a_fm):
    """Return (4 pi int r^2 f, <r^2>) for the unnormalized Fermi function, fm units."""
    f = lambda r: 1.0 / (1.0 + math.exp(min((r - c_fm) / a_fm, 700.0)))
    upper = c_fm + 60.0 * a_fm
    n0, _ = quad(lambda r: r * r * f(r), 0.0, upper, points=[c_fm], epsabs=0, epsrel=1e-13, limit=200)
    n2, _ = quad(lambda r: r ** 4 * f(r), 0.0, upper, points=[c_fm], epsabs=0, epsrel=1e-13, limit=200)
    return 4.0 * math.pi * n0, n2 / n0


@dataclass(frozen=True)
class RadiusEntry:
    Z: int
    r_rms_fm: float
    uncertainty_fm: float


class RadiusTable(dict):
    """Mapping Z -> RadiusEntry."""

    def __missing__(self, Z):
        raise KeyError(f"no rms radius tabulated for Z={Z}; supply one explicitly")


# compiled charge radii (2013 evaluation); Z=96 has no quoted uncertainty
_BUILTIN_RADII = (
    (1, 0.8783, 0.0086),
    (14, 3.1224, 0.0024),
    (20, 3.4776, 0.0019),
    (36, 4.1884, 0.0022),
    (54, 4.7859, 0.0048),
    (74, 5.3658, 0.0023),
    (82, 5.5012, 0.0013),
    (96, 5.85, 0.0),
)


def builtin_radii() -> RadiusTable:
    return RadiusTable({z: RadiusEntry(z, r, u) for z, r, u in _BUILTIN_RADII})


def estimate_rms_radius(Z: int) -> float:
    """Rough rms charge radius (fm) for Z without a tabulated value.

    The mass number comes from the beta-stability line
    Z = A / (1.98 + 0.0155 A^(2/3)); the radius from the empirical fit
    R_rms = 0.836 A^(1/3) + 0.570 fm.  Good to a few percent for A > 9.
    """
    if Z < 1:
        raise NuclearModelError(f"Z must be positive, got {Z}")
    A = 2.0 * Z
    for _ in range(50):
        A = Z * (1.98 + 0.0155 * A ** (2.0 / 3.0))
    return 0.836 * A ** (1.0 / 3.0) + 0.570


def load_radii_csv(path) -> RadiusTable:
    """Read a CSV with header ``Z,R_rms_fm,uncertainty_fm``."""
    table = RadiusTable()
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        need = {"Z", "R_rms_fm", "uncertainty_fm"}
        if reader.fieldnames is None or not need <= set(reader.fieldnames):
            raise NuclearModelError(f"{path}: header must contain {sorted(need)}")
        for row in reader:
            z = int(row["Z"])
            table[z] = RadiusEntry(z, float(row["R_rms_fm"]), float(row["uncertainty_fm"]))
    return table


def make_model(kind: str, Z: int, r_rms_fm: float | None = None,
               skin_fm: float = FERMI_SKIN_DEFAULT):
    """Build a nuclear model from its kind name and rms radius."""
    if kind == "point":
        return PointNucleus(Z)
    if r_rms_fm is None:
        raise NuclearModelError(f"model '{kind}' needs an rms radius")
    if kind == "sphere":
        return SphereNucleus.from_rms(Z, r_rms_fm)
    if kind == "fermi":
        return FermiNucleus.from_rms(Z, r_rms_fm, skin_fm)
    raise NuclearModelError(f"unknown nuclear model '{kind}'")


def form_factor(model, q):
    """Charge form factor in units of the elementary charge: Z e F(q)."""
    return model.Z * math.sqrt(ALPHA) * model.normalized_form_factor(q)
