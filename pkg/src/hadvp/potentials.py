"""Hadronic and leptonic Uehling potentials.

All functions take radii in GeV^-1 and return the potential energy of the
bound lepton in GeV (negative: the correction is attractive).

Variants
--------
``uehling_point_approx``
    closed form for a point nucleus with first-region parameters.
``uehling_sphere_closed``
    closed form for a homogeneously charged sphere (inside/outside).
``uehling_convolved``
    radial convolution of the point form with any spherical density.
``uehling_full``
    the momentum-space integral over all parameter regions, with
    oscillatory (Fourier-weighted) quadrature.
``uehling_leptonic``
    one-loop electron- or muon-loop potential, for comparison.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from hadvp.core import ALPHA, M_E, M_MU
from hadvp.nuclear import FermiNucleus, PointNucleus, SphereNucleus, _j1_over_x
from hadvp.polarization import (
    LoopSpecies, PolarizationParamSet, first_region_params,
)
from hadvp.specfun import expint, expint_diff


class PotentialError(ValueError):
    pass


class QuadratureError(ArithmeticError):
    pass


class PotentialMethod(str, enum.Enum):
    CLOSED_FORM = "closed-form-approx"
    FULL = "full-quadrature"
    CONVOLUTION = "convolution-numeric"


def _as_array(r):
    ra = np.asarray(r, dtype=float)
    return ra, ra.ndim == 0


def uehling_point_approx(Z, params: PolarizationParamSet, r):
    """-(2 Z alpha / r) B1 E1(r / sqrt(C1)), first-region parameters."""
    ra, scalar = _as_array(r)
    if np.any(ra <= 0):
        raise PotentialError("point-nucleus potential needs r > 0")
    reg = params.first
    out = -2.0 * Z * ALPHA * reg.B / ra * expint(1, ra / math.sqrt(reg.C))
    return float(out) if scalar else out


def _sphere_at_origin(Z, B1, s, R):
    u = R / s
    return -3.0 * Z * ALPHA * B1 * s * s / R ** 3 * (
        u * u * expint(1, u) + 1.0 - math.exp(-u) * (1.0 + u))


def _sphere_inside(Z, B1, s, R, r):
    C1 = s * s
    rp = (r + R) / s
    dm = R - r
    with np.errstate(invalid="ignore", divide="ignore"):
        log_term = np.where(dm > 0, dm * dm * (r + 2.0 * R) / (6.0 * s)
                            * expint(1, np.where(dm > 0, dm, 1.0) / s), 0.0)
    bracket = (s * r + s * R * expint(3, rp) + C1 * expint(4, rp)
               - np.exp(-dm / s) * (2.0 * C1 + s * (r + 2.0 * R) - dm * (r + 2.0 * R)) / 6.0
               - log_term)
    return -3.0 * Z * ALPHA * B1 * s / (r * R ** 3) * bracket


def _sphere_outside(Z, B1, s, R, r):
    u = (r - R) / s
    v = (r + R) / s
    d3p = expint(3, u) + expint(3, v)
    d4m = expint_diff(4, u, v)
    return -3.0 * Z * ALPHA * B1 * s / (r * R ** 3) * (s * R * d3p - s * s * d4m)


def uehling_sphere_closed(Z, params: PolarizationParamSet, R, r):
    """Closed-form potential of a homogeneously charged sphere of radius R.

    First-region parameters; R and r in GeV^-1.  Near the origin the
    inside expression is a small difference of O(1) terms, so below
    r = 1e-4 R it is replaced by its even Taylor form anchored at the exact
    r = 0 value.
    """
    ra, scalar = _as_array(r)
    if np.any(ra < 0):
        raise PotentialError("radius must be non-negative")
    if not R > 0:
        raise PotentialError("sphere radius must be positive")
    reg = params.first
    B1, s = reg.B, math.sqrt(reg.C)
    ra1 = np.atleast_1d(ra)
    out = np.empty_like(ra1)
    r_small = 1e-4 * R
    tiny = ra1 < r_small
    inside = (~tiny) & (ra1 <= R)
    outside = ra1 > R
    if inside.any():
        out[inside] = _sphere_inside(Z, B1, s, R, ra1[inside])
    if outside.any():
        out[outside] = _sphere_outside(Z, B1, s, R, ra1[outside])
    if tiny.any():
        v0 = _sphere_at_origin(Z, B1, s, R)
        v1 = float(_sphere_inside(Z, B1, s, R, np.array([r_small]))[0])
        out[tiny] = v0 + (v1 - v0) * (ra1[tiny] / r_small) ** 2
    return float(out[0]) if scalar else out


def _d2_minus(r, x, s):
    u = np.abs(r - x) / s
    v = (r + x) / s
    return expint_diff(2, u, v)


def _density_support(model):
    if isinstance(model, SphereNucleus):
        return model.R, [model.R]
    if isinstance(model, FermiNucleus):
        return model.extent, [model.c]
    raise PotentialError(f"no radial density for model {model!r}")


def uehling_convolved(Z, params: PolarizationParamSet, model, r, epsrel=1e-12,
                      method="adaptive"):
    """Point-nucleus closed form folded with the model's charge density.

    -(4 pi Z alpha B1 s / r) int x rho(x) D2^-(r, x) dx, s = sqrt(C1), with
    the r -> 0 limit -8 pi Z alpha B1 int x rho(x) E1(x/s) dx.

    ``method='adaptive'`` runs one adaptive integral per radius (the
    reference); ``method='panel'`` uses fixed Gauss-Legendre panels graded
    toward x = r and the density edge, vectorized, for dense radial grids.
    """
    ra, scalar = _as_array(r)
    if np.any(ra < 0):
        raise PotentialError("radius must be non-negative")
    if isinstance(model, PointNucleus):
        return uehling_point_approx(Z, params, r)
    if method not in ("adaptive", "panel"):
        raise PotentialError(f"unknown convolution method '{method}'")
    reg = params.first
    B1, s = reg.B, math.sqrt(reg.C)
    x_max, breaks = _density_support(model)
    if method == "panel":
        out = np.array([_convolve_panels(float(ri), model, s, x_max, breaks)
                        for ri in np.atleast_1d(ra)])
        out *= -4.0 * math.pi * Z * ALPHA * B1
        return float(out[0]) if scalar else out

    def rho(x):
        return float(model.density(x))

    out = []
    for ri in np.atleast_1d(ra):
        if ri == 0.0 or ri < 1e-9 * x_max:
            f = lambda x: x * rho(x) * float(expint(1, x / s)) if x > 0 else 0.0
            val, _ = quad(f, 0.0, x_max, points=breaks or None, epsabs=0.0,
                          epsrel=epsrel, limit=400)
            out.append(-8.0 * math.pi * Z * ALPHA * B1 * val)
            continue
        pts = sorted(p for p in set(breaks + [ri]) if 0.0 < p < x_max)
        f = lambda x: x * rho(x) * float(_d2_minus(ri, x, s))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            val, err = quad(f, 0.0, x_max, points=pts or None, epsabs=0.0,
                            epsrel=epsrel, limit=400)
        out.append(-4.0 * math.pi * Z * ALPHA * B1 * s / ri * val)
    out = np.array(out)
    return float(out[0]) if scalar else out


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)
_GRADING = np.array([1e-7, 1e-5, 1e-3, 1e-2, 0.03, 0.1, 0.3, 1.0, 2.0, 4.0, 7.0,
                     11.0, 16.0, 22.0, 30.0, 40.0])


def _convolve_panels(r, model, s, x_max, breaks):
    """s / r int x rho(x) D2^-(r, x) dx over graded panels (r -> 0: its limit)."""
    lo, hi = 0.0, x_max
    pts = [lo, hi] + [p for p in breaks if lo < p < hi]
    for c in [r] + list(breaks) + [0.0]:
        for g in _GRADING * s:
            pts += [c - g, c + g]
    if isinstance(model, FermiNucleus):
        pts += list(model.c + model.a * np.arange(-12.0, 24.5, 0.5))
    pts = np.unique(np.clip(pts, lo, hi))
    # cap panel width at s / 2
    fine = [pts[0]]
    for a, b in zip(pts[:-1], pts[1:]):
        n = max(1, int(math.ceil((b - a) / (0.5 * s))))
        fine += list(np.linspace(a, b, n + 1)[1:])
    pts = np.array(fine)
    a, b = pts[:-1], pts[1:]
    x = (0.5 * (b - a)[:, None] * (_GL_NODES[None, :] + 1.0) + a[:, None]).ravel()
    w = (0.5 * (b - a)[:, None] * _GL_WEIGHTS[None, :]).ravel()
    rho = model.density(x)
    if r < 1e-9 * x_max:
        return 2.0 * float(np.sum(w * x * rho * expint(1, x / s)))
    return s / r * float(np.sum(w * x * rho * _d2_minus(r, x, s)))


# --- full momentum-space potential --------------------------------------

_FAIL_ABS = 1e-13


def _qawo(f, a, b, weight, omega, epsabs, epsrel):
    """One QUADPACK call; fails only if the achieved error is material."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        if omega == 0.0:
            if weight == "sin":
                return 0.0, 0.0
            val, err = quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=500)
        else:
            val, err = quad(f, a, b, weight=weight, wvar=omega, epsabs=epsabs,
                            epsrel=epsrel, limit=500)
    if not np.isfinite(val) or (err > _FAIL_ABS and err > 1e-6 * abs(val)):
        raise QuadratureError(
            f"oscillatory quadrature on [{a:.6g}, {b:.6g}] with {weight}({omega:.6g} q) "
            f"did not converge: value {val:.6e}, error estimate {err:.3e}")
    return val, err


def _pieces(edges, lo, hi):
    """Split [lo, hi] at the parameter-region edges."""
    pts = [lo] + [e for e in edges if lo < e < hi] + [hi]
    return list(zip(pts[:-1], pts[1:]))


def _region_pi(params, a, b):
    """Re Pi with the parameters of the region holding [a, b].

    Quadrature rules may sample an endpoint rounded to the neighbouring
    region; a global lookup would then inject the small jump between
    regions, which Fourier-moment rules can amplify badly.
    """
    mid = 0.5 * (a + b) if math.isfinite(b) else a + 1.0
    i = int(np.clip(np.searchsorted(params.edges, mid, side="right") - 1, 0, len(params) - 1))
    reg = params.regions[i]
    A, B, C = reg.A, reg.B, reg.C
    return lambda q: A + B * math.log1p(C * q * q)


def _finite_top(edges, K, floor):
    """Upper end of the finite part of [0, K]; beyond it a Fourier tail."""
    if math.isfinite(K):
        return K
    return max([floor] + [e for e in edges if math.isfinite(e)])


def _point_tail(reg, T, r, epsabs, epsrel):
    """int_T^inf Pi(q)/q sin(r q) dq for one log region, by parts twice.

    The remaining integrand decays like ln(q)/q^3, which the Fourier
    extrapolation handles; the raw ln(q)/q tail it does not.
    """
    A, B, C = reg.A, reg.B, reg.C

    def derivs(q):
        L = A + B * math.log1p(C * q * q)
        d1 = 2.0 * B * C * q / (1.0 + C * q * q)
        d2 = 2.0 * B * C * (1.0 - C * q * q) / (1.0 + C * q * q) ** 2
        g = L / q
        g1 = d1 / q - L / q ** 2
        g2 = d2 / q - 2.0 * d1 / q ** 2 + 2.0 * L / q ** 3
        return g, g1, g2

    g, g1, _ = derivs(T)
    rest, _ = _qawo(lambda q: derivs(q)[2], T, math.inf, "sin", r, epsabs, epsrel)
    return g * math.cos(r * T) / r - g1 * math.sin(r * T) / r ** 2 - rest / r ** 2


def _full_point(r, params, edges, K, epsabs, epsrel):
    top = _finite_top(edges, K, 1.0)
    total = 0.0
    for a, b in _pieces(edges, 0.0, top):
        pi = _region_pi(params, a, b)
        amp = lambda q: pi(q) / q if q > 0 else 0.0
        total += _qawo(amp, a, b, "sin", r, epsabs, epsrel)[0]
    if not math.isfinite(K):
        total += _point_tail(params.regions[-1], top, r, epsabs, epsrel)
    return total / r


def _full_sphere(r, R, params, edges, K, epsabs, epsrel):
    # low momenta: F(q) is smooth, weight sin(q r)
    q_b = min(K, 8.0 / R)
    total = 0.0
    for a, b in _pieces(edges, 0.0, q_b):
        pi = _region_pi(params, a, b)
        amp = lambda q: pi(q) * 3.0 * float(_j1_over_x(q * R)) / (q * r) if q > 0 else 0.0
        v, _ = _qawo(amp, a, b, "sin", r, epsabs, epsrel)
        total += v
    if q_b >= K:
        return total
    # high momenta: products of sines split into pure Fourier terms
    d, sg = abs(r - R), math.copysign(1.0, r - R)
    sig = r + R
    pref = 3.0 / (2.0 * r * R ** 3)
    top = _finite_top(edges, K, q_b)
    spans = _pieces(edges, q_b, top)
    if not math.isfinite(K):
        spans.append((top, math.inf))
    for a, b in spans:
        pi = _region_pi(params, a, b)
        a4 = lambda q: pi(q) / q ** 4
        a3 = lambda q: pi(q) / q ** 3
        c_d, _ = _qawo(a4, a, b, "cos", d, epsabs, epsrel)
        c_s, _ = _qawo(a4, a, b, "cos", sig, epsabs, epsrel)
        s_s, _ = _qawo(a3, a, b, "sin", sig, epsabs, epsrel)
        s_d, _ = _qawo(a3, a, b, "sin", d, epsabs, epsrel)
        total += pref * ((c_d - c_s) - R * (s_s + sg * s_d))
    return total


def _full_fermi(r, model, params, edges, K, epsabs, epsrel):
    # the Fermi form factor falls like exp(-pi a q); cut where it is negligible
    q_cut = min(K, 40.0 / (math.pi * model.a))
    ff = model.form_factor_spline(q_cut)
    total = 0.0
    for a, b in _pieces(edges, 0.0, q_cut):
        pi = _region_pi(params, a, b)
        amp = lambda q: pi(q) * float(ff(q)) / (q * r) if q > 0 else 0.0
        v, _ = _qawo(amp, a, b, "sin", r, epsabs, epsrel)
        total += v
    return total


def uehling_full(Z, params: PolarizationParamSet, model, r, k_max=None,
                 epsabs=1e-16, epsrel=1e-10):
    """-(2 Z alpha / pi) int dq j0(q r) F(q) Re Pi(-q^2), all regions.

    The integral runs up to the last region edge (or ``k_max``); a
    parameter set whose last edge is infinite is integrated to infinity.
    Each region is integrated with QUADPACK's Fourier-weighted rules
    (Chebyshev moments on finite pieces, cycle-by-cycle extrapolation on
    infinite tails).  For the sphere the product j0 * j1 is rewritten as a
    sum of pure sines and cosines above q = 8/R.
    """
    ra, scalar = _as_array(r)
    if np.any(ra <= 0):
        raise PotentialError("full-quadrature potential needs r > 0")
    edges = [float(e) for e in params.edges]
    K = float(k_max) if k_max is not None else edges[-1]
    out = []
    for ri in np.atleast_1d(ra):
        ri = float(ri)
        if isinstance(model, PointNucleus):
            val = _full_point(ri, params, edges, K, epsabs, epsrel)
        elif isinstance(model, SphereNucleus):
            val = _full_sphere(ri, model.R, params, edges, K, epsabs, epsrel)
        elif isinstance(model, FermiNucleus):
            val = _full_fermi(ri, model, params, edges, K, epsabs, epsrel)
        else:
            raise PotentialError(f"no form factor for model {model!r}")
        out.append(-2.0 * Z * ALPHA / math.pi * val)
    out = np.array(out)
    return float(out[0]) if scalar else out


# --- tabulated potentials ------------------------------------------------

def _lobatto(n):
    k = np.arange(n)
    x = -np.cos(math.pi * k / (n - 1))
    w = (-1.0) ** k
    w[0] *= 0.5
    w[-1] *= 0.5
    return x, w


def _bary(x_nodes, w, y, x):
    """Barycentric interpolation of rows y (panels x nodes) at x (panels x m)."""
    diff = x[:, :, None] - x_nodes[None, None, :]
    hit = diff == 0.0
    diff = np.where(hit, 1.0, diff)
    c = w[None, None, :] / diff
    out = np.einsum("pmk,pk->pm", c, y) / c.sum(axis=2)
    if hit.any():
        p, m, k = np.nonzero(hit)
        out[p, m] = y[p, k]
    return out


@dataclass(frozen=True)
class ChebyshevTable:
    """Piecewise Chebyshev-Lobatto interpolant of a function of r.

    ``error_estimate`` is the largest difference between the table and the
    interpolant through every other node, a conservative bound.
    """

    edges: np.ndarray
    values: np.ndarray
    error_estimate: float

    @classmethod
    def build(cls, fn, edges, n_nodes=17) -> "ChebyshevTable":
        if n_nodes < 5 or n_nodes % 2 == 0:
            raise PotentialError("n_nodes must be odd and >= 5")
        edges = np.asarray(edges, dtype=float)
        xn, _ = _lobatto(n_nodes)
        a, b = edges[:-1], edges[1:]
        nodes = 0.5 * (b - a)[:, None] * (xn[None, :] + 1.0) + a[:, None]
        values = np.asarray(fn(nodes.ravel()), dtype=float).reshape(nodes.shape)
        xs, ws = _lobatto((n_nodes + 1) // 2)
        odd = np.broadcast_to(xn[1::2], (len(a), n_nodes // 2)).copy()
        sub = _bary(xs, ws, values[:, ::2], odd)
        err = float(np.max(np.abs(sub - values[:, 1::2])))
        return cls(edges, values, err)

    @property
    def lo(self) -> float:
        return float(self.edges[0])

    @property
    def hi(self) -> float:
        return float(self.edges[-1])

    def __call__(self, r):
        """Interpolated values; r must lie in [lo, hi]."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if r.size and (r.min() < self.lo or r.max() > self.hi):
            raise PotentialError(f"table covers [{self.lo:.6g}, {self.hi:.6g}] only")
        xn, wn = _lobatto(self.values.shape[1])
        idx = np.clip(np.searchsorted(self.edges, r, side="right") - 1, 0, len(self.edges) - 2)
        a, b = self.edges[idx], self.edges[idx + 1]
        t = (2.0 * r - a - b) / (b - a)
        out = np.empty_like(r)
        for p in np.unique(idx):
            sel = idx == p
            out[sel] = _bary(xn, wn, self.values[p][None, :], t[sel][None, :])[0]
        return out


def _uniform_edges(lo, hi, h, marks=()):
    pts = sorted({lo, hi, *[m for m in marks if lo < m < hi]})
    out = [pts[0]]
    for a, b in zip(pts[:-1], pts[1:]):
        n = max(1, int(math.ceil((b - a) / h)))
        out += list(np.linspace(a, b, n + 1)[1:])
    return np.array(out)


@dataclass(frozen=True)
class ConvolvedTable:
    """Convolved potential of a diffuse nucleus, tabulated once.

    Inside [0, r_far] the panel convolution is interpolated; beyond, where
    the potential is below exp(-40) of its central value, the point form
    is scaled to join continuously.
    """

    table: ChebyshevTable
    far: Callable
    far_scale: float
    method: str = "convolution-numeric:tabulated"

    def __call__(self, r):
        ra, scalar = _as_array(r)
        ra = np.atleast_1d(ra).astype(float)
        if np.any(ra < 0):
            raise PotentialError("radius must be non-negative")
        out = np.empty_like(ra)
        near = ra <= self.table.hi
        if near.any():
            out[near] = self.table(ra[near])
        if (~near).any():
            with np.errstate(under="ignore"):
                out[~near] = self.far_scale * self.far(ra[~near])
        return float(out[0]) if scalar else out


def convolved_potential_table(Z, params: PolarizationParamSet, model, panel_width=4.0,
                              n_nodes=17) -> ConvolvedTable:
    """Tabulate ``uehling_convolved`` for repeated evaluation (solver grids)."""
    if isinstance(model, PointNucleus):
        raise PotentialError("a point nucleus needs no convolution")
    s = math.sqrt(params.first.C)
    if isinstance(model, FermiNucleus):
        core, marks = model.c + 12.0 * model.a, [model.c]
    else:
        core, marks = model.R, [model.R]
    r_far = core + 40.0 * s
    edges = _uniform_edges(0.0, r_far, panel_width, marks)
    table = ChebyshevTable.build(
        lambda r: uehling_convolved(Z, params, model, r, method="panel"), edges, n_nodes)
    far = lambda r: uehling_point_approx(Z, params, r)
    scale = float(table.values[-1, -1] / far(r_far))
    return ConvolvedTable(table, far, scale)


def _base_potential(Z, params, model):
    if isinstance(model, PointNucleus):
        return lambda r: uehling_point_approx(Z, params, r)
    if isinstance(model, SphereNucleus):
        return lambda r: uehling_sphere_closed(Z, params, model.R, r)
    return convolved_potential_table(Z, params, model)


@dataclass(frozen=True)
class TabulatedPotential:
    """First-region potential plus the tabulated all-region correction.

    The correction D = full - base is interpolated over [r_lo, r_cut].
    Below r_lo it is continued as D(r_lo) (as D(r_lo) r_lo / r for a point
    nucleus, where D carries the 1/r singularity); beyond r_cut it is set to
    zero, the full and base potentials differing there only by the small
    oscillation left by the momentum cut-offs.
    """

    base: Callable
    table: ChebyshevTable
    point_like: bool
    method: str = "full-quadrature:tabulated"

    @property
    def r_lo(self) -> float:
        return self.table.lo

    @property
    def r_cut(self) -> float:
        return self.table.hi

    @property
    def error_estimate(self) -> float:
        return self.table.error_estimate

    def correction(self, r):
        ra, scalar = _as_array(r)
        ra = np.atleast_1d(ra).astype(float)
        out = np.zeros_like(ra)
        lo = ra < self.r_lo
        if lo.any():
            d0 = self.table.values[0, 0]
            out[lo] = d0 * self.r_lo / np.maximum(ra[lo], 1e-300) if self.point_like else d0
        mid = (ra >= self.r_lo) & (ra <= self.r_cut)
        if mid.any():
            out[mid] = self.table(ra[mid])
        return float(out[0]) if scalar else out

    def __call__(self, r):
        ra, scalar = _as_array(r)
        ra = np.atleast_1d(ra)
        out = np.asarray(self.base(ra), dtype=float) + self.correction(ra)
        return float(out[0]) if scalar else out


def _table_edges(model, s, r_cut, h):
    R = model.radius
    if isinstance(model, PointNucleus):
        r_lo, scale, marks = 1e-4 * s, s, []
    else:
        # the density edge carries ripples from every region edge k_i
        grade = np.array([1e-3, 3e-3, 0.01, 0.03, 0.1, 0.2, 0.4, 0.7, 1.0, 1.5, 2.0])
        r_lo, scale = 1e-3 * R, R
        marks = [R] + [x for x in np.concatenate([R - grade, R + grade]) if x > r_lo]
    # geometric panels toward the origin, then uniform panels of width <= h
    top = min(scale, h)
    geo = list(np.geomspace(r_lo, top, max(2, int(math.ceil(math.log2(top / r_lo))) + 1)))
    return _uniform_edges(r_lo, r_cut, h, geo + marks)


def full_potential_table(Z, params: PolarizationParamSet, model, r_cut=None, panel_width=3.0,
                         n_nodes=17) -> TabulatedPotential:
    """Tabulate the all-region potential as base + interpolated correction.

    ``r_cut`` defaults to R + 40 sqrt(C1) (40 sqrt(C1) for a point nucleus).
    ``panel_width`` (GeV^-1) must resolve the oscillation left by the
    first-region edge, whose wavelength is 2 pi / k_1 (about 9 GeV^-1 for the
    built-in set).
    """
    s = math.sqrt(params.first.C)
    if r_cut is None:
        r_cut = model.radius + 40.0 * s
    edges = _table_edges(model, s, float(r_cut), float(panel_width))
    base = _base_potential(Z, params, model)
    table = ChebyshevTable.build(lambda r: uehling_full(Z, params, model, r) - base(r),
                                 edges, n_nodes)
    return TabulatedPotential(base, table, isinstance(model, PointNucleus))


# --- leptonic loops ------------------------------------------------------

_LEPTON_MASS = {LoopSpecies.ELECTRON: M_E, LoopSpecies.MUON: M_MU}


def uehling_leptonic(species, Z, r):
    """One-loop Uehling potential of an electron or muon loop, point nucleus.

    -(2 Z alpha^2 / 3 pi r) int_1^inf exp(-2 m r t) (1 + 1/(2t^2)) sqrt(t^2-1)/t^2 dt
    """
    species = LoopSpecies(species)
    if species not in _LEPTON_MASS:
        raise PotentialError(f"{species.value} is not a lepton loop")
    m = _LEPTON_MASS[species]
    ra, scalar = _as_array(r)
    if np.any(ra <= 0):
        raise PotentialError("leptonic potential needs r > 0")
    out = []
    for ri in np.atleast_1d(ra):
        lam = 2.0 * m * float(ri)
        # substitute t = 1 + u / lam so the exponential weight is exp(-u)
        f = lambda u: (math.exp(-u) * (1.0 + 0.5 / (1.0 + u / lam) ** 2)
                       * math.sqrt((u / lam) * (2.0 + u / lam)) / (1.0 + u / lam) ** 2)
        val, _ = quad(f, 0.0, math.inf, epsabs=0.0, epsrel=1e-12, limit=400)
        out.append(-2.0 * Z * ALPHA ** 2 / (3.0 * math.pi * ri) * math.exp(-lam) * val / lam)
    out = np.array(out)
    return float(out[0]) if scalar else out


def leptonic_volume_integral(species, Z):
    """int d^3r of the leptonic Uehling potential (GeV^-2), by quadrature."""
    m = _LEPTON_MASS[LoopSpecies(species)]
    # substitute r = x / (2m): integrand decays like exp(-x)
    f = lambda x: 4.0 * math.pi * (x / (2 * m)) ** 2 * uehling_leptonic(species, Z, x / (2 * m)) / (2 * m)
    val, _ = quad(f, 0.0, math.inf, epsabs=0.0, epsrel=1e-10, limit=400)
    return val


# --- potential objects ---------------------------------------------------

@dataclass(frozen=True)
class RadialPotential:
    """Callable r (GeV^-1) -> potential energy (GeV)."""

    fn: Callable
    method: str
    r_min: float = 0.0
    r_max: float = math.inf

    def __call__(self, r):
        return self.fn(r)


@dataclass(frozen=True)
class PotentialSpec:
    species: LoopSpecies
    params: PolarizationParamSet
    model: object
    method: PotentialMethod = PotentialMethod.CLOSED_FORM


def make_potential(spec: PotentialSpec) -> RadialPotential:
    """Turn a potential specification into an evaluator."""
    species = LoopSpecies(spec.species)
    method = PotentialMethod(spec.method)
    model, params, Z = spec.model, spec.params, spec.model.Z
    if species is not LoopSpecies.HADRONIC:
        if not isinstance(model, PointNucleus):
            raise PotentialError("leptonic potentials are implemented for a point nucleus only")
        return RadialPotential(lambda r: uehling_leptonic(species, Z, r),
                               f"{species.value}:uehling", r_min=np.nextafter(0, 1))
    if method is PotentialMethod.CLOSED_FORM:
        if isinstance(model, PointNucleus):
            return RadialPotential(lambda r: uehling_point_approx(Z, params, r),
                                   method.value, r_min=np.nextafter(0, 1))
        if isinstance(model, SphereNucleus):
            R = model.R
            return RadialPotential(lambda r: uehling_sphere_closed(Z, params, R, r), method.value)
        raise PotentialError("closed-form potential exists for point and sphere models only")
    if method is PotentialMethod.CONVOLUTION:
        return RadialPotential(lambda r: uehling_convolved(Z, params, model, r), method.value)
    return RadialPotential(lambda r: uehling_full(Z, params, model, r), method.value,
                           r_min=np.nextafter(0, 1))


__all__ = [
    "PotentialError", "QuadratureError", "PotentialMethod", "PotentialSpec",
    "RadialPotential", "make_potential", "uehling_point_approx",
    "uehling_sphere_closed", "uehling_convolved", "uehling_full",
    "uehling_leptonic", "leptonic_volume_integral", "first_region_params",
    "ChebyshevTable", "ConvolvedTable", "TabulatedPotential",
    "convolved_potential_table", "full_potential_table",
]
