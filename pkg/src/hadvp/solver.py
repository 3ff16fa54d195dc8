"""Radial Dirac equation for extended nuclei on a B-spline basis.

The unknowns are P = r g and Q = r f.  In units of the lepton mass the
radial Hamiltonian is

    H = [[V + 1,        -d/dr + kappa/r],
         [d/dr + kappa/r,  V - 1        ]]

and each B-spline B_i contributes two dual-kinetic-balance vectors

    (B_i, (B_i' + kappa B_i / r) / 2)   and   ((B_i' - kappa B_i / r) / 2, B_i),

which keeps spurious solutions out of the bound spectrum.  The first and
last two B-splines are dropped so that every component vanishes at the box
edge; for |kappa| > 1 the second spline is dropped too so the boundary
term at the origin vanishes.  The generalized eigenproblem H c = E S c is
solved densely.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import BSpline
from scipy.linalg import eigh

from hadvp.core import ALPHA
from hadvp.wavefunctions import BoundStateLabel, RadialWavefunction, dirac_coulomb


class SolverError(RuntimeError):
    pass


class StateNotFoundError(SolverError):
    pass


class ConvergenceError(SolverError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    """Discretization settings; lengths in GeV^-1.

    ``r_max`` defaults to 40 times the largest <r> among ``states`` (or of
    the 2p states if none are given).  ``r_first`` is the first nonzero
    knot; it defaults to R/100 (R the nuclear length scale).
    """

    order: int = 7
    n_knots: int = 200
    r_max: float | None = None
    r_first: float | None = None
    grid: str = "exponential"
    gauss_points: int = 12
    states: tuple = ()
    tol: float | None = None

    def __post_init__(self):
        if self.order < 4:
            raise ValueError(f"spline order must be >= 4, got {self.order}")
        if self.n_knots < 20:
            raise ValueError(f"need at least 20 knots, got {self.n_knots}")
        if self.grid not in ("exponential", "polynomial-exponential"):
            raise ValueError(f"unknown grid type '{self.grid}'")
        if self.r_max is not None and not self.r_max > 0:
            raise ValueError("r_max must be positive")

    def refined(self, factor: float = 1.5) -> "SolverConfig":
        return SolverConfig(self.order, int(round(self.n_knots * factor)), self.r_max,
                            self.r_first, self.grid, self.gauss_points, self.states, None)


def _mean_radius(n, l, Z, mass):
    return (3 * n * n - l * (l + 1)) / (2.0 * Z * ALPHA * mass)


def make_knots(R, r_first, r_max, n_knots, grid="exponential", min_inside=8):
    """Breakpoints from 0 to r_max with one placed exactly at R (if R > 0)."""
    if grid == "exponential":
        pts = np.geomspace(r_first, r_max, n_knots - 1)
    else:
        # linear near the origin, exponential far out
        x = np.linspace(0.0, 1.0, n_knots)[1:]
        beta = math.log(r_max / r_first)
        pts = r_first * np.expm1(beta * x) / math.expm1(beta / (n_knots - 1))
        pts *= r_max / pts[-1]
    if R > 0:
        inside = pts[pts < R]
        outside = pts[pts > R]
        if len(inside) < min_inside:
            inside = np.geomspace(min(r_first, R / 100.0), R, min_inside + 1)[:-1]
        # snap: drop the knot nearest to R on the outside if it crowds R
        if len(outside) and outside[0] < R * 1.0 + 0.25 * (R - inside[-1]):
            outside = outside[1:]
        pts = np.concatenate([inside, [R], outside])
    return np.concatenate([[0.0], pts])


@dataclass(frozen=True)
class _Basis:
    t: np.ndarray
    deg: int
    keep: np.ndarray  # indices of the B-splines used
    x: np.ndarray     # quadrature nodes (mass units)
    w: np.ndarray
    B: np.ndarray
    dB: np.ndarray
    d2B: np.ndarray


def _basis(breaks, order, n_gauss):
    deg = order - 1
    t = np.concatenate([[breaks[0]] * deg, breaks, [breaks[-1]] * deg])
    n = len(t) - order
    nodes, weights = np.polynomial.legendre.leggauss(n_gauss)
    a, b = breaks[:-1], breaks[1:]
    x = (0.5 * (b - a)[:, None] * (nodes[None, :] + 1.0) + a[:, None]).ravel()
    w = (0.5 * (b - a)[:, None] * weights[None, :]).ravel()
    spl = BSpline(t, np.eye(n), deg, extrapolate=False)
    B = spl(x)
    dB = spl.derivative(1)(x)
    d2B = spl.derivative(2)(x)
    return _Basis(t, deg, np.arange(n), x, w, B, dB, d2B)


@dataclass
class SolvedState:
    label: BoundStateLabel
    energy: float           # GeV, rest mass included
    r: np.ndarray           # quadrature nodes, GeV^-1
    weights: np.ndarray     # GeV^-1
    P: np.ndarray           # r g on the nodes, GeV^{1/2}
    Q: np.ndarray
    nodes: int
    spurious: bool = False
    _spline: tuple = field(default=None, repr=False)

    def as_wavefunction(self) -> RadialWavefunction:
        """Callable (P, Q) evaluating the B-spline expansion anywhere."""
        t, deg, c1, c2, kappa, mass = self._spline

        s1 = BSpline(t, c1, deg, extrapolate=False)
        s2 = BSpline(t, c2, deg, extrapolate=False)
        d1 = s1.derivative()
        d2 = s2.derivative()
        sq = math.sqrt(mass)

        def comp(r, which):
            x = np.asarray(r, dtype=float) * mass
            with np.errstate(divide="ignore", invalid="ignore"):
                b1, b2 = np.nan_to_num(s1(x)), np.nan_to_num(s2(x))
                db1, db2 = np.nan_to_num(d1(x)), np.nan_to_num(d2(x))
                if which == "P":
                    out = b1 + np.where(x > 0, 0.5 * (db2 - kappa * b2 / x), 0.5 * db2 * (1 - kappa))
                else:
                    out = b2 + np.where(x > 0, 0.5 * (db1 + kappa * b1 / x), 0.5 * db1 * (1 + kappa))
            return out * sq

        return RadialWavefunction(self.label, self.energy,
                                  lambda r: comp(r, "P"), lambda r: comp(r, "Q"),
                                  source="b-spline")


@dataclass(frozen=True)
class SpectrumResult:
    Z: int
    mass: float
    states: dict            # (n, kappa) -> SolvedState
    spurious: tuple         # SolvedStates rejected by the node check
    config: SolverConfig
    n_basis: int

    def __getitem__(self, key):
        if isinstance(key, BoundStateLabel):
            key = (key.n, key.kappa)
        try:
            return self.states[key]
        except KeyError:
            raise StateNotFoundError(
                f"state (n, kappa) = {key} not in the computed spectrum; "
                f"available: {sorted(self.states)}") from None


def _count_nodes(P, Q, w):
    # ignore the far tail (remaining norm < 1e-10), where basis noise
    # produces sign flips of relative size 1e-6
    dens = w * (P * P + Q * Q)
    tail = np.cumsum(dens[::-1])[::-1]
    amp = np.abs(P)
    use = (tail > 1e-10 * tail[0]) & (amp > 1e-4 * amp.max())
    s = np.sign(P[use])
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _solve_kappa(basis, kappa, V, Z, mass):
    B, dB, d2B, x, w = basis.B, basis.dB, basis.d2B, basis.x, basis.w
    n = B.shape[1]
    drop = {0, n - 1, n - 2}
    if abs(kappa) > 1:
        drop.add(1)
    keep = np.array([i for i in range(n) if i not in drop])
    B, dB, d2B = B[:, keep], dB[:, keep], d2B[:, keep]
    xi = x[:, None]
    k = kappa
    # components of the two DKB families and their derivatives
    P1, Q1 = B, 0.5 * (dB + k * B / xi)
    dP1, dQ1 = dB, 0.5 * (d2B + k * dB / xi - k * B / xi ** 2)
    P2, Q2 = 0.5 * (dB - k * B / xi), B
    dP2, dQ2 = 0.5 * (d2B - k * dB / xi + k * B / xi ** 2), dB
    P = np.hstack([P1, P2])
    Q = np.hstack([Q1, Q2])
    dP = np.hstack([dP1, dP2])
    dQ = np.hstack([dQ1, dQ2])
    wv = w[:, None]
    HP = (V + 1.0)[:, None] * P + (-dQ + k * Q / xi)
    HQ = (dP + k * P / xi) + (V - 1.0)[:, None] * Q
    H = P.T @ (wv * HP) + Q.T @ (wv * HQ)
    S = P.T @ (wv * P) + Q.T @ (wv * Q)
    asym = np.max(np.abs(H - H.T)) / np.max(np.abs(H))
    if asym > 1e-8:
        raise SolverError(f"Hamiltonian matrix not symmetric (relative {asym:.2e})")
    H = 0.5 * (H + H.T)
    try:
        evals, evecs = eigh(H, S, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"generalized eigensolver failed for kappa={kappa}: {exc}") from exc
    return evals, evecs, keep, P, Q


def _default_r_max(Z, mass, states):
    if states:
        return 40.0 * max(_mean_radius(s.n, s.l, Z, mass) for s in states)
    return 40.0 * _mean_radius(2, 1, Z, mass)


def solve_dirac_fns(Z, model, extra_potential=None, config: SolverConfig | None = None,
                    mass=None, kappas=None, potential_scale=1.0) -> SpectrumResult:
    """Bound spectrum of the Dirac equation in the field of ``model``.

    ``extra_potential`` (GeV^-1 -> GeV callable), multiplied by
    ``potential_scale``, is added to the nuclear Coulomb potential.  The
    kappa blocks solved are those of ``config.states`` or ``kappas``.
    """
    config = config or SolverConfig()
    if model.Z != Z:
        raise SolverError(f"model charge {model.Z} differs from Z={Z}")
    states = tuple(config.states)
    if mass is None:
        if not states:
            raise SolverError("lepton mass needed: pass mass= or target states")
        mass = states[0].mass
    if any(s.mass != mass or s.Z != Z for s in states):
        raise SolverError("all target states must share the lepton mass and Z")
    if kappas is None:
        kappas = sorted({s.kappa for s in states}) or [-1]
    R = model.radius
    r_max = config.r_max or _default_r_max(Z, mass, states)
    r_first = config.r_first or (R / 100.0 if R > 0 else 1e-4 / (Z * ALPHA * mass))
    breaks = make_knots(R, r_first, r_max, config.n_knots, config.grid) * mass
    basis = _basis(breaks, config.order, config.gauss_points)
    r = basis.x / mass
    V = np.asarray(model.coulomb_potential(r), dtype=float)
    if extra_potential is not None:
        V = V + potential_scale * np.asarray(extra_potential(r), dtype=float)
    Vu = V / mass

    found = {}
    rejected = []
    n_basis = 0
    for kappa in kappas:
        evals, evecs, keep, Pm, Qm = _solve_kappa(basis, kappa, Vu, Z, mass)
        n_basis = max(n_basis, len(evals))
        l = kappa if kappa > 0 else -kappa - 1
        bound = np.nonzero((evals > -1.0) & (evals < 1.0))[0]
        next_n = l + 1
        for idx in bound:
            c = evecs[:, idx]
            P = (Pm @ c) * math.sqrt(mass)
            Q = (Qm @ c) * math.sqrt(mass)
            nodes = _count_nodes(P, Q, basis.w)
            n_guess = nodes + l + 1
            try:
                label = BoundStateLabel(n_guess, kappa, mass, Z)
            except ValueError:
                label = None
            if label is not None and n_guess <= 12:
                # phase of the analytic point-Coulomb state with the same label
                ref = dirac_coulomb(label)
                if np.sum(basis.w * (P * ref.P(r) + Q * ref.Q(r))) < 0:
                    c, P, Q = -c, -P, -Q
            half = len(keep)
            c1 = np.zeros(basis.B.shape[1])
            c2 = np.zeros(basis.B.shape[1])
            c1[keep] = c[:half]
            c2[keep] = c[half:]
            st = SolvedState(label, float(evals[idx]) * mass, r, basis.w / mass, P, Q, nodes,
                             _spline=(basis.t, basis.deg, c1, c2, kappa, mass))
            if label is None or n_guess != next_n:
                st.spurious = True
                rejected.append(st)
                continue
            found[(n_guess, kappa)] = st
            next_n += 1
    result = SpectrumResult(Z, mass, found, tuple(rejected), config, n_basis)
    for s in states:
        result[s]  # raises if a target is missing
    if config.tol is not None and states:
        fine = solve_dirac_fns(Z, model, extra_potential, config.refined(), mass, kappas,
                               potential_scale)
        for s in states:
            err = abs(fine[s].energy - result[s].energy)
            if err > config.tol * abs(result[s].energy):
                raise ConvergenceError(
                    f"{s.name}: eigenvalue changed by {err:.3e} GeV under refinement "
                    f"(tolerance {config.tol:.1e} relative)")
    return result


def expectation_value(state: SolvedState, potential) -> float:
    """<V> = sum_w V(r) (P^2 + Q^2) on the state's quadrature grid, GeV."""
    V = np.asarray(potential(state.r), dtype=float)
    if V.shape != state.r.shape:
        raise SolverError(f"potential returned shape {V.shape} on a grid of {state.r.shape}")
    return float(np.sum(state.weights * V * (state.P ** 2 + state.Q ** 2)))


def eigenvalue_shift(label: BoundStateLabel, model, potential, config: SolverConfig | None = None,
                     scale: float | str = 1.0) -> float:
    """Energy shift from solving with +s and -s times ``potential``.

    Returns [E(+s) - E(-s)] / (2 s): the first-order shift with the
    quadratic term cancelled.  ``scale='auto'`` magnifies the potential so
    the shifted eigenvalues differ by about 1e-5 of the binding energy,
    lifting the difference above eigensolver roundoff.
    """
    config = config or SolverConfig(states=(label,))
    if label not in config.states:
        config = SolverConfig(config.order, config.n_knots, config.r_max, config.r_first,
                              config.grid, config.gauss_points, tuple(config.states) + (label,))
    if scale == "auto":
        base = solve_dirac_fns(label.Z, model, None, config)
        st = base[label]
        est = abs(expectation_value(st, potential))
        bind = label.mass - st.energy
        scale = max(1.0, 1e-5 * bind / est) if est > 0 else 1.0
    s = float(scale)
    up = solve_dirac_fns(label.Z, model, potential, config, potential_scale=s)[label].energy
    dn = solve_dirac_fns(label.Z, model, potential, config, potential_scale=-s)[label].energy
    return (up - dn) / (2.0 * s)
