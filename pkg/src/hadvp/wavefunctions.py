"""Analytic Dirac-Coulomb bound states of a point nucleus.

With rho = 2 lambda r, lambda = sqrt(m^2 - E^2), gamma = sqrt(kappa^2 - (Z alpha)^2),
n_r = n - |kappa| and N = sqrt(n_r^2 + 2 n_r gamma + kappa^2), the radial
functions P = r g and Q = r f are

    P = C sqrt(m + E) rho^gamma e^{-rho/2} [(N - kappa) M(-n_r) - n_r M(1 - n_r)]
    Q = -C sqrt(m - E) rho^gamma e^{-rho/2} [(N - kappa) M(-n_r) + n_r M(1 - n_r)]

where M(a) = 1F1(a; 2 gamma + 1; rho) terminates.  P^2 + Q^2 is therefore
rho^{2 gamma} e^{-rho} times a polynomial, so the normalization is a finite
sum of Gamma functions, evaluated relative to Gamma(2 gamma + 1).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from hadvp.core import ALPHA, M_E

_SPECTRO = "spdfghik"
_LABEL_RE = re.compile(r"^\s*(\d+)\s*([a-z])\s*(?:_?\(?\s*(\d+)\s*/\s*2\s*\)?)?\s*$", re.I)


class QuantumNumberError(ValueError):
    pass


@dataclass(frozen=True)
class BoundStateLabel:
    """Hydrogenic state (n, kappa) of a lepton of mass ``mass`` around charge Z."""

    n: int
    kappa: int
    mass: float = M_E
    Z: int = 1

    def __post_init__(self):
        n, k = self.n, self.kappa
        if int(n) != n or n < 1:
            raise QuantumNumberError(f"n must be a positive integer, got {n}")
        if int(k) != k or k == 0:
            raise QuantumNumberError(f"kappa must be a nonzero integer, got {k}")
        if not -n <= k <= n - 1:
            raise QuantumNumberError(f"kappa={k} not allowed for n={n} (need -n <= kappa <= n-1)")
        if not self.mass > 0:
            raise QuantumNumberError(f"mass must be positive, got {self.mass}")
        if int(self.Z) != self.Z or self.Z < 1:
            raise QuantumNumberError(f"Z must be a positive integer, got {self.Z}")
        if self.Z * ALPHA >= abs(k):
            raise QuantumNumberError(
                f"Z alpha = {self.Z * ALPHA:.4f} >= |kappa| = {abs(k)}: gamma not real")

    @property
    def l(self) -> int:
        return self.kappa if self.kappa > 0 else -self.kappa - 1

    @property
    def j2(self) -> int:
        """Twice the total angular momentum."""
        return 2 * abs(self.kappa) - 1

    @property
    def n_r(self) -> int:
        return self.n - abs(self.kappa)

    @property
    def gamma(self) -> float:
        return math.sqrt(self.kappa ** 2 - (self.Z * ALPHA) ** 2)

    @property
    def name(self) -> str:
        return f"{self.n}{_SPECTRO[self.l]}{self.j2}/2"

    def with_(self, **changes) -> "BoundStateLabel":
        fields = dict(n=self.n, kappa=self.kappa, mass=self.mass, Z=self.Z)
        fields.update(changes)
        return BoundStateLabel(**fields)

    @classmethod
    def parse(cls, text: str, Z: int = 1, mass: float = M_E) -> "BoundStateLabel":
        """Parse '1s', '2s1/2', '2p1/2', '2p_3/2', ...; s states need no j."""
        m = _LABEL_RE.match(text)
        if not m:
            raise QuantumNumberError(f"cannot parse state label '{text}'")
        n = int(m.group(1))
        letter = m.group(2).lower()
        if letter not in _SPECTRO:
            raise QuantumNumberError(f"unknown orbital letter '{letter}' in '{text}'")
        l = _SPECTRO.index(letter)
        if m.group(3) is None:
            if l != 0:
                raise QuantumNumberError(f"state '{text}' needs j, e.g. {n}{letter}1/2")
            j2 = 1
        else:
            j2 = int(m.group(3))
        if j2 == 2 * l + 1:
            kappa = -(l + 1)
        elif j2 == 2 * l - 1:
            kappa = l
        else:
            raise QuantumNumberError(f"j={j2}/2 incompatible with l={l} in '{text}'")
        if l >= n:
            raise QuantumNumberError(f"l={l} not allowed for n={n} in '{text}'")
        return cls(n, kappa, mass, Z)


def sommerfeld_energy(n, kappa, Z, mass=M_E) -> float:
    """Point-nucleus Dirac eigenvalue (rest mass included)."""
    x2 = _sommerfeld_x2(n, kappa, Z)
    return mass / math.sqrt(1.0 + x2)


def binding_energy(n, kappa, Z, mass=M_E) -> float:
    """m - E, computed without cancellation."""
    x2 = _sommerfeld_x2(n, kappa, Z)
    root = math.sqrt(1.0 + x2)
    return mass * x2 / (root * (root + 1.0))


def _sommerfeld_x2(n, kappa, Z):
    za = Z * ALPHA
    g = math.sqrt(kappa * kappa - za * za)
    return (za / (n - abs(kappa) + g)) ** 2


def nonrel_density_at_origin(n: int, Z: int, mass: float = M_E, l: int = 0) -> float:
    """|psi(0)|^2 = (Z alpha m)^3 / (pi n^3) of a Schroedinger s state, GeV^3."""
    if l != 0:
        raise QuantumNumberError("density at the origin vanishes unless l = 0")
    if n < 1:
        raise QuantumNumberError(f"n must be >= 1, got {n}")
    return (Z * ALPHA * mass) ** 3 / (math.pi * n ** 3)


def _kummer_poly(a: int, b: float) -> np.ndarray:
    """Coefficients (ascending) of 1F1(-a; b; x) for integer a >= 0."""
    c = np.empty(a + 1)
    c[0] = 1.0
    for j in range(a):
        c[j + 1] = c[j] * (j - a) / ((b + j) * (j + 1))
    return c


@dataclass(frozen=True)
class RadialWavefunction:
    """Radial pair (g, f) with r^2 (g^2 + f^2) integrating to one.

    ``P`` and ``Q`` return r g and r f; ``g`` and ``f`` are derived.
    """

    label: BoundStateLabel
    energy: float
    P: Callable
    Q: Callable
    source: str = "analytic"

    def g(self, r):
        r = np.asarray(r, dtype=float)
        return self.P(r) / r

    def f(self, r):
        r = np.asarray(r, dtype=float)
        return self.Q(r) / r

    def radial_density(self, r):
        """r^2 (g^2 + f^2) = P^2 + Q^2."""
        return self.P(r) ** 2 + self.Q(r) ** 2


@dataclass(frozen=True)
class _CoulombStructure:
    # rho^{2 gamma} e^{-rho} sum_j dens[j] rho^j = P^2 + Q^2 before normalization
    lam: float
    gamma: float
    pg: np.ndarray
    pf: np.ndarray
    log_c: float
    dens: np.ndarray


def _structure(label: BoundStateLabel) -> _CoulombStructure:
    m = label.mass
    k = label.kappa
    nr = label.n_r
    g = label.gamma
    x2 = _sommerfeld_x2(label.n, k, label.Z)
    root = math.sqrt(1.0 + x2)
    m_minus_e = m * x2 / (root * (root + 1.0))
    m_plus_e = m * (1.0 + 1.0 / root)
    lam = m * math.sqrt(x2) / root
    N = math.sqrt(nr * nr + 2.0 * nr * g + k * k)
    b = 2.0 * g + 1.0
    m0 = _kummer_poly(nr, b)
    m1 = np.zeros(nr + 1)
    if nr > 0:
        m1[:nr] = _kummer_poly(nr - 1, b)
    pg = math.sqrt(m_plus_e) * ((N - k) * m0 - nr * m1)
    pf = -math.sqrt(m_minus_e) * ((N - k) * m0 + nr * m1)
    dens = np.convolve(pg, pg) + np.convolve(pf, pf)
    # sum_j dens_j Gamma(2g+1+j) / Gamma(2g+1) via the rising factorial
    poch = np.cumprod(np.concatenate([[1.0], b + np.arange(len(dens) - 1)]))
    s = float(np.dot(dens, poch))
    # int (P^2 + Q^2) dr = C^2 Gamma(2g+1) s / (2 lambda) = 1
    log_c = 0.5 * (math.log(2.0 * lam) - math.lgamma(b) - math.log(s))
    return _CoulombStructure(lam, g, pg, pf, log_c, dens)


def dirac_coulomb(label: BoundStateLabel) -> RadialWavefunction:
    """Normalized point-Coulomb Dirac state for ``label``."""
    st = _structure(label)
    two_lam = 2.0 * st.lam

    def envelope(r):
        rho = two_lam * np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", under="ignore"):
            env = np.exp(st.log_c + st.gamma * np.log(rho) - 0.5 * rho)
        return rho, np.where(rho > 0, env, 0.0)

    def P(r):
        rho, env = envelope(r)
        return env * np.polynomial.polynomial.polyval(rho, st.pg)

    def Q(r):
        rho, env = envelope(r)
        return env * np.polynomial.polynomial.polyval(rho, st.pf)

    E = sommerfeld_energy(label.n, label.kappa, label.Z, label.mass)
    return RadialWavefunction(label, E, P, Q, source="analytic")


def coulomb_moment_e1(label: BoundStateLabel, s: float) -> float:
    """int_0^inf (P^2 + Q^2) E1(r/s) / r dr for the point-Coulomb state.

    Uses int_0^inf x^{mu-1} e^{-beta x} E1(x/s) dx
    = s^mu Gamma(mu) / mu * 2F1(mu, mu; mu+1; -beta s) term by term.
    """
    from hadvp.specfun import hyp2f1

    st = _structure(label)
    z = 2.0 * st.lam * s
    total = 0.0
    log_z = math.log(z)
    for j, dj in enumerate(st.dens):
        if dj == 0.0:
            continue
        mu = 2.0 * st.gamma + j
        log_term = (2.0 * st.log_c + mu * log_z + math.lgamma(mu) - math.log(mu))
        total += dj * math.exp(log_term) * hyp2f1(mu, mu, mu + 1.0, -z)
    return total
