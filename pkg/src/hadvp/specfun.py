"""Special functions for the closed-form potentials and shifts.

Generalized exponential integrals E_n, a real-argument Gauss
hypergeometric function restricted to z <= 0, and the spherical Bessel
functions j0 and j1.  Everything is vectorized over the real argument.
"""
from __future__ import annotations

import math

import numpy as np

EULER_GAMMA = 0.57721566490153286061

_EPS = 1e-16
_FPMIN = 1e-300
_MAXIT = 2000


class SpecialFunctionError(ArithmeticError):
    """Raised when a special function cannot be evaluated to accuracy."""


def _expint_series(n, x):
    # ascending series, valid and accurate for 0 < x <= 1
    if n == 1:
        ans = -np.log(x) - EULER_GAMMA
    else:
        ans = np.full_like(x, 1.0 / (n - 1))
    fact = np.ones_like(x)
    psi_nm1 = -EULER_GAMMA + sum(1.0 / k for k in range(1, n))
    for i in range(1, _MAXIT):
        fact = fact * (-x / i)
        if i != n - 1:
            term = -fact / (i - n + 1)
        else:
            term = fact * (-np.log(x) + psi_nm1)
        ans = ans + term
        if np.all(np.abs(term) <= np.abs(ans) * _EPS):
            return ans
    raise SpecialFunctionError(f"E_{n} series did not converge")


def _expint_cf_scaled(n, x):
    # modified Lentz evaluation of exp(x) * E_n(x), x > 1
    b = x + n
    c = np.full_like(x, 1.0 / _FPMIN)
    d = 1.0 / b
    h = d.copy()
    done = np.zeros(x.shape, dtype=bool)
    for i in range(1, _MAXIT):
        an = -i * (n - 1 + i)
        b = b + 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h = np.where(done, h, h * delta)
        done |= np.abs(delta - 1.0) < _EPS
        if done.all():
            return h
    raise SpecialFunctionError(f"E_{n} continued fraction did not converge")


def expint_scaled(n, x):
    """Return exp(x) * E_n(x).

    The scaled form stays finite for large ``x`` where E_n itself
    underflows.
    """
    if int(n) != n or n < 0:
        raise ValueError(f"order must be a non-negative integer, got {n}")
    n = int(n)
    xa = np.asarray(x, dtype=float)
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    if np.any(np.isnan(xa)):
        raise ValueError("expint argument is NaN")
    if n <= 1 and np.any(xa <= 0.0):
        raise ValueError(f"E_{n}(x) requires x > 0")
    if np.any(xa < 0.0):
        raise ValueError("E_n(x) requires x >= 0")

    out = np.empty_like(xa)
    if n == 0:
        out[:] = 1.0 / xa
    else:
        zero = xa == 0.0
        small = (xa <= 1.0) & ~zero
        large = xa > 1.0
        if zero.any():
            out[zero] = 1.0 / (n - 1)
        if small.any():
            xs = xa[small]
            out[small] = _expint_series(n, xs) * np.exp(xs)
        if large.any():
            out[large] = _expint_cf_scaled(n, xa[large])
    return out[0] if scalar else out


def expint(n, x):
    """Generalized exponential integral E_n(x) = int_1^inf exp(-x t) / t^n dt.

    Series for x <= 1, continued fraction above.  E_0 and E_1 diverge at
    x = 0 and raise ``ValueError`` there; for large x the result underflows
    gracefully to 0.
    """
    xa = np.asarray(x, dtype=float)
    with np.errstate(under="ignore"):
        return expint_scaled(n, xa) * np.exp(-xa)


def expint_diff(n, u, v):
    """E_n(u) - E_n(v) for 0 <= u <= v without catastrophic cancellation.

    The common factor exp(-u) is pulled out.  For v - u < min(u, 1/2) the
    remainder is the integral of exp(u) E_{n-1} over [u, v] (since
    d/dx E_n = -E_{n-1}), done with 16-point Gauss-Legendre; otherwise
    the scaled functions are subtracted directly, which then loses at
    most a factor 1 - exp(-1/2).
    """
    if n < 1:
        raise ValueError("expint_diff requires n >= 1")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u, v = np.broadcast_arrays(u, v)
    scalar = u.ndim == 0
    u = np.atleast_1d(u).astype(float)
    v = np.atleast_1d(v).astype(float)
    if np.any(v < u):
        raise ValueError("expint_diff requires u <= v")
    out = np.empty_like(u)
    width = v - u
    narrow = (u > 0.0) & (width < 0.5) & (width < u)
    wide = ~narrow
    with np.errstate(under="ignore"):
        if wide.any():
            uw, vw = u[wide], v[wide]
            out[wide] = np.exp(-uw) * (expint_scaled(n, uw)
                                       - np.exp(-(vw - uw)) * expint_scaled(n, vw))
        if narrow.any():
            un, wn = u[narrow], width[narrow]
            nodes, weights = np.polynomial.legendre.leggauss(16)
            h = 0.5 * wn[:, None] * (nodes[None, :] + 1.0)
            vals = expint_scaled(n - 1, un[:, None] + h) * np.exp(-h)
            out[narrow] = np.exp(-un) * 0.5 * wn * (vals @ weights)
    return out[0] if scalar else out


def _hyp2f1_series(a, b, c, z, maxit=200000):
    term = 1.0
    total = 1.0
    for k in range(maxit):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total
        if term == 0.0:
            return total
    raise SpecialFunctionError(
        f"2F1({a}, {b}; {c}; {z}) series not converged after {maxit} terms, "
        f"last term {term:.3e}, partial sum {total:.16e}")


def _hyp2f1_euler(a, b, c, z):
    # Euler integral; requires c > b > 0
    from scipy.integrate import quad

    lg = math.lgamma(c) - math.lgamma(b) - math.lgamma(c - b)

    def integrand(t):
        return t ** (b - 1.0) * (1.0 - t) ** (c - b - 1.0) * (1.0 - z * t) ** (-a)

    val, err = quad(integrand, 0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=500)
    if err > 1e-10 * abs(val):
        raise SpecialFunctionError(
            f"2F1 Euler integral inaccurate: value {val}, error estimate {err}")
    return math.exp(lg) * val


def hyp2f1(a, b, c, z):
    """Gauss hypergeometric 2F1(a, b; c; z) for real parameters and z <= 0.

    Uses the Pfaff transformation
    2F1(a,b;c;z) = (1-z)^-a 2F1(a, c-b; c; z/(z-1)), which maps z <= 0
    into [0, 1).  For z < -9 (transformed argument above 0.9) the Euler
    integral is used instead when c > b > 0.
    """
    if c <= 0 and float(c).is_integer():
        raise ValueError(f"2F1 undefined for non-positive integer c={c}")
    z = float(z)
    if z > 0.0:
        raise ValueError(f"2F1 implemented for z <= 0 only, got z={z}")
    if z == 0.0:
        return 1.0
    if z > -0.5:
        return _hyp2f1_series(a, b, c, z)
    w = z / (z - 1.0)
    if w <= 0.9:
        return (1.0 - z) ** (-a) * _hyp2f1_series(a, c - b, c, w)
    if c > b > 0:
        return _hyp2f1_euler(a, b, c, z)
    if c > a > 0:
        return _hyp2f1_euler(b, a, c, z)
    raise ValueError(
        f"2F1({a}, {b}; {c}; {z}): argument too negative for the series "
        "and no convergent Euler integral (needs c > b > 0)")


def sph_bessel_j(k, x):
    """Spherical Bessel function j_k(x) for k in {0, 1}."""
    if k not in (0, 1):
        raise ValueError("only j0 and j1 are implemented")
    xa = np.asarray(x, dtype=float)
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    out = np.empty_like(xa)
    # series below 0.1: the closed form for j1 cancels like eps/x^2
    small = np.abs(xa) < 0.1
    xs = xa[small]
    xl = xa[~small]
    x2 = xs * xs
    if k == 0:
        out[small] = 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0 * (1.0 - x2 / 110.0))))
        out[~small] = np.sin(xl) / xl
    else:
        out[small] = xs / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0 * (1.0 - x2 / 54.0 * (1.0 - x2 / 88.0 * (1.0 - x2 / 130.0)))))
        out[~small] = np.sin(xl) / xl ** 2 - np.cos(xl) / xl
    return out[0] if scalar else out
