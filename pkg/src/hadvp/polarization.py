"""Parametrized hadronic vacuum polarization and the one-loop leptonic one.

The hadronic function is piecewise in the momentum magnitude q (GeV)::

    Re Pi(-q^2) = A_i + B_i ln(1 + C_i q^2),   k_{i-1} <= q < k_i

Parameter-set file format (``# hadvp-params v1`` header, one region per
line, whitespace separated, ``#`` starts a comment)::

    # hadvp-params v1
    label builtin-2001
    # k_lo   k_hi   A   B   C[GeV^-2]
    0.0      0.7    0.0 0.0023092 3.9925370
    ...

Edges are numbers in GeV, ``mZ`` for the Z mass or ``inf``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from hadvp.core import ALPHA, M_Z

FORMAT_HEADER = "# hadvp-params v1"


class ParameterSetError(ValueError):
    """Malformed or inconsistent polarization parameter set."""


class LoopSpecies(str, enum.Enum):
    HADRONIC = "hadronic"
    ELECTRON = "electron-loop"
    MUON = "muon-loop"


@dataclass(frozen=True)
class Region:
    k_lo: float
    k_hi: float
    A: float
    B: float
    C: float


@dataclass(frozen=True)
class PolarizationParamSet:
    regions: tuple
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "regions", tuple(self.regions))
        _validate(self.regions)

    @property
    def first(self) -> Region:
        return self.regions[0]

    @property
    def edges(self) -> np.ndarray:
        return np.array([r.k_lo for r in self.regions] + [self.regions[-1].k_hi])

    def __len__(self):
        return len(self.regions)


def _validate(regions):
    if not regions:
        raise ParameterSetError("parameter set has no regions")
    if regions[0].k_lo != 0.0:
        raise ParameterSetError(f"region 1 must start at q=0, starts at {regions[0].k_lo}")
    for i, reg in enumerate(regions, start=1):
        if not reg.k_hi > reg.k_lo:
            raise ParameterSetError(
                f"region {i}: upper edge {reg.k_hi} not above lower edge {reg.k_lo}")
        if not reg.C > 0.0:
            raise ParameterSetError(f"region {i}: C must be positive, got {reg.C}")
        if reg.B < 0.0:
            raise ParameterSetError(f"region {i}: B must be non-negative, got {reg.B}")
        if i < len(regions) and regions[i].k_lo != reg.k_hi:
            raise ParameterSetError(
                f"region {i + 1}: lower edge {regions[i].k_lo} does not match "
                f"upper edge {reg.k_hi} of region {i}")


_TABLE_2001 = (
    (0.0, 0.7, 0.0, 0.0023092, 3.9925370),
    (0.7, 2.0, 0.0, 0.0022333, 4.2191779),
    (2.0, 4.0, 0.0, 0.0024402, 3.2496684),
    (4.0, 10.0, 0.0, 0.0027340, 2.0995092),
    (10.0, M_Z, 0.0010485, 0.0029431, 1.0),
    (M_Z, 1e4, 0.0012234, 0.0029237, 1.0),
    (1e4, 1e5, 0.0016894, 0.0028984, 1.0),
)


def builtin_params() -> PolarizationParamSet:
    """The built-in seven-region parameterization (2001 fit)."""
    return PolarizationParamSet(tuple(Region(*row) for row in _TABLE_2001),
                                label="builtin-2001")


def first_region_params(params: PolarizationParamSet) -> PolarizationParamSet:
    """Single region carrying the first region's parameters out to infinity."""
    r = params.first
    return PolarizationParamSet((Region(0.0, math.inf, r.A, r.B, r.C),),
                                label=f"{params.label}:first-region")


def re_pi_hadronic(q, params: PolarizationParamSet):
    """Re Pi(-q^2) of the piecewise parameterization.

    Above the last edge the last region's parameters are used.
    """
    qa = np.asarray(q, dtype=float)
    if np.any(qa < 0):
        raise ValueError("momentum must be non-negative")
    edges = params.edges
    idx = np.clip(np.searchsorted(edges, qa, side="right") - 1, 0, len(params) - 1)
    A = np.array([r.A for r in params.regions])[idx]
    B = np.array([r.B for r in params.regions])[idx]
    C = np.array([r.C for r in params.regions])[idx]
    out = A + B * np.log1p(C * qa * qa)
    return float(out) if out.ndim == 0 else out


def re_pi_first_region(q, params: PolarizationParamSet):
    """Re Pi(-q^2) with the first region's parameters used for every q."""
    qa = np.asarray(q, dtype=float)
    if np.any(qa < 0):
        raise ValueError("momentum must be non-negative")
    r = params.first
    out = r.A + r.B * np.log1p(r.C * qa * qa)
    return float(out) if out.ndim == 0 else out


_LEPTON_SERIES = (0.0, 1 / 15, -1 / 140, 1 / 945, -1 / 5544, 1 / 30030,
                  -1 / 154440, 1 / 765765, -1 / 3695120, 1 / 17459442)


def re_pi_leptonic(q, mass):
    """One-loop renormalized Pi(-q^2) of a lepton of the given mass.

    Positive for spacelike momenta, ~ alpha q^2 / (15 pi m^2) at small q.
    """
    qa = np.asarray(q, dtype=float)
    x = (qa / mass) ** 2
    out = np.empty_like(x)
    small = x < 0.1
    # Taylor series in q^2/m^2; the closed form cancels badly below x ~ 1
    out[small] = ALPHA / math.pi * np.polynomial.polynomial.polyval(x[small], _LEPTON_SERIES)
    xl = x[~small]
    beta = np.sqrt(1.0 + 4.0 / xl)
    out[~small] = ALPHA / (3.0 * math.pi) * (
        -5.0 / 3.0 + 4.0 / xl
        + (1.0 - 2.0 / xl) * beta * np.log((beta + 1.0) / (beta - 1.0)))
    return float(out) if out.ndim == 0 else out


def _parse_edge(tok: str) -> float:
    t = tok.strip().lower()
    if t == "mz":
        return M_Z
    if t in ("inf", "+inf", "infinity"):
        return math.inf
    return float(tok)


def parse_params(text: str, source: str = "<string>") -> PolarizationParamSet:
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_HEADER:
        raise ParameterSetError(f"{source}: first line must be '{FORMAT_HEADER}'")
    label = Path(source).stem
    regions = []
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("label"):
            label = line[len("label"):].strip()
            continue
        fields = line.split()
        if len(fields) != 5:
            raise ParameterSetError(
                f"{source}:{lineno}: expected 5 columns (k_lo k_hi A B C), got {len(fields)}")
        try:
            k_lo, k_hi = _parse_edge(fields[0]), _parse_edge(fields[1])
            A, B, C = (float(f) for f in fields[2:])
        except ValueError as exc:
            raise ParameterSetError(f"{source}:{lineno}: {exc}") from None
        regions.append(Region(k_lo, k_hi, A, B, C))
    try:
        return PolarizationParamSet(tuple(regions), label=label)
    except ParameterSetError as exc:
        raise ParameterSetError(f"{source}: {exc}") from None


def load_params(path) -> PolarizationParamSet:
    """Read and validate a parameter-set file."""
    path = Path(path)
    return parse_params(path.read_text(), source=str(path))


def format_params(params: PolarizationParamSet) -> str:
    def edge(x):
        if math.isinf(x):
            return "inf"
        if x == M_Z:
            return "mZ"
        return repr(x)

    out = [FORMAT_HEADER, f"label {params.label}", "# k_lo k_hi A B C[GeV^-2]"]
    for r in params.regions:
        out.append(f"{edge(r.k_lo)} {edge(r.k_hi)} {r.A!r} {r.B!r} {r.C!r}")
    return "\n".join(out) + "\n"
