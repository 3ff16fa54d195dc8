"""Acceptance gate: one PASS/FAIL line per criterion, printed in the summary."""
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from hadvp.core import M_E, M_MU
from hadvp.nuclear import FermiNucleus, PointNucleus, SphereNucleus, builtin_radii
from hadvp.polarization import builtin_params
from hadvp.potentials import uehling_convolved, uehling_sphere_closed
from hadvp import reference_tables as ref
from hadvp.shifts import (
    ShiftRequest, muonic_vp_ratio, shift_1s_closed_form, shift_expansion, shift_nonrel,
    shift_perturbative,
)
from hadvp.wavefunctions import BoundStateLabel

pytestmark = pytest.mark.slow

RESULTS = {}
P = builtin_params()
RADII = builtin_radii()


def record(n, ok, detail):
    RESULTS[n] = (bool(ok), detail)
    assert ok, f"criterion {n}: {detail}"


def within(value, quoted):
    return abs(value - quoted.value) <= quoted.uncertainty


def fns_request(Z, state, method="rel-fns-approx", mass=M_E, **kw):
    e = RADII[Z]
    return ShiftRequest(BoundStateLabel.parse(state, Z, mass), SphereNucleus.from_rms(Z, e.r_rms_fm),
                        method, radius_uncertainty_fm=e.uncertainty_fm, **kw)


def test_criterion_01_hydrogen_nonrel():
    label = BoundStateLabel(1, -1, M_E, 1)
    v = shift_nonrel(label)
    n = 2000
    t0 = time.perf_counter()
    for _ in range(n):
        shift_nonrel(label)
    dt = (time.perf_counter() - t0) / n
    rel = abs(v / -1.395e-11 - 1)
    record(1, rel < 5e-3 and dt < 1e-3, f"{v:.5e} eV, rel dev {rel:.2e} (tol 5e-3), {dt * 1e6:.1f} us/call")


def test_criterion_02_table_ii():
    t0 = time.perf_counter()
    bad = []
    for Z in ref.ZS:
        point = PointNucleus(Z)
        label = BoundStateLabel(1, -1, M_E, Z)
        values = {
            "nonrel-point": shift_perturbative(ShiftRequest(label, point, "nonrel-point")).value,
            "rel-point-analytic": shift_perturbative(ShiftRequest(label, point, "rel-point-analytic")).value,
            "rel-fns-approx": shift_perturbative(fns_request(Z, "1s")).value,
        }
        for col, v in values.items():
            if not within(v, ref.table_ii(Z, col)):
                bad.append(f"Z={Z} {col} {v:.4e} vs {ref.table_ii(Z, col).text}")
    dt = time.perf_counter() - t0
    record(2, not bad and dt < 600, f"21 cells, {len(bad)} outside quoted uncertainty, {dt:.0f} s "
                                    f"{'; '.join(bad)}")


def test_criterion_03_table_iii():
    bad = []
    for Z in ref.ZS:
        for st in ref.TABLE_III_STATES:
            v = shift_perturbative(fns_request(Z, st)).value
            if not within(v, ref.table_iii(Z, st)):
                bad.append(f"Z={Z} {st} {v:.4e} vs {ref.table_iii(Z, st).text}")
    record(3, not bad, f"21 cells, {len(bad)} outside quoted uncertainty {'; '.join(bad)}")


def test_criterion_04_table_iv():
    bad = []
    lines = []
    for st in ref.TABLE_IV:
        label = BoundStateLabel.parse(st, 1, M_MU)
        full = shift_perturbative(fns_request(1, st, "rel-fns-full", M_MU)).value * 1e3
        q = ref.table_iv(st, "rel-fns-full")
        if not within(full, q):
            bad.append(f"{st} full {full:.4e} vs {q.text}")
        if label.l == 0:
            nonrel = shift_nonrel(label) * 1e3
        else:
            nonrel = shift_expansion(label, 6) * 1e3
        qn = ref.table_iv(st, "nonrel-point")
        if abs(nonrel / qn.value - 1) > 0.015:
            bad.append(f"{st} nonrel {nonrel:.4e} vs {qn.text}")
        lines.append(f"{st} {full:.4e}/{nonrel:.4e}")
    record(4, not bad, f"meV full/nonrel: {', '.join(lines)} {'; '.join(bad)}")


def test_criterion_05_z96():
    label = BoundStateLabel(1, -1, M_E, 96)
    model = SphereNucleus.from_rms(96, ref.Z96_R_RMS_FM)
    approx = shift_perturbative(ShiftRequest(label, model, "rel-fns-approx", numeric_uncertainty=False)).value
    full = shift_perturbative(ShiftRequest(label, model, "rel-fns-full", numeric_uncertainty=False)).value
    devs = [abs(approx / full - 1), abs(approx / ref.Z96_1S_EV - 1), abs(full / ref.Z96_1S_EV - 1)]
    record(5, max(devs) < 0.01, f"approx {approx:.5e}, full {full:.5e} eV, max rel dev {max(devs):.2e} (tol 1e-2)")


def test_criterion_06_fermi_vs_sphere():
    Z = 82
    r = RADII[Z].r_rms_fm
    label = BoundStateLabel(1, -1, M_E, Z)
    fermi = shift_perturbative(ShiftRequest(label, FermiNucleus.from_rms(Z, r, ref.FERMI_SKIN_FM),
                                            "rel-fns-approx", numeric_uncertainty=False)).value
    sphere = shift_perturbative(ShiftRequest(label, SphereNucleus.from_rms(Z, r), "rel-fns-approx",
                                             numeric_uncertainty=False)).value
    dev = abs(fermi / ref.FERMI_PB_1S_EV - 1)
    spread = abs(fermi - sphere) / abs(sphere)
    # "on the 1% level": between half a percent and two percent
    ok = dev < 5e-3 and 5e-3 <= spread <= 2e-2
    record(6, ok, f"Fermi {fermi:.5e} eV, rel dev {dev:.2e} (tol 5e-3); |F-S|/|S| = {spread:.2e} "
                  f"(want 5e-3..2e-2)")


def test_criterion_07_muonic_ratio():
    q = ref.parse_bracket(ref.MUONIC_RATIO)
    r = muonic_vp_ratio(1)
    dev = abs(r / q.value - 1)
    record(7, dev < 0.015, f"ratio {r:.5f}, rel dev {dev:.2e} (tol 1.5e-2)")


def test_criterion_08_series_vs_closed_form():
    errs = {}
    for Z in (1, 20, 54, 82):
        label = BoundStateLabel(1, -1, M_E, Z)
        errs[Z] = abs(shift_expansion(label) / shift_1s_closed_form(Z, M_E) - 1)
    diverging = errs[1] < errs[20] < errs[54] < errs[82]
    ok = errs[1] < 1e-4 and errs[20] < 2e-2 and diverging
    record(8, ok, ", ".join(f"Z={Z}: {e:.2e}" for Z, e in errs.items()) + " (tol 1e-4 / 2e-2, increasing)")


def test_criterion_09_eigenvalue_vs_expectation():
    devs = {}
    for Z in (54, 82):
        ev = shift_perturbative(fns_request(Z, "1s", numeric_uncertainty=False)).value
        eig = shift_perturbative(fns_request(Z, "1s", evaluation="eigenvalue",
                                             numeric_uncertainty=False)).value
        devs[Z] = abs(eig / ev - 1)
    record(9, max(devs.values()) < 1e-3, ", ".join(f"Z={Z}: {d:.2e}" for Z, d in devs.items()) + " (tol 1e-3)")


def test_criterion_10_closed_vs_numeric_convolution():
    devs = {}
    for Z in (20, 82):
        model = SphereNucleus.from_rms(Z, RADII[Z].r_rms_fm)
        R = model.R
        r = np.concatenate([np.geomspace(1e-6, 1e-2, 9), np.linspace(0.01, 20.0, 400)]) * R
        closed = uehling_sphere_closed(Z, P, R, r)
        num = uehling_convolved(Z, P, model, r, method="panel")
        devs[Z] = float(np.max(np.abs(num / closed - 1)))
    record(10, max(devs.values()) < 1e-7, ", ".join(f"Z={Z}: {d:.2e}" for Z, d in devs.items()) + " (tol 1e-7)")


PROPERTY_SELECTION = [
    "tests/test_potentials.py::test_point_negative",
    "tests/test_potentials.py::test_point_monotone",
    "tests/test_potentials.py::test_sphere_negative_and_increasing",
    "tests/test_wavefunctions.py::test_normalization",
    "tests/test_wavefunctions.py::test_orthogonality",
    "tests/test_wavefunctions.py::test_sommerfeld_energy_consistent",
    "tests/test_solver.py::test_point_nucleus_sommerfeld",
    "tests/test_specfun.py::test_expint_recurrence",
    "tests/test_core.py::test_length_round_trip",
    "tests/test_core.py::test_energy_composition",
    "tests/test_core.py::test_fm_natural_round_trip",
]


def test_criterion_11_property_suites():
    root = Path(__file__).resolve().parent.parent
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                           *PROPERTY_SELECTION], cwd=root, capture_output=True, text=True)
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    record(11, proc.returncode == 0, summary)
