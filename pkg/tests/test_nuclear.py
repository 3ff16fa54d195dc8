import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from hadvp.core import ALPHA, HBAR_C
from hadvp.nuclear import (
    FermiNucleus, NuclearModelError, PointNucleus, SphereNucleus, builtin_radii,
    estimate_rms_radius, form_factor, load_radii_csv, make_model, rms_to_sphere_radius,
    sphere_to_rms_radius,
)


def test_sphere_rms_relation():
    assert rms_to_sphere_radius(1.0) == pytest.approx(math.sqrt(5.0 / 3.0))
    s = SphereNucleus.from_rms(82, 5.5012)
    assert s.rms_radius_fm() == pytest.approx(5.5012, rel=1e-14)
    with pytest.raises(NuclearModelError):
        sphere_to_rms_radius(-1.0)


def test_invalid_Z():
    for Z in (0, -3, 1.5, 138):
        with pytest.raises(NuclearModelError):
            PointNucleus(Z)


def test_point_form_factor_is_one():
    p = PointNucleus(1)
    assert np.all(p.normalized_form_factor(np.array([0.0, 1.0, 100.0])) == 1.0)
    assert p.coulomb_potential(2.0) == pytest.approx(-ALPHA / 2.0)


def test_sphere_form_factor_closed_form():
    s = SphereNucleus.from_rms(20, 3.4776)
    R = s.R
    q = np.array([0.1, 1.0, 5.0])
    x = q * R
    expected = 3.0 * (np.sin(x) - x * np.cos(x)) / x ** 3
    assert np.allclose(s.normalized_form_factor(q), expected, rtol=1e-9, atol=1e-14)
    # small q: 1 - (qR)^2 / 10
    assert s.normalized_form_factor(1e-6) == pytest.approx(1 - (1e-6 * R) ** 2 / 10, rel=1e-14)


def test_sphere_potential_continuous_and_coulomb_outside():
    s = SphereNucleus.from_rms(54, 4.7859)
    R = s.R
    assert s.coulomb_potential(R * (1 - 1e-12)) == pytest.approx(s.coulomb_potential(R * (1 + 1e-12)),
                                                                 rel=1e-9)
    assert s.coulomb_potential(3 * R) == pytest.approx(-54 * ALPHA / (3 * R), rel=1e-14)
    assert s.coulomb_potential(0.0) == pytest.approx(-1.5 * 54 * ALPHA / R, rel=1e-14)


def test_fermi_from_rms_matches_quadrature():
    f = FermiNucleus.from_rms(82, 5.5012)
    assert f.rms_radius_fm() == pytest.approx(5.5012, rel=1e-10)
    assert f.a_fm == pytest.approx(2.3 / (4 * math.log(3)))
    # independent normalization check of the density in GeV units
    n, _ = quad(lambda r: 4 * math.pi * r * r * f.density(r), 0, f.extent, points=[f.c], limit=200)
    assert n == pytest.approx(1.0, rel=1e-9)


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_fermi_form_factor_small_q_and_oracle():
    f = FermiNucleus.from_rms(54, 4.7859)
    r2 = (f.rms_radius_fm() / HBAR_C) ** 2
    q = 1e-4
    assert f.normalized_form_factor(q) == pytest.approx(1 - q * q * r2 / 6, rel=1e-9)
    for qq in (0.5, 2.0):
        ref, _ = quad(lambda r: 4 * math.pi * r * f.density(r) / qq, 0.0, f.extent,
                      weight="sin", wvar=qq, limit=1000, epsabs=1e-20, epsrel=1e-12)
        assert f.normalized_form_factor(qq) == pytest.approx(ref, rel=1e-7, abs=1e-16)


def test_fermi_potential_against_sphere_outside():
    f = FermiNucleus.from_rms(82, 5.5012)
    r = 2 * f.extent
    assert f.coulomb_potential(r) == pytest.approx(-82 * ALPHA / r, rel=1e-12)
    # potential is finite and deepest at the centre
    v = f.coulomb_potential(np.linspace(0, f.extent, 50))
    assert np.all(np.diff(v) > 0)


def test_fermi_from_rms_too_small():
    with pytest.raises(NuclearModelError):
        FermiNucleus.from_rms(1, 0.2)


@given(Z=st.integers(1, 100), r=st.floats(0.5, 8.0))
def test_sphere_from_rms_round_trip(Z, r):
    assert SphereNucleus.from_rms(Z, r).rms_radius_fm() == pytest.approx(r, rel=1e-13)


@given(q1=st.floats(0.0, 4.0), q2=st.floats(0.0, 4.0))
def test_sphere_form_factor_bounded(q1, q2):
    s = SphereNucleus.from_rms(36, 4.1884)
    lo, hi = sorted((q1, q2))
    v = s.normalized_form_factor(np.array([lo, hi]))
    assert np.all(np.abs(v) <= 1.0 + 1e-12)


def test_form_factor_charge_units():
    s = SphereNucleus.from_rms(20, 3.4776)
    assert form_factor(s, 0.0) == pytest.approx(20 * math.sqrt(ALPHA))


def test_radii_tables(tmp_path):
    t = builtin_radii()
    assert t[82].r_rms_fm == 5.5012
    with pytest.raises(KeyError):
        t[83]
    p = tmp_path / "r.csv"
    p.write_text("Z,R_rms_fm,uncertainty_fm\n6,2.47,0.002\n")
    assert load_radii_csv(p)[6].uncertainty_fm == 0.002
    bad = tmp_path / "bad.csv"
    bad.write_text("Z,radius\n6,2.47\n")
    with pytest.raises(NuclearModelError):
        load_radii_csv(bad)


def test_estimated_radius_close_to_tabulated():
    for Z, entry in builtin_radii().items():
        if Z > 5:
            assert estimate_rms_radius(Z) == pytest.approx(entry.r_rms_fm, rel=0.05)


def test_make_model():
    assert make_model("point", 1).kind == "point"
    assert make_model("sphere", 20, 3.4776).kind == "sphere"
    assert make_model("fermi", 82, 5.5012).kind == "fermi"
    with pytest.raises(NuclearModelError):
        make_model("sphere", 20)
    with pytest.raises(NuclearModelError):
        make_model("gaussian", 20, 3.0)
