import math

import numpy as np
import pytest
from scipy import integrate

from symres.contour import ContourPath
from symres.continuation import resolvent_on_path
from symres.errors import NoConvergence
from symres.oracles import (
    OracleReport,
    cross_contour_check,
    faddeeva_gate,
    h3_gaussian_resolvent,
    odd_power_gaussian_resolvent,
    verify_space,
)
from symres.rootspace import catalog_names


def _half_line_quad(fn):
    re = integrate.quad(lambda x: fn(x).real, 0, np.inf, epsabs=1e-14, epsrel=1e-13, limit=400)[0]
    im = integrate.quad(lambda x: fn(x).imag, 0, np.inf, epsabs=1e-14, epsrel=1e-13, limit=400)[0]
    return complex(re, im)


def test_h3_oracle_frozen_value():
    # mpmath, 30 digits: sqrt(pi) - pi e erfc(1)
    assert abs(h3_gaussian_resolvent(-1j) - 0.42916042925878085686) < 1e-15
    assert abs(h3_gaussian_resolvent(-1j, kappa=2.5) - 2.5 * 0.42916042925878085686) < 1e-14


@pytest.mark.parametrize("w", [-1j, 0.5 - 0.2j, -2 - 1.5j, 3 - 0.1j])
def test_h3_oracle_matches_defining_integral(w):
    want = _half_line_quad(lambda x: 2 * x * x * np.exp(-x * x) / (x * x - w * w))
    assert abs(h3_gaussian_resolvent(w) - want) < 1e-10


def test_h3_oracle_decays_down_the_sheet():
    vals = [abs(h3_gaussian_resolvent(-1j * t)) * t * t for t in (5, 10, 50, 100)]
    assert max(vals) < 1.0
    assert abs(h3_gaussian_resolvent(-100j)) < 1e-4


def test_h3_oracle_against_deep_contour(gaussian_rp):
    rp = gaussian_rp("H3")
    w = 0.3 + 0.4j
    path = ContourPath.rectangle(6.0, 1.0, -1.0)  # passes below w and -w
    got = resolvent_on_path(rp, w, path, tol=1e-12)
    assert abs(got - h3_gaussian_resolvent(w)) <= 1e-9 * abs(got)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_odd_power_oracle_on_strip(k):
    coeff = 1.7
    for w in (-0.4 - 0.5j, 0.3 - 2.0j, 0.9 - 0.2j, -1.0 - 3.0j):
        z = np.exp(2 * w)
        want = _half_line_quad(lambda x: coeff * x ** (2 * k + 1) * np.exp(-x * x) / (x * x - z))
        assert abs(odd_power_gaussian_resolvent(w, coeff, k) - want) <= 1e-10 * max(1.0, abs(want))


def test_odd_power_oracle_vectorised():
    w = np.array([-0.4 - 0.5j, 0.3 - 2.0j])
    vals = odd_power_gaussian_resolvent(w, 1.0, 2)
    assert vals.shape == (2,)
    assert vals[1] == pytest.approx(odd_power_gaussian_resolvent(w[1], 1.0, 2), rel=1e-15)


def test_cross_contour_two_heights(gaussian_rp):
    rp = gaussian_rp("H3")
    w = 0.5 + 0.5j
    rep = cross_contour_check(rp, w, ContourPath.rectangle(4, 1.5, 1.0), ContourPath.rectangle(4, 1.5, 2.0))
    assert rep.passed and rep.max_rel_err <= 1e-8


def test_cross_contour_identical_paths(gaussian_rp):
    rp = gaussian_rp("H3")
    path = ContourPath.rectangle(4, 1.5, 1.0)
    rep = cross_contour_check(rp, 0.5 + 0.5j, path, path)
    assert rep.max_abs_err == 0 and rep.passed


def test_cross_contour_through_pole(gaussian_rp):
    rp = gaussian_rp("H3")
    with pytest.raises(NoConvergence):
        cross_contour_check(rp, 0.5 + 0.5j, ContourPath.rectangle(4, 0.5, 0.5), ContourPath.rectangle(4, 1.5, 1.0))


def test_report_pass_flag_is_derived():
    assert OracleReport("x", (), 1e-3, 1e-9, 1e-8).passed
    assert not OracleReport("x", (), 1e-3, 1e-7, 1e-8).passed
    # passed is not a constructor argument
    rep = OracleReport("x", (), 0.0, 2.0, 1.0, "note")
    assert rep.detail == "note" and not rep.passed


def test_faddeeva_gate():
    rep = faddeeva_gate()
    assert len(rep.grid) == 24
    assert rep.passed, rep


@pytest.mark.parametrize("name", catalog_names())
def test_verify_space_catalog(gaussian_rp, name):
    reports = verify_space(gaussian_rp(name))
    failed = [(r.name, r.max_rel_err, r.detail) for r in reports if not r.passed]
    assert not failed
    assert len(reports) >= 7
