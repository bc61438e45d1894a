import math

import numpy as np
import pytest

from symres.cfun import density_along
from symres.errors import BadResolution, OffDomain
from symres.profile import SpectralProfile
from symres.radial import radial_F, radial_F_estimate, radial_profile, sphere_rule
from symres.rootspace import catalog_get


def test_rank_one_rule():
    rule = sphere_rule(1)
    assert rule.nodes.tolist() == [[1.0], [-1.0]]
    assert rule.weights.tolist() == [1.0, 1.0]


def test_circle_rule_measure():
    rule = sphere_rule(2, 256)
    assert abs(rule.total_measure - 2 * math.pi) < 1e-12
    assert np.max(np.abs(np.linalg.norm(rule.nodes, axis=1) - 1)) < 1e-14


@pytest.mark.parametrize("resolution", [16, 64])
def test_sphere_rule_second_moment(resolution):
    rule = sphere_rule(3, resolution)
    assert np.all(rule.weights > 0)
    assert np.max(np.abs(np.linalg.norm(rule.nodes, axis=1) - 1)) < 1e-14
    assert abs(rule.total_measure - 4 * math.pi) < 1e-10
    assert abs(rule.integrate(lambda w: w[:, 0] ** 2) - 4 * math.pi / 3) < 1e-10


def test_sphere_rule_second_moment_monte_carlo():
    # independent sanity check of the classical moment
    rng = np.random.default_rng(0)
    pts = rng.normal(size=(400_000, 3))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    mc = 4 * math.pi * np.mean(pts[:, 0] ** 2)
    assert abs(sphere_rule(3).integrate(lambda w: w[:, 0] ** 2) - mc) < 0.02


def test_rank_four_rule_measure():
    rule = sphere_rule(4, 16)
    assert abs(rule.total_measure - 2 * math.pi**2) < 1e-10
    assert abs(rule.integrate(lambda w: w[:, 3] ** 4) - 2 * math.pi**2 * 3 / 24) < 1e-10


def test_rules_are_antipodal():
    for rank, res in [(2, 8), (3, 10), (4, 8)]:
        rule = sphere_rule(rank, res)
        assert np.allclose(rule.nodes[rule.antipode], -rule.nodes, atol=1e-14)
        assert len(rule.representatives) * 2 == len(rule.nodes)


@pytest.mark.parametrize("resolution", [0, 2, 3])
def test_bad_resolution(resolution):
    with pytest.raises(BadResolution):
        sphere_rule(2, resolution)


def test_h3_gaussian_closed_form(gaussian_rp):
    rp = gaussian_rp("H3")
    xi = np.array([0.3, 1.0, 2.5, 0.7 - 0.4j, -1.2 + 2j])
    assert np.allclose(radial_F(rp, xi), 2 * xi**2 * np.exp(-(xi**2)), rtol=1e-13, atol=0)


def test_h2_gaussian_closed_form(gaussian_rp):
    rp = gaussian_rp("H2")
    xi = np.array([0.3, 1.0, 2.5, 0.7 - 0.4j])
    want = 2 * np.pi * xi * np.tanh(np.pi * xi) * np.exp(-(xi**2))
    assert np.allclose(radial_F(rp, xi), want, rtol=1e-13, atol=0)


@pytest.mark.parametrize("name", ["H3", "H2", "SL3R", "SL3C", "CH2"])
def test_parity(gaussian_rp, name):
    rp = gaussian_rp(name)
    xi = 0.8 - 0.2j
    assert abs(rp(-xi) - rp.parity_sign * rp(xi)) <= 1e-12 * abs(rp(xi))


@pytest.mark.parametrize("name", ["H3", "SL3R", "SL3C"])
def test_small_radius_vanishing(gaussian_rp, name):
    rp = gaussian_rp(name)
    vals = [abs(rp(x) / x ** (rp.rank - 1)) for x in (1e-2, 1e-3, 1e-4)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 1e-6


def test_rank_two_rule_convergence():
    space = catalog_get("SL3R")
    V = SpectralProfile.from_monomials(2, [((0, 0), 1.0, 1.0), ((2, 0), 0.5, 0.8)])
    coarse = radial_profile(space, V, 256)
    fine = radial_profile(space, V, 512)
    xi = np.linspace(0.1, 3.0, 5) + 1j * np.array([0, 0.1, -0.2, 0.15, 0.0]).repeat(1)
    xi = np.concatenate([xi, np.linspace(0.2, 4, 5)])
    assert np.max(np.abs(radial_F(coarse, xi) - radial_F(fine, xi))) <= 1e-11


def test_off_domain_on_cut(gaussian_rp):
    rp = gaussian_rp("SL3R")
    with pytest.raises(OffDomain):
        rp(1j * (rp.branch_radius + 0.5))
    with pytest.raises(OffDomain):
        radial_F_estimate(rp, -1j * (rp.branch_radius + 0.5))
    # below the branch radius the imaginary axis is fine
    assert np.isfinite(rp(0.5j * rp.branch_radius))


def test_entire_density_on_cut(gaussian_rp):
    rp = gaussian_rp("SL3C")
    xi = 1j * (rp.branch_radius + 1.0)
    on = rp(xi)
    left, right = rp(xi - 1e-12), rp(xi + 1e-12)
    assert np.isfinite(on)
    assert abs(left - right) <= 1e-9 * max(1.0, abs(on))
    assert abs(left - on) <= 1e-9 * max(1.0, abs(on))


@pytest.mark.parametrize("name", ["H2", "H5", "CH2", "SL3R", "SL3C"])
def test_bounded_on_reals(gaussian_rp, name):
    rp = gaussian_rp(name)
    xi = np.linspace(0.0, 12.0, 241)
    F = np.abs(radial_F(rp, xi))
    assert np.all(np.isfinite(F))
    # profile sup times density sup on each sphere, times sphere measure
    u = np.linspace(1, 2, rp.rank)
    u /= np.linalg.norm(u)
    power = sum(r.m + r.m2 for r in rp.space.roots)
    dens = np.abs(density_along(rp.ctx, np.array([20.0]), u))[0] / 21.0**power
    bound = 2 * rp.rule.total_measure * xi ** (rp.rank - 1) * np.exp(-(xi**2)) * 4 * dens * (1 + xi) ** power
    assert np.all(F <= bound + 1e-300)


def test_estimate_agrees_with_fixed_rule(gaussian_rp):
    rp = gaussian_rp("SL3R")
    for xi in (0.7, 1.3 - 0.2j):
        val, err = radial_F_estimate(rp, xi)
        assert abs(val - rp(xi)) <= 1e-12
        assert err <= 1e-12


def test_estimate_near_cut_converges(gaussian_rp):
    rp = gaussian_rp("SL3R")
    xi = 1e-3 + 1j * (rp.branch_radius + 0.3)
    val, err = radial_F_estimate(rp, xi, tol=1e-10)
    fine = radial_profile(rp.space, rp.profile, 8192)
    assert abs(val - fine(xi)) <= 1e-8 * max(1.0, abs(val))


def test_profile_rank_mismatch():
    with pytest.raises(ValueError):
        radial_profile(catalog_get("SL3R"), SpectralProfile.gaussian(1))
