"""Closed-form resolvents and consistency checks used to validate the engine.

These live in the library (not only in the test-suite) so that
``symres verify`` can run them on an installed copy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import exp1

from . import continuation as cont
from .cfun import c_function, c_inverse, plancherel_density
from .contour import ContourPath
from .errors import SymresError
from .profile import SpectralProfile
from .radial import RadialProfile, radial_F, radial_F_estimate, radial_profile
from .rootspace import Parity, catalog_get, rho

__all__ = [
    "OracleReport",
    "h3_gaussian_resolvent",
    "odd_power_gaussian_resolvent",
    "cross_contour_check",
    "faddeeva_gate",
    "verify_space",
]


@dataclass(frozen=True)
class OracleReport:
    """Outcome of one check; ``passed`` iff ``max_rel_err <= threshold``."""

    name: str
    grid: tuple = field(repr=False)
    max_abs_err: float
    max_rel_err: float
    threshold: float
    passed: bool = field(init=False)
    detail: str = ""

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.max_rel_err <= self.threshold))


def h3_gaussian_resolvent(w, kappa: float = 1.0):
    """``kappa [sqrt(pi) - i pi w W(-w)]`` with ``W`` the Faddeeva function.

    This is half of ``int_R 2 kappa x^2 exp(-x^2) / (x^2 - w^2) dx`` for
    ``Im w < 0`` and is entire in ``w``, so it is the continued resolvent for
    a rank-one density ``kappa xi^2`` and a unit Gaussian profile.
    """
    from .specialfns import faddeeva

    w = np.asarray(w, dtype=complex)
    out = kappa * (math.sqrt(math.pi) - 1j * math.pi * w * faddeeva(-w))
    return out if out.ndim else complex(out)


def _ein(x):
    # entire exponential integral sum_{n>=1} (-1)^(n+1) x^n / (n n!)
    small = np.abs(x) < 1.0
    out = np.empty_like(x)
    xs = x[small]
    term = xs.copy()
    acc = xs.copy()
    for n in range(1, 30):
        term = -term * xs * n / (n + 1) ** 2
        acc = acc + term
    out[small] = acc
    xl = x[~small]
    out[~small] = exp1(xl) + np.euler_gamma + np.log(xl)
    return out


def odd_power_gaussian_resolvent(w, coeff: float, k: int):
    """Continued even-rank resolvent for ``F(x) = coeff x^(2k+1) exp(-x^2)``.

    With ``z = exp(2w)`` the half-line integral ``int_0^inf F/(x^2 - z)``
    equals ``coeff/2 [sum_{j<k} j! z^(k-1-j)
    + z^k e^(-z) (Ein(-z) - gamma - 2w - i pi)]`` on the strip
    ``-pi < Im w < 0``; the right side is entire in ``w``.
    """
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    z = np.exp(2 * w)
    poly = sum(math.factorial(j) * z ** (k - 1 - j) for j in range(k)) if k else 0
    tail = z**k * np.exp(-z) * (_ein(-z) - np.euler_gamma - 2 * w - 1j * math.pi)
    out = coeff / 2 * (poly + tail)
    return out if out.size > 1 else complex(out[0])


def _report(name, grid, got, want, threshold, detail=""):
    got = np.asarray(got, dtype=complex)
    want = np.asarray(want, dtype=complex)
    abs_err = np.abs(got - want)
    rel = abs_err / np.maximum(np.abs(want), 1e-300)
    rel = np.where(abs_err == 0, 0.0, rel)
    return OracleReport(
        name=name,
        grid=tuple(complex(g) for g in grid),
        max_abs_err=float(abs_err.max(initial=0.0)),
        max_rel_err=float(rel.max(initial=0.0)),
        threshold=threshold,
        detail=detail,
    )


def cross_contour_check(
    rp: RadialProfile,
    w: complex,
    path_a: ContourPath,
    path_b: ContourPath,
    tol: float = 1e-11,
    threshold: float = 1e-8,
) -> OracleReport:
    """Evaluate the continued resolvent at ``w`` over two paths and compare.

    Raises
    ------
    NoConvergence
        If either path runs through a pole.
    """
    a = cont.resolvent_on_path(rp, w, path_a, tol=tol)
    b = cont.resolvent_on_path(rp, w, path_b, tol=tol)
    return _report("cross-contour", [w], [a], [b], threshold)


def _h3_profile() -> RadialProfile:
    return radial_profile(catalog_get("H3"), SpectralProfile.gaussian(1))


def faddeeva_gate(tol: float = 1e-12, threshold: float = 1e-9) -> OracleReport:
    """Engine versus the Faddeeva closed form for H3 with a unit Gaussian on
    the 5x5 grid ``{-2, -1, 0, 1, 2}^2`` without the origin."""
    rp = _h3_profile()
    grid = [complex(a, b) for b in range(-2, 3) for a in range(-2, 3) if (a, b) != (0, 0)]
    got = [cont.resolvent_eval(rp, w, tol=tol) for w in grid]
    return _report("faddeeva-gate", grid, got, h3_gaussian_resolvent(np.array(grid)), threshold)


# --- per-space verification suite ------------------------------------------------

def _is_unit_gaussian(V: SpectralProfile) -> bool:
    return V == SpectralProfile.gaussian(V.rank)


def _safe(name: str, fn: Callable[[], OracleReport]) -> OracleReport:
    try:
        return fn()
    except SymresError as exc:
        return OracleReport(name, (), math.inf, math.inf, 0.0, detail=f"{type(exc).__name__}: {exc}")


def _detour_height(rp: RadialProfile) -> float:
    return 0.5 if rp.entire else min(0.5, rp.branch_radius / 2)


def _sample_points(rp: RadialProfile, upper: bool) -> list[complex]:
    """A few surface points in the valid domain, away from cuts."""
    if rp.info.parity is Parity.ODD:
        pts = [0.7 - 0.6j, -1.1 - 0.3j, 0.4 - 1.2j]
        if upper:
            # below the detour height so both rectangles below stay valid
            h = _detour_height(rp)
            pts = [complex(0.9, 0.4 * h), complex(-0.6, 0.3 * h), complex(1.3, 0.2 * h)]
    else:
        pts = [-0.5 - 0.5j, 0.3 - 2.0j, 0.2 - 1.2j]
        if upper:
            pts = [-0.5 + 0.7j, 0.3 + 2.0j, 0.1 - 3.8j]
    return [w for w in pts if cont.domain_violation(rp, w) is None]


def verify_space(rp: RadialProfile, tol: float = 1e-11) -> list[OracleReport]:
    """Run the structural checks on one space/profile pair."""
    ctx = rp.ctx
    rank = rp.rank
    rng = np.random.default_rng(12345)
    reports = []

    def normalization():
        val = c_function(ctx, -1j * rho(rp.space))
        return _report("normalization c(-i rho)=1", [0], [val], [1.0], 1e-10)

    def density_identity():
        lam = rng.normal(scale=2.0, size=(50, rank))
        ci = c_inverse(ctx, lam)
        prod = ci * c_inverse(ctx, -lam)
        return _report("density c(l)c(-l)=|c(l)|^2", [], prod, np.abs(ci) ** 2, 1e-9)

    def density_routes():
        lam = rng.normal(scale=1.5, size=(50, rank)) + 1j * rng.normal(scale=0.2, size=(50, rank))
        gamma_route = c_inverse(ctx, lam) * c_inverse(ctx, -lam)
        return _report("density closed form vs Gamma product", [], plancherel_density(ctx, lam), gamma_route, 1e-11)

    def parity():
        xi = np.array([0.8 - 0.2j, 1.3 + 0.4j, -0.5 + 0.1j, 2.0 - 0.7j])
        sign = rp.parity_sign
        return _report("parity F(-x)=(-1)^(rank-1)F(x)", xi, radial_F(rp, -xi), sign * radial_F(rp, xi), 1e-10)

    def physical():
        pts = _sample_points(rp, upper=False)
        got, want = [], []
        for w in pts:
            got.append(cont.resolvent_eval(rp, w, tol=tol))
            z = w * w if rp.info.parity is Parity.ODD else complex(np.exp(2 * w))
            want.append(cont.resolvent_physical(rp, z, tol=tol))
        return _report("physical sheet = direct quadrature", pts, got, want, 1e-8)

    def path_independence():
        pts = _sample_points(rp, upper=True)
        h = _detour_height(rp)
        got, want = [], []
        for w in pts:
            if rp.info.parity is Parity.ODD:
                # one path encloses w from above, the other -w from below
                a = abs(w.real) + 1.0
                pa = ContourPath.rectangle(a + 1, a, 0.8 * h)
                pb = ContourPath.rectangle(a + 2, a + 0.5, -0.9 * h)
            else:
                pa = ContourPath.half_line_detour(3.0, 0.5, 2.0, 0.6 * h)
                pb = ContourPath.half_line_detour(3.0, 0.0, 2.5, -0.8 * h)
            got.append(cont.resolvent_on_path(rp, w, pa, tol=tol))
            want.append(cont.resolvent_on_path(rp, w, pb, tol=tol))
        return _report("path independence", pts, got, want, 1e-8)

    def monodromy():
        if rp.info.parity is Parity.ODD:
            pts = [w for w in _sample_points(rp, upper=False) if cont.domain_violation(rp, -w) is None]
            got = [cont.resolvent_eval(rp, -w, tol=tol) - cont.resolvent_eval(rp, w, tol=tol) for w in pts]
            want = [math.pi * 1j * radial_F_estimate(rp, w, 1e-13)[0] / w for w in pts]
            return _report("odd monodromy G(-w)-G(w)=pi i F(w)/w", pts, got, want, 1e-8)
        pts = _sample_points(rp, upper=False)
        got = [cont.resolvent_eval(rp, w + 1j * math.pi, tol=tol) - cont.resolvent_eval(rp, w, tol=tol) for w in pts]
        want = [cont.even_jump(rp, w) for w in pts]
        return _report("even jump G(w+i pi)-G(w)=-pi i F(e^w)e^-w", pts, got, want, 1e-8)

    reports += [_safe("normalization", normalization), _safe("density identity", density_identity)]
    reports += [_safe("density routes", density_routes), _safe("parity", parity)]
    reports += [_safe("physical sheet", physical), _safe("path independence", path_independence)]
    reports.append(_safe("monodromy", monodromy))

    if _is_unit_gaussian(rp.profile):
        if rp.space.name == "H3":
            reports.append(_safe("faddeeva gate", lambda: faddeeva_gate(tol=tol)))
        if rp.space.name == "SL3C":
            def ein():
                coeff = complex(radial_F(rp, 1.0)).real * math.e
                pts = [-0.5 - 0.5j, 0.4 + 0.0j, 0.1 + 0.5j, -0.3 + 2.2j, 0.5 - 3.1j]
                got = [cont.resolvent_eval(rp, w, tol=tol) for w in pts]
                return _report("exponential-integral oracle", pts, got, odd_power_gaussian_resolvent(np.array(pts), coeff, 3), 1e-9)
            reports.append(_safe("exponential-integral oracle", ein))
    return reports
