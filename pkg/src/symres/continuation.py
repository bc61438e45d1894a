"""The resolvent on its Riemann surface.

Odd rank uses the surface coordinate ``w`` with ``z = |rho|^2 + w^2`` and
returns ``G_c(w) / 2`` where ``G(w) = int_R F(x) / (x^2 - w^2) dx`` on the
physical sheet ``Im w < 0`` and ``G_c`` is its continuation

    G_c(w) = int_gamma F/(x^2 - w^2) dx
             - pi i (F(w)/w) (wn(w) - wn(-w) + 2 [Im w > 0]).

``gamma`` is any path from ``-L`` to ``L`` avoiding ``+-w`` and ``wn`` is the
winding number of ``gamma`` followed by the real axis back to ``-L``.

Even rank uses ``z = |rho|^2 + exp(2w)``.  Writing ``w = w0 + i pi n`` with
``Im w0`` in ``(-pi, 0]`` and ``zeta = exp(w0)``, the value is

    int_gamma F/(x^2 - zeta^2) dx
        - pi i (F(zeta)/zeta) (wn(zeta) + wn(-zeta) + n)

with ``gamma`` now running from 0 to ``L``.  The sign of the ``n`` term is
the one forced by continuity across ``Im w = -pi`` for odd ``F``; see
:func:`even_jump`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .contour import ContourPath, QuadResult, contour_integrate
from .errors import (
    EmptyPoleList,
    NearPole,
    NoConvergence,
    OffSurface,
    OnSpectrum,
    RankUnsupported,
)
from .cfun import plancherel_poles
from .radial import RadialProfile, radial_F, radial_F_estimate
from .rootspace import Parity

__all__ = [
    "Mode",
    "SurfacePoint",
    "Evaluation",
    "surface_point",
    "domain_violation",
    "resolvent_physical",
    "resolvent_eval",
    "resolvent_on_path",
    "residue_at_pole",
    "rank1_poles",
    "even_jump",
    "default_path",
    "tail_length",
    "CUT_MARGIN",
]

CUT_MARGIN = 1e-3
SPECTRUM_MARGIN = 1e-10
_QUAD_FRACTION = 0.01  # share of the tolerance given to the quadrature


class Mode(enum.Enum):
    GENERAL = "general"
    RANK1 = "rank1"


@dataclass(frozen=True)
class SurfacePoint:
    w: complex
    kind: Parity

    def z(self, rho_norm_sq: float) -> complex:
        if self.kind is Parity.ODD:
            return rho_norm_sq + self.w * self.w
        return rho_norm_sq + np.exp(2 * self.w)

    @property
    def physical(self) -> bool:
        if self.kind is Parity.ODD:
            return self.w.imag < 0
        return -math.pi < self.w.imag < 0


@dataclass(frozen=True)
class Evaluation:
    """Value of the continued resolvent with its bookkeeping."""

    value: complex
    error: float
    z: complex
    path: ContourPath
    integral: complex
    correction: complex
    sheet_shift: int = 0


def surface_point(rp: RadialProfile, w: complex) -> SurfacePoint:
    return SurfacePoint(complex(w), rp.info.parity)


def _coord(pt) -> complex:
    return complex(pt.w if isinstance(pt, SurfacePoint) else pt)


def _detour_height(rp: RadialProfile) -> float:
    return 0.5 if rp.entire else min(0.5, rp.branch_radius / 2)


def domain_violation(rp: RadialProfile, w: complex, mode: Mode = Mode.GENERAL) -> str | None:
    """Reason ``w`` is outside the valid domain, or ``None``."""
    if mode is Mode.RANK1 and rp.rank != 1:
        return "rank-one meromorphic mode needs a rank-one space"
    if rp.entire:
        return None
    r = rp.branch_radius
    if rp.info.parity is Parity.ODD:
        if mode is Mode.RANK1:
            return None
        # distance to the cut i[r, inf)
        d = abs(w.real) if w.imag >= r else abs(w - 1j * r)
        if d < CUT_MARGIN:
            return f"w={w:.6g} is within {CUT_MARGIN:g} of the cut i[{r:g}, inf)"
        return None
    x0 = math.log(r)
    n = round(w.imag / math.pi - 0.5)
    for k in (n - 1, n, n + 1):
        if k == -1:
            continue
        base = complex(x0, math.pi * (k + 0.5))
        d = abs(w.imag - base.imag) if w.real >= x0 else abs(w - base)
        if d < CUT_MARGIN:
            return f"w={w:.6g} is within {CUT_MARGIN:g} of the excluded half-line i*pi*({k}+1/2) + [log r, inf)"
    return None


def _check(rp, w, mode):
    if mode is Mode.RANK1 and rp.rank != 1:
        raise RankUnsupported("rank-one meromorphic mode needs a rank-one space")
    why = domain_violation(rp, w, mode)
    if why:
        raise OffSurface(why)


def tail_length(rp: RadialProfile, abs_tol: float, at_least: float = 0.0) -> float:
    """Cut-off beyond which ``|F|`` on the real axis stays below ``abs_tol/10``."""
    key = ("tail", abs_tol)
    if key not in rp.cache:
        x_max = min(200.0, 40.0 / math.sqrt(rp.profile.min_width))
        xs = np.arange(0.25, x_max, 0.25)
        vals = np.abs(radial_F(rp, xs))
        big = np.nonzero(vals >= abs_tol / 10)[0]
        rp.cache[key] = float(xs[big[-1]] + 1.0 if big.size else 1.0)
    return max(rp.cache[key], at_least)


def _scale(rp) -> float:
    """Rough size of ``F`` on the real axis, used to scale tolerances."""
    if "scale" not in rp.cache:
        xs = np.linspace(0.05, 8.0, 160)
        rp.cache["scale"] = max(1.0, float(np.max(np.abs(radial_F(rp, xs)))))
    return rp.cache["scale"]


# --- physical sheet -----------------------------------------------------------

def resolvent_physical(rp: RadialProfile, z: complex, tol: float = 1e-9, full_output: bool = False):
    """``int_0^inf F(x) / (x^2 - z) dx`` by direct half-line quadrature.

    ``z`` is the spectral parameter with ``|rho|^2`` already subtracted.

    Raises
    ------
    OnSpectrum
        If ``z`` is within 1e-10 of ``[0, inf)``.
    """
    z = complex(z)
    dist = abs(z.imag) if z.real >= 0 else abs(z)
    if dist < SPECTRUM_MARGIN:
        raise OnSpectrum(f"z={z:.6g} lies on the spectrum [0, inf)")
    abs_tol = _QUAD_FRACTION * tol * _scale(rp)
    L = tail_length(rp, abs_tol, at_least=math.sqrt(abs(z)) + 2)
    path = ContourPath.half_line(L)
    res = contour_integrate(lambda x: radial_F(rp, x) / (x * x - z), path, abs_tol)
    if full_output:
        return Evaluation(res.value, res.error, z, path, res.value, 0j)
    return res.value


# --- paths ----------------------------------------------------------------------

def default_path(rp: RadialProfile, w: complex) -> ContourPath:
    """Integration path used by :func:`resolvent_eval` (before tails)."""
    h = _detour_height(rp)
    if rp.info.parity is Parity.ODD:
        if abs(w.imag) >= h / 2:
            return ContourPath.real_line(1.0)
        a = abs(w.real) + 1.0
        return ContourPath.rectangle(a + 1.0, a, -h)
    w0, _ = _reduce(w)
    zeta = np.exp(w0)
    for p in (zeta, -zeta):
        if p.real <= 0:
            continue
        hl = min(h, p.real)
        if abs(p.imag) < hl / 2:
            height = hl if p.imag <= 0 else -hl
            return ContourPath.half_line_detour(p.real + hl + 1.0, p.real - hl, p.real + hl, height)
    return ContourPath.half_line(1.0)


def _reduce(w: complex) -> tuple[complex, int]:
    n = math.ceil(w.imag / math.pi)
    w0 = w - 1j * math.pi * n
    if w0.imag <= -math.pi:  # rounding at the strip edge
        n -= 1
        w0 = w - 1j * math.pi * n
    return w0, n


def _winding(path: ContourPath, p: complex, below: bool) -> int:
    if path.distance(p) < 1e-12:
        raise NoConvergence(f"pole {p:.6g} lies on the integration path")
    if p.imag == 0:
        eps = 1e-9 * max(1.0, abs(p))
        p = p - 1j * eps if below else p + 1j * eps
    return path.winding_number(p)


# --- continued resolvent -----------------------------------------------------------

def resolvent_eval(
    rp: RadialProfile,
    pt,
    mode: Mode = Mode.GENERAL,
    tol: float = 1e-9,
    full_output: bool = False,
):
    """Continued resolvent at the surface point ``pt`` (or a bare ``w``).

    Parameters
    ----------
    rp : RadialProfile
    pt : SurfacePoint or complex
        Surface coordinate.
    mode : Mode
        ``Mode.RANK1`` continues a rank-one resolvent through the cut as a
        meromorphic function; ``Mode.GENERAL`` stops at the cut.
    tol : float
        Target for the error estimate, relative to ``max(1, |value|)``.
    full_output : bool
        Return an :class:`Evaluation` instead of the bare value.

    Raises
    ------
    OffSurface
        Point outside the valid domain (within 1e-3 of a cut or excluded
        half-line).
    NearPole
        Rank-one mode at a pole of the continuation.
    NoConvergence
        Quadrature failure.
    """
    w = _coord(pt)
    _check(rp, w, mode)
    return resolvent_on_path(rp, w, default_path(rp, w), tol=tol, full_output=full_output, _checked=True)


def resolvent_on_path(
    rp: RadialProfile,
    w: complex,
    path: ContourPath,
    tol: float = 1e-9,
    full_output: bool = False,
    mode: Mode = Mode.RANK1,
    _checked: bool = False,
):
    """Continued resolvent at ``w`` computed over a caller-supplied path.

    The path must start on the real axis (at or left of 0 for odd rank, at
    0 for even rank) and end on the real axis; real tails are appended up to
    the truncation length.  Any path avoiding the poles gives the same value
    up to quadrature error.  ``mode`` only affects the domain check, which
    defaults to the permissive rank-one rule.
    """
    w = complex(w)
    if not _checked:
        _check(rp, w, mode if rp.rank == 1 else Mode.GENERAL)
    abs_tol = _QUAD_FRACTION * tol * _scale(rp)
    span = max(abs(v.real) for v in path.vertices)
    if rp.info.parity is Parity.ODD:
        return _odd(rp, w, path, abs_tol, tol, span, full_output)
    return _even(rp, w, path, abs_tol, tol, span, full_output)


def _odd(rp, w, path, abs_tol, tol, span, full_output):
    L = tail_length(rp, abs_tol, at_least=max(span, abs(w.real)) + 1.0)
    path = path.with_tails(-L, L)
    k_plus = _winding(path, w, below=True)
    k_minus = _winding(path, -w, below=False)
    res = contour_integrate(lambda x: radial_F(rp, x) / (x * x - w * w), path, abs_tol)
    count = k_plus - k_minus + (2 if w.imag > 0 else 0)
    corr, corr_err = 0j, 0.0
    if count and w != 0:
        f, f_err = radial_F_estimate(rp, w, _QUAD_FRACTION * tol)
        corr = -math.pi * 1j * count * f / w
        corr_err = math.pi * abs(count) * f_err / abs(w)
    value = 0.5 * (res.value + corr)
    err = 0.5 * (res.error + corr_err)
    if full_output:
        return Evaluation(value, err, rp.info.rho_norm_sq + w * w, path, res.value, corr)
    return value


def _even(rp, w, path, abs_tol, tol, span, full_output):
    w0, n = _reduce(w)
    zeta = complex(np.exp(w0))
    zeta_sq = complex(np.exp(2 * w0))
    L = tail_length(rp, abs_tol, at_least=max(span, abs(zeta)) + 1.0)
    path = path.with_tails(None, L)
    if abs(path.vertices[0]) != 0:
        raise ValueError("even-rank paths must start at 0")
    k = _winding(path, zeta, below=True) + _winding(path, -zeta, below=False)
    res = contour_integrate(lambda x: radial_F(rp, x) / (x * x - zeta_sq), path, abs_tol)
    count = k + n
    corr, corr_err = 0j, 0.0
    if count:
        f, f_err = radial_F_estimate(rp, zeta, _QUAD_FRACTION * tol)
        corr = -math.pi * 1j * count * f / zeta
        corr_err = math.pi * abs(count) * f_err / abs(zeta)
    value = res.value + corr
    err = res.error + corr_err
    if full_output:
        z = rp.info.rho_norm_sq + complex(np.exp(2 * w))
        return Evaluation(value, err, z, path, res.value, corr, sheet_shift=n)
    return value


def even_jump(rp: RadialProfile, w: complex, tol: float = 1e-12) -> complex:
    """``G(w + i pi) - G(w)`` as implemented: ``-pi i F(e^w) e^(-w)``."""
    f, _ = radial_F_estimate(rp, complex(np.exp(w)), tol)
    return -math.pi * 1j * f * complex(np.exp(-w))


# --- rank-one poles and residues ---------------------------------------------------------

def rank1_poles(rp: RadialProfile, max_height: float) -> list[complex]:
    """Poles of ``F`` in the upper half-plane up to ``max_height``."""
    return [p.location for p in plancherel_poles(rp.ctx, max_height)]


def residue_at_pole(rp: RadialProfile, pole: complex, radius: float | None = None, points: int = 128) -> complex:
    """Residue of ``F`` at an enumerated pole, by the trapezoid rule on a circle.

    The default radius is ``min(1e-2, d/2)`` with ``d`` the distance to the
    nearest other pole of ``F`` (poles come in pairs ``+-p``).

    Raises
    ------
    RankUnsupported
        For spaces of rank two or more.
    EmptyPoleList
        If ``F`` has no poles.
    NearPole
        If ``pole`` is not an enumerated pole, or the circle would reach
        another pole.
    """
    if rp.rank != 1:
        raise RankUnsupported("residues are only available in rank one")
    pole = complex(pole)
    if rp.entire:
        raise EmptyPoleList(f"{rp.space.name} has an entire density; F has no poles")
    upper = rank1_poles(rp, abs(pole) + 2.0)
    if not upper:
        raise EmptyPoleList(f"no poles of F below height {abs(pole) + 2.0:g}")
    everything = upper + [-p for p in upper]
    nearest = min(everything, key=lambda p: abs(p - pole))
    if abs(nearest - pole) > 1e-8:
        raise NearPole(f"{pole:.6g} is not a pole of F", location=pole)
    others = [abs(p - nearest) for p in everything if p != nearest]
    gap = min(others) if others else math.inf
    if radius is None:
        radius = min(1e-2, gap / 2)
    if radius >= gap / 2:
        raise NearPole(f"residue circle of radius {radius:g} reaches another pole", location=nearest)
    theta = 2 * np.pi * np.arange(points) / points
    offs = radius * np.exp(1j * theta)
    vals = radial_F(rp, nearest + offs)
    return complex(np.mean(vals * offs))
