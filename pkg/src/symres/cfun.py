"""Harish-Chandra c-function from the Gindikin-Karpelevic product.

Conventions
-----------
For a complex vector ``lam`` (last axis = rank) and a root ``alpha`` the
product runs over ``z_alpha = <i lam, alpha_0>`` with
``alpha_0 = alpha / <alpha, alpha>`` and the bilinear (not hermitian) pairing,
so everything is holomorphic in ``lam``.  Each root contributes the factor
``2**z * h_alpha(z)`` to ``1/c(lam)``.

``h_alpha`` is evaluated in a form that has no removable singularities:

* ``m`` even, ``m2`` even: Legendre duplication turns ``2**z h`` into a
  polynomial times ``Gamma(b)/Gamma(a + 1/2)`` (just a polynomial when
  ``m2 = 0``), so no Gamma pole is ever touched.
* ``m`` even, ``m2`` odd: same duplication, leaving ``Gamma(b)/Gamma(a+1/2)``
  whose poles and zeros have opposite parity and never collide.
* ``m`` odd: the numerator poles are half-integers and the denominator
  zeros integers, so ``exp(logG(a) + logG(b) - logG(z))`` is safe; the
  zeros of ``1/Gamma(z)`` come out exactly as ``exp(-inf)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import specialfns as sf
from .errors import NearPole, RankUnsupported
from .rootspace import SymmetricSpaceSpec, rho

__all__ = [
    "CFunContext",
    "DensityPole",
    "cfun_context",
    "h_alpha",
    "h_alpha_pole_lattice",
    "c_inverse",
    "c_function",
    "plancherel_density",
    "plancherel_poles",
    "density_along",
]

DEFAULT_POLE_GUARD = 1e-8
_SQRT_PI = math.sqrt(math.pi)
_LOG2 = math.log(2.0)


def h_alpha_pole_lattice(m: int, m2: int):
    """Genuine poles of ``h_alpha`` as ``(offset, step)``.

    The poles are ``-(offset + step*n)`` for ``n = 0, 1, ...``; ``None`` when
    ``h_alpha`` is entire.
    """
    if m % 2:
        return (m / 2, 1)
    if m2 % 2:
        return (m / 2 + m2, 2)
    return None


def _pole_distance(m, m2, z):
    lattice = h_alpha_pole_lattice(m, m2)
    if lattice is None:
        return np.full(np.shape(z), np.inf)
    c, s = lattice
    n = np.maximum(0.0, np.round((-z.real - c) / s))
    return np.abs(z + c + s * n)


def _poch(x, n):
    out = np.ones_like(x)
    for k in range(n):
        out = out * (x + k)
    return out


def _root_factor(m, m2, z):
    """``2**z * h_alpha(z)`` without any guard."""
    with np.errstate(divide="ignore", invalid="ignore"):
        if m % 2 == 0:
            half = m // 2
            if m2 == 0:
                return _SQRT_PI * 2.0 ** (1 - half) * _poch(z, half)
            a = (half + 1 + z) / 2
            b = (half + m2 + z) / 2
            base = _SQRT_PI * 2.0 ** (-half) * _poch(z, half + 1)
            if m2 % 2 == 0:
                # Gamma(b)/Gamma(a + 1/2) is a Pochhammer symbol
                return base * _poch(a + 0.5, m2 // 2 - 1)
            return base * np.exp(sf._log_gamma_unchecked(b)) * sf.rgamma(a + 0.5)
        a = (m / 2 + 1 + z) / 2
        b = (m / 2 + m2 + z) / 2
        lg = sf._log_gamma_unchecked(a) + sf._log_gamma_unchecked(b) - sf._log_gamma_unchecked(z)
        out = np.exp(z * _LOG2 + lg)
        # exp(-inf + i*nan) at the zeros of 1/Gamma(z)
        return np.where(np.isnan(out) & np.isinf(lg.real) & (lg.real < 0), 0.0, out)


def h_alpha(m: int, m2: int, z, pole_guard: float = DEFAULT_POLE_GUARD):
    """``Gamma((m/2+1+z)/2) Gamma((m/2+m2+z)/2) / Gamma(z)``.

    Raises
    ------
    NearPole
        If ``z`` is within ``pole_guard`` of a genuine pole (the poles exist
        for odd ``m``, and for even ``m`` with odd ``m2``).
    """
    z = np.asarray(z, dtype=complex)
    d = _pole_distance(m, m2, z)
    if np.any(d < pole_guard):
        raise NearPole(f"h_alpha(m={m}, m2={m2}) evaluated within {pole_guard:g} of a pole")
    with np.errstate(over="ignore", invalid="ignore"):
        out = _root_factor(m, m2, z) * np.exp(-z * _LOG2)
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class CFunContext:
    """Root data prepared for vectorised c-function evaluation.

    ``c0`` is fixed so that ``c(-i rho) = 1``.
    """

    space: SymmetricSpaceSpec
    c0: complex
    pole_guard: float = DEFAULT_POLE_GUARD
    alpha0: np.ndarray = field(repr=False, default=None)

    @property
    def rank(self) -> int:
        return self.space.rank


def _unnormalized(space, alpha0, lam, pole_guard, check=True):
    lam = np.asarray(lam, dtype=complex)
    z = 1j * (lam @ alpha0.T)
    out = np.ones(z.shape[:-1], dtype=complex)
    for k, root in enumerate(space.roots):
        zk = z[..., k]
        if check and pole_guard is not None:
            d = _pole_distance(root.m, root.m2, zk)
            bad = d < pole_guard
            if np.any(bad):
                where = zk[bad].ravel()[0]
                raise NearPole(
                    f"c-function pole: root {k} of {space.name} has <i lam, alpha_0> = {where:.6g}",
                    root_index=k,
                    location=where,
                )
        out = out * _root_factor(root.m, root.m2, zk)
    return out


def cfun_context(space: SymmetricSpaceSpec, pole_guard: float = DEFAULT_POLE_GUARD) -> CFunContext:
    mat = space.root_matrix
    alpha0 = mat / np.sum(mat * mat, axis=1, keepdims=True)
    alpha0.setflags(write=False)
    at_rho = _unnormalized(space, alpha0, -1j * rho(space), None, check=False)
    return CFunContext(space=space, c0=complex(at_rho), pole_guard=pole_guard, alpha0=alpha0)


def _as_lambda(ctx, lam):
    lam = np.asarray(lam, dtype=complex)
    if lam.shape[-1:] != (ctx.rank,):
        if ctx.rank == 1:
            lam = lam[..., None]
        else:
            raise ValueError(f"lambda must have last axis of length {ctx.rank}")
    return lam


def c_inverse(ctx: CFunContext, lam):
    """``1/c(lam)`` for complex ``lam`` with trailing axis of length rank.

    For rank one a plain scalar (or array of scalars) is accepted and read
    as a multiple of the unit vector along the root.
    """
    lam = _as_lambda(ctx, lam)
    out = _unnormalized(ctx.space, ctx.alpha0, lam, ctx.pole_guard) / ctx.c0
    return out if out.ndim else complex(out)


def c_function(ctx: CFunContext, lam):
    return 1.0 / c_inverse(ctx, lam)


def _density_factor(m, m2, z):
    """``(2**z h(z)) (2**-z h(-z))`` for one root, unnormalised.

    For odd ``m`` the reflection formula collapses the six Gamma factors to
    ``2 pi (-1)**N z tan(pi z) prod_{k<N} (k - a)(k - b)`` with
    ``N = (m + 1)/2``, ``a = (m/2 + 1 + z)/2`` and ``b = (m/2 + z)/2``.
    """
    if m % 2 == 0:
        return _root_factor(m, m2, z) * _root_factor(m, m2, -z)
    n = (m + 1) // 2
    a = (m / 2 + 1 + z) / 2
    b = (m / 2 + z) / 2
    prod = np.ones_like(z)
    for k in range(1, n):
        prod = prod * (k - a) * (k - b)
    # tan(pi z) = -i tanh(i pi z), which stays finite for large |Im z|
    tan = -1j * np.tanh(1j * np.pi * z)
    return 2 * np.pi * (-1) ** n * z * tan * prod


def plancherel_density(ctx: CFunContext, lam):
    """``1/(c(lam) c(-lam))``; even in ``lam`` by construction.

    Evaluated root by root in closed form (elementary for odd
    multiplicities), which is both faster than and independent of the
    Gamma-function route ``c_inverse(lam) * c_inverse(-lam)``.

    Raises
    ------
    NearPole
        Within the pole guard of a pole of either factor.
    """
    lam = _as_lambda(ctx, lam)
    z = 1j * (lam @ ctx.alpha0.T)
    out = np.ones(z.shape[:-1], dtype=complex)
    for k, root in enumerate(ctx.space.roots):
        zk = z[..., k]
        if ctx.pole_guard is not None:
            # poles lie on the real axis, so prefilter on Im z
            near = np.abs(zk.imag) < ctx.pole_guard
            for sign in (1, -1):
                if not np.any(near):
                    break
                cand = sign * zk[near]
                bad = _pole_distance(root.m, root.m2, cand) < ctx.pole_guard
                if np.any(bad):
                    where = cand[bad][0]
                    raise NearPole(
                        f"density pole: root {k} of {ctx.space.name} has <i lam, alpha_0> = {where:.6g}",
                        root_index=k,
                        location=where,
                    )
        out = out * _density_factor(root.m, root.m2, zk)
    out = out / (ctx.c0 * ctx.c0)
    return out if out.ndim else complex(out)


def _unit_direction(ctx):
    a = ctx.space.roots[0].array
    return a / np.linalg.norm(a)


def density_along(ctx: CFunContext, xi, direction=None):
    """Density on the complex line ``xi * direction`` (unit root direction
    by default)."""
    u = _unit_direction(ctx) if direction is None else np.asarray(direction, dtype=float)
    xi = np.asarray(xi, dtype=complex)
    return plancherel_density(ctx, xi[..., None] * u)


@dataclass(frozen=True)
class DensityPole:
    location: complex
    order: int


def _circle_mean_abs(ctx, center, radius, n=64):
    pts = center + radius * np.exp(2j * np.pi * (np.arange(n) + 0.5) / n)
    return float(np.mean(np.abs(density_along(ctx, pts))))


def plancherel_poles(ctx: CFunContext, max_height: float) -> list[DensityPole]:
    """Poles of ``xi -> p(xi u)`` with ``0 < Im xi <= max_height``.

    Candidate locations come from the Gamma pole lattice of each root; the
    order of each candidate is measured from the growth of ``|p|`` between
    circles of radius 1e-2 and 1e-3, and candidates of order zero are
    dropped.

    Raises
    ------
    RankUnsupported
        For spaces of rank two or more.
    """
    if ctx.rank != 1:
        raise RankUnsupported("pole enumeration is only available in rank one")
    u = _unit_direction(ctx)
    candidates = []
    for k, root in enumerate(ctx.space.roots):
        lattice = h_alpha_pole_lattice(root.m, root.m2)
        if lattice is None:
            continue
        c, s = lattice
        proj = float(u @ ctx.alpha0[k])  # <u, alpha_0>
        for sign in (1.0, -1.0):  # factor 1/c(lam) and 1/c(-lam)
            n = 0
            while True:
                zp = -(c + s * n)
                # i * sign * xi * <u, alpha_0> = zp
                xi = -1j * zp / (sign * proj)
                if abs(xi) > max_height + 1e-12:
                    break
                if xi.imag > 0:
                    candidates.append(complex(0.0, xi.imag))
                n += 1
    candidates.sort(key=lambda p: p.imag)
    merged = []
    for p in candidates:
        if not merged or abs(p - merged[-1]) > 1e-9:
            merged.append(p)
    poles = []
    for p in merged:
        m1 = _circle_mean_abs(ctx, p, 1e-2)
        m2 = _circle_mean_abs(ctx, p, 1e-3)
        order = int(round(math.log10(m2 / m1))) if m1 > 0 and m2 > 0 else 0
        if order > 0:
            poles.append(DensityPole(p, order))
    return poles
