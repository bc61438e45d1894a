"""Radial profile ``F``: the sphere average of profile times Plancherel density.

``F(xi) = xi**(rank-1) * sum_j w_j V(xi omega_j) p(xi omega_j)`` where
``p = 1/(c(lam) c(-lam))`` and ``(omega_j, w_j)`` is a quadrature rule on the
unit sphere of a*.  The radius ``xi`` may be complex; directions stay real.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_jacobi

from .cfun import CFunContext, cfun_context, plancherel_density
from .contour import ContourPath, contour_integrate
from .errors import BadResolution, NoConvergence, OffDomain
from .profile import SpectralProfile, profile_eval
from .rootspace import SpaceInvariants, SymmetricSpaceSpec, invariants

__all__ = [
    "SphereRule",
    "RadialProfile",
    "sphere_rule",
    "radial_profile",
    "radial_F",
    "radial_F_estimate",
    "default_resolution",
]

_CHUNK = 1 << 20  # max (points x nodes) evaluated at once


@dataclass(frozen=True)
class SphereRule:
    """Nodes on the unit sphere of a* (rows) and positive weights."""

    nodes: np.ndarray
    weights: np.ndarray
    resolution: int = 0
    antipode: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.antipode is None:
            object.__setattr__(self, "antipode", _antipodes(self.nodes))

    @property
    def representatives(self) -> np.ndarray:
        """One node index from each antipodal pair ``{omega, -omega}``."""
        idx = np.arange(len(self.nodes))
        return idx[idx < self.antipode]

    @property
    def rank(self) -> int:
        return self.nodes.shape[1]

    @property
    def total_measure(self) -> float:
        return float(self.weights.sum())

    def integrate(self, fn) -> complex:
        """Apply the rule to ``fn(nodes) -> values``."""
        return complex(np.asarray(fn(self.nodes)) @ self.weights)


def _antipodes(nodes: np.ndarray) -> np.ndarray:
    keys = {tuple(np.round(v, 10) + 0.0): i for i, v in enumerate(nodes)}
    out = np.array([keys.get(tuple(np.round(-v, 10) + 0.0), -1) for v in nodes])
    if np.any(out < 0):
        raise ValueError("sphere rule is not symmetric under omega -> -omega")
    return out


def default_resolution(rank: int) -> int:
    return 256 if rank == 2 else 64


def _circle(n: int):
    theta = 2 * np.pi * np.arange(n) / n
    nodes = np.column_stack([np.cos(theta), np.sin(theta)])
    return nodes, np.full(n, 2 * np.pi / n)


def _sphere(dim: int, resolution: int):
    # unit sphere in R^dim
    if dim == 2:
        return _circle(resolution)
    n_t = max(2, resolution // 2)
    a = (dim - 3) / 2
    t, wt = roots_jacobi(n_t, a, a)
    sub_nodes, sub_w = _sphere(dim - 1, resolution)
    s = np.sqrt(1 - t * t)
    nodes = np.concatenate(
        [np.column_stack([np.full(len(sub_nodes), ti), si * sub_nodes]) for ti, si in zip(t, s)]
    )
    weights = np.concatenate([wi * sub_w for wi in wt])
    return nodes, weights


def sphere_rule(rank: int, resolution: int | None = None) -> SphereRule:
    """Quadrature rule on the unit sphere of a ``rank``-dimensional space.

    Rank one uses the two points ``+-1`` with unit weights (counting
    measure).  Rank two uses ``resolution`` equispaced points on the circle.
    Higher ranks use Gauss-Jacobi nodes in the first coordinate times a rule
    on the lower sphere, ``resolution // 2`` Gauss nodes per level.  The
    resolution is rounded up to an even number, so every rule is invariant
    under ``omega -> -omega``.

    Raises
    ------
    BadResolution
        If ``resolution < 4`` for ``rank >= 2``.
    """
    if rank < 1:
        raise ValueError("rank must be at least 1")
    if rank == 1:
        nodes = np.array([[1.0], [-1.0]])
        weights = np.ones(2)
        res = 2
    else:
        res = default_resolution(rank) if resolution is None else int(resolution)
        if res < 4:
            raise BadResolution(f"sphere rule resolution must be >= 4, got {res}")
        res += res % 2
        nodes, weights = _sphere(rank, res)
    nodes = np.ascontiguousarray(nodes, dtype=float)
    weights = np.ascontiguousarray(weights, dtype=float)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return SphereRule(nodes, weights, res)


@dataclass(frozen=True)
class RadialProfile:
    """A space, a spectral profile and a sphere rule, bundled for ``F``."""

    ctx: CFunContext
    profile: SpectralProfile
    rule: SphereRule
    info: SpaceInvariants
    cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def space(self) -> SymmetricSpaceSpec:
        return self.ctx.space

    @property
    def rank(self) -> int:
        return self.ctx.rank

    @property
    def branch_radius(self) -> float:
        return self.info.branch_radius

    @property
    def entire(self) -> bool:
        return self.info.entire_density

    @property
    def parity_sign(self) -> int:
        """``F(-xi) = parity_sign * F(xi)``."""
        return 1 if self.rank % 2 else -1

    def __call__(self, xi):
        return radial_F(self, xi)


def radial_profile(
    space: SymmetricSpaceSpec,
    profile: SpectralProfile,
    resolution: int | None = None,
    pole_guard: float = 1e-8,
) -> RadialProfile:
    if profile.rank != space.rank:
        raise ValueError(f"profile rank {profile.rank} does not match space rank {space.rank}")
    return RadialProfile(
        ctx=cfun_context(space, pole_guard),
        profile=profile,
        rule=sphere_rule(space.rank, resolution),
        info=invariants(space),
    )


def on_cut(rp: RadialProfile, xi) -> np.ndarray:
    """Mask of points on ``+-i[r, inf)``; always false for entire densities
    and in rank one (where ``F`` is meromorphic instead)."""
    xi = np.asarray(xi, dtype=complex)
    if rp.entire or rp.rank == 1:
        return np.zeros(xi.shape, dtype=bool)
    scale = np.maximum(1.0, np.abs(xi))
    return (np.abs(xi.real) <= 1e-14 * scale) & (np.abs(xi.imag) >= rp.branch_radius)


def _integrand(rp, xi, nodes):
    lam = xi[:, None, None] * nodes[None, :, :]
    return profile_eval(rp.profile, lam) * plancherel_density(rp.ctx, lam)


def _apply_rule(rp, xi, rule):
    # the density is even, so it is evaluated once per antipodal pair
    reps = rule.representatives
    nodes = rule.nodes[reps]
    weights = rule.weights[reps]
    out = np.empty(xi.shape, dtype=complex)
    step = max(1, _CHUNK // len(nodes))
    for s in range(0, xi.size, step):
        lam = xi[s:s + step, None, None] * nodes[None, :, :]
        vsum = profile_eval(rp.profile, lam) + profile_eval(rp.profile, -lam)
        out[s:s + step] = (vsum * plancherel_density(rp.ctx, lam)) @ weights
    return out * xi ** (rp.rank - 1)


def radial_F(rp: RadialProfile, xi):
    """``F(xi)`` with the profile's fixed sphere rule (vectorised).

    Raises
    ------
    OffDomain
        If some ``xi`` lies on a cut ``+-i[r, inf)`` (rank >= 2, density
        not entire).
    NearPole
        Propagated from the c-function for rank-one poles, or for points
        within the pole guard of a cut.
    """
    arr = np.asarray(xi, dtype=complex)
    if np.any(on_cut(rp, arr)):
        raise OffDomain(f"radial profile evaluated on a cut +-i[{rp.branch_radius:g}, inf)")
    flat = arr.ravel()
    out = _apply_rule(rp, flat, rp.rule).reshape(arr.shape)
    return out if out.ndim else complex(out)


def radial_F_estimate(rp: RadialProfile, xi: complex, tol: float = 1e-12) -> tuple[complex, float]:
    """``F(xi)`` at one point together with an absolute error estimate.

    The fixed rule is compared with its half-resolution sub-rule.  When the
    two disagree by more than ``tol * max(1, |F|)`` (close to a cut the
    sphere integrand is nearly singular) rank two falls back to adaptive
    Gauss-Kronrod in the angle, and higher ranks double the resolution up to
    three times.

    Raises
    ------
    OffDomain, NearPole
        As for :func:`radial_F`.
    NoConvergence
        If a higher-rank rule fails to settle.
    """
    xi = complex(xi)
    if on_cut(rp, xi):
        raise OffDomain(f"radial profile evaluated on a cut +-i[{rp.branch_radius:g}, inf)")
    arr = np.array([xi])
    if rp.rank == 1:
        return complex(_apply_rule(rp, arr, rp.rule)[0]), 0.0
    if rp.rank == 2:
        vals = _integrand(rp, arr, rp.rule.nodes)[0]
        fine = complex(vals @ rp.rule.weights) * xi
        coarse = complex(vals[::2] @ (2 * rp.rule.weights[::2])) * xi
        err = abs(fine - coarse)
        if err <= tol * max(1.0, abs(fine)):
            return fine, err

        def over_angle(theta):
            th = theta.real
            nodes = np.column_stack([np.cos(th), np.sin(th)])
            return _integrand(rp, arr, nodes)[0]

        # the rank-two rule sums to 2*pi, so integrate in theta directly
        target = tol * max(1.0, abs(fine)) / max(1.0, abs(xi))
        res = contour_integrate(over_angle, ContourPath((0.0, 2 * np.pi)), target)
        return res.value * xi, res.error * abs(xi)
    res = rp.rule.resolution
    prev = complex(_apply_rule(rp, arr, rp.rule)[0])
    for _ in range(3):
        res *= 2
        rule = sphere_rule(rp.rank, res)
        cur = complex(_apply_rule(rp, arr, rule)[0])
        err = abs(cur - prev)
        if err <= tol * max(1.0, abs(cur)):
            return cur, err
        prev = cur
    raise NoConvergence(f"sphere rule did not settle at xi={xi:.6g} (too close to a cut?)")
