"""Restricted-root data of noncompact symmetric spaces.

A space is modelled only through its indecomposable positive restricted
roots, written in coordinates that are orthonormal for the chosen invariant
metric.  Everything downstream (rho, the branch radius, the Weyl group, the
c-function) is derived from that datum.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import ClosureOverflow, InvalidRootData, UnknownSpace

__all__ = [
    "Parity",
    "RestrictedRoot",
    "SymmetricSpaceSpec",
    "SpaceInvariants",
    "SurfaceKind",
    "WeylGroup",
    "catalog_get",
    "catalog_names",
    "rho",
    "rho_norm_sq",
    "j_index",
    "branch_radius",
    "surface_kind",
    "invariants",
    "reflection_matrix",
    "weyl_generate",
    "space_from_dict",
    "space_to_dict",
    "load_space",
]

DEFAULT_CLOSURE_BOUND = 10080
_ORTHO_TOL = 1e-9
_CRYSTAL_TOL = 1e-7


class Parity(enum.Enum):
    ODD = "odd"
    EVEN = "even"


@dataclass(frozen=True)
class RestrictedRoot:
    """One indecomposable positive restricted root.

    Parameters
    ----------
    vector : sequence of float
        Coordinates in an orthonormal basis of a* for the metric.
    m : int
        Multiplicity of the root, at least 1.
    m2 : int
        Multiplicity of twice the root (0 when 2*alpha is not a root).
    """

    vector: tuple[float, ...]
    m: int
    m2: int = 0

    def __post_init__(self):
        vec = tuple(float(v) for v in self.vector)
        object.__setattr__(self, "vector", vec)
        if not vec or not all(math.isfinite(v) for v in vec):
            raise InvalidRootData(f"root vector must be finite and non-empty: {vec}")
        if math.fsum(v * v for v in vec) == 0.0:
            raise InvalidRootData("root vector is zero")
        if int(self.m) != self.m or self.m < 1:
            raise InvalidRootData(f"multiplicity m must be a positive integer, got {self.m}")
        if int(self.m2) != self.m2 or self.m2 < 0:
            raise InvalidRootData(f"multiplicity m2 must be a nonnegative integer, got {self.m2}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "m2", int(self.m2))
        if self.m % 2 == 1 and self.m2 != 0:
            raise InvalidRootData("a root of odd multiplicity cannot have a double root (m2 must be 0)")

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.vector, dtype=float)

    @property
    def norm_sq(self) -> float:
        return math.fsum(v * v for v in self.vector)

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_sq)


@dataclass(frozen=True)
class SymmetricSpaceSpec:
    """Root datum of X = G/K.

    ``factor_partition`` lists, for every irreducible factor, the indices of
    the roots belonging to it.  It defaults to a single factor.
    """

    name: str
    rank: int
    roots: tuple[RestrictedRoot, ...]
    factor_partition: tuple[tuple[int, ...], ...] = ()
    normalization: str = field(default="", compare=False)

    def __post_init__(self):
        roots = tuple(
            r if isinstance(r, RestrictedRoot) else RestrictedRoot(**r) for r in self.roots
        )
        object.__setattr__(self, "roots", roots)
        if int(self.rank) != self.rank or self.rank < 1:
            raise InvalidRootData(f"rank must be a positive integer, got {self.rank}")
        object.__setattr__(self, "rank", int(self.rank))
        if not roots:
            raise InvalidRootData("a space needs at least one root")
        for i, r in enumerate(roots):
            if len(r.vector) != self.rank:
                raise InvalidRootData(
                    f"root {i} has {len(r.vector)} coordinates, expected rank {self.rank}"
                )
        partition = self.factor_partition or (tuple(range(len(roots))),)
        partition = tuple(tuple(int(i) for i in part) for part in partition)
        object.__setattr__(self, "factor_partition", partition)
        flat = sorted(i for part in partition for i in part)
        if flat != list(range(len(roots))):
            raise InvalidRootData("factor_partition must assign every root to exactly one factor")
        mat = self.root_matrix
        if np.linalg.matrix_rank(mat, tol=1e-9) != self.rank:
            raise InvalidRootData("roots do not span a*; rank is inconsistent with the roots")
        self._check_factors()

    def _check_factors(self):
        gram = self.root_matrix @ self.root_matrix.T
        owner = {i: k for k, part in enumerate(self.factor_partition) for i in part}
        n = len(self.roots)
        for i in range(n):
            for j in range(n):
                if owner[i] != owner[j]:
                    if abs(gram[i, j]) > _ORTHO_TOL * math.sqrt(gram[i, i] * gram[j, j]):
                        raise InvalidRootData(
                            f"roots {i} and {j} lie in different factors but are not orthogonal"
                        )
                    continue
                cartan = 2.0 * gram[i, j] / gram[j, j]
                if abs(cartan - round(cartan)) > _CRYSTAL_TOL:
                    raise InvalidRootData(
                        f"roots {i} and {j} fail the crystallographic condition "
                        f"(2<a,b>/<b,b> = {cartan:.6g})"
                    )

    @property
    def root_matrix(self) -> np.ndarray:
        """Roots stacked as rows, shape ``(n_roots, rank)``."""
        return np.array([r.vector for r in self.roots], dtype=float)

    @property
    def multiplicities(self) -> list[tuple[int, int]]:
        return [(r.m, r.m2) for r in self.roots]


@dataclass(frozen=True)
class SurfaceKind:
    parity: Parity
    entire: bool


@dataclass(frozen=True)
class SpaceInvariants:
    rho: np.ndarray
    rho_norm_sq: float
    branch_radius: float
    parity: Parity
    entire_density: bool


def rho(space: SymmetricSpaceSpec) -> np.ndarray:
    """Half sum of positive roots counted with multiplicity.

    Doubled roots 2*alpha enter with multiplicity m2, which is why each
    indecomposable root carries weight ``m + 2*m2``.
    """
    out = np.zeros(space.rank)
    for r in space.roots:
        out += 0.5 * (r.m + 2 * r.m2) * r.array
    return out


def rho_norm_sq(space: SymmetricSpaceSpec) -> float:
    v = rho(space)
    return float(v @ v)


def j_index(m: int) -> float:
    """``m/2`` for odd ``m`` and ``m/2 + 1`` for even ``m``."""
    m = int(m)
    return m / 2 if m % 2 else m / 2 + 1


def branch_radius(space: SymmetricSpaceSpec) -> float:
    """Smallest ``|alpha| * j(m_alpha)`` over the indecomposable roots."""
    return min(r.norm * j_index(r.m) for r in space.roots)


def surface_kind(space: SymmetricSpaceSpec) -> SurfaceKind:
    parity = Parity.ODD if space.rank % 2 else Parity.EVEN
    entire = all(r.m % 2 == 0 and r.m2 % 2 == 0 for r in space.roots)
    return SurfaceKind(parity, entire)


def invariants(space: SymmetricSpaceSpec) -> SpaceInvariants:
    kind = surface_kind(space)
    v = rho(space)
    return SpaceInvariants(
        rho=v,
        rho_norm_sq=float(v @ v),
        branch_radius=branch_radius(space),
        parity=kind.parity,
        entire_density=kind.entire,
    )


def reflection_matrix(alpha: np.ndarray) -> np.ndarray:
    """Matrix of ``lam -> lam - 2 <lam, alpha>/<alpha, alpha> alpha``."""
    alpha = np.asarray(alpha, dtype=float)
    return np.eye(alpha.size) - 2.0 * np.outer(alpha, alpha) / (alpha @ alpha)


class WeylGroup:
    """Finite reflection group acting on a*, stored as orthogonal matrices."""

    def __init__(self, elements: Sequence[np.ndarray], generators: Sequence[np.ndarray] = ()):
        mats = []
        for e in elements:
            a = np.array(e, dtype=float)
            a.setflags(write=False)
            mats.append(a)
        self.elements: tuple[np.ndarray, ...] = tuple(mats)
        gens = []
        for g in generators:
            a = np.array(g, dtype=float)
            a.setflags(write=False)
            gens.append(a)
        self.generators: tuple[np.ndarray, ...] = tuple(gens)
        self._keys = {_matrix_key(e) for e in self.elements}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.elements)

    def __contains__(self, mat) -> bool:
        return _matrix_key(np.asarray(mat, dtype=float)) in self._keys

    def __repr__(self) -> str:
        dim = self.elements[0].shape[0] if self.elements else 0
        return f"WeylGroup(order={self.order}, dim={dim})"


def _matrix_key(mat: np.ndarray) -> bytes:
    # rounding absorbs the ~1e-15 drift accumulated along long words
    return (np.round(mat, 8) + 0.0).tobytes()


def weyl_generate(space: SymmetricSpaceSpec, bound: int = DEFAULT_CLOSURE_BOUND) -> WeylGroup:
    """Close the root reflections under composition.

    Raises
    ------
    ClosureOverflow
        If more than ``bound`` distinct elements appear, which only happens
        for non-crystallographic input.
    """
    gens = [reflection_matrix(r.array) for r in space.roots]
    identity = np.eye(space.rank)
    seen = {_matrix_key(identity): identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                prod = s @ g
                key = _matrix_key(prod)
                if key not in seen:
                    seen[key] = prod
                    nxt.append(prod)
                    if len(seen) > bound:
                        raise ClosureOverflow(
                            f"Weyl closure for {space.name!r} exceeded {bound} elements"
                        )
        frontier = nxt
    return WeylGroup(list(seen.values()), gens)


# --- catalog -------------------------------------------------------------

def _a_series_roots(n: int) -> list[np.ndarray]:
    """Positive roots e_i - e_j of A_{n-1} in an orthonormal basis of the
    sum-zero hyperplane of R^n (Helmert basis), so that |alpha|^2 = 2."""
    basis = []
    for k in range(1, n):
        v = np.zeros(n)
        v[:k] = 1.0
        v[k] = -float(k)
        basis.append(v / np.linalg.norm(v))
    basis = np.array(basis)
    roots = []
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros(n)
            e[i], e[j] = 1.0, -1.0
            roots.append(basis @ e)
    return roots


def _hyperbolic(n: int) -> SymmetricSpaceSpec:
    return SymmetricSpaceSpec(
        name=f"H{n}",
        rank=1,
        roots=(RestrictedRoot((1.0,), n - 1, 0),),
        normalization="real hyperbolic space of dimension n, |alpha| = 1 (curvature -1)",
    )


def _a_series(name: str, n: int, m: int) -> SymmetricSpaceSpec:
    roots = tuple(RestrictedRoot(tuple(v), m, 0) for v in _a_series_roots(n))
    return SymmetricSpaceSpec(
        name=name,
        rank=n - 1,
        roots=roots,
        normalization=f"A{n - 1} roots e_i - e_j in the Helmert basis, |alpha|^2 = 2, m = {m}",
    )


def _build_catalog() -> dict[str, SymmetricSpaceSpec]:
    cat = {f"H{n}": _hyperbolic(n) for n in range(2, 7)}
    cat["CH2"] = SymmetricSpaceSpec(
        name="CH2",
        rank=1,
        roots=(RestrictedRoot((1.0,), 2, 1),),
        normalization="complex hyperbolic plane, |alpha| = 1, m = 2, m2 = 1",
    )
    cat["SL3R"] = _a_series("SL3R", 3, 1)
    cat["SL3C"] = _a_series("SL3C", 3, 2)
    cat["SL4R"] = _a_series("SL4R", 4, 1)
    return cat


_CATALOG = _build_catalog()


def catalog_names() -> list[str]:
    return list(_CATALOG)


def catalog_get(name: str) -> SymmetricSpaceSpec:
    """Return a built-in space by name (``H2``..``H6``, ``CH2``, ``SL3R``,
    ``SL3C``, ``SL4R``)."""
    try:
        return _CATALOG[name]
    except KeyError:
        raise UnknownSpace(
            f"unknown space {name!r}; known: {', '.join(_CATALOG)}"
        ) from None


# --- custom spaces -------------------------------------------------------

def space_from_dict(data: Mapping) -> SymmetricSpaceSpec:
    """Build a space from the custom-space schema.

    The schema is ``{"name": str, "rank": int, "roots": [{"vector": [...],
    "m": int, "m2": int}, ...], "factor_partition": [[int, ...], ...]}``;
    ``m2`` and ``factor_partition`` are optional.
    """
    try:
        name = str(data["name"])
        rank = data["rank"]
        raw_roots = data["roots"]
    except (KeyError, TypeError) as exc:
        raise InvalidRootData(f"custom space is missing field {exc}") from None
    if not isinstance(raw_roots, list):
        raise InvalidRootData("'roots' must be a list")
    roots = []
    for i, r in enumerate(raw_roots):
        if not isinstance(r, Mapping) or "vector" not in r or "m" not in r:
            raise InvalidRootData(f"root {i} needs 'vector' and 'm'")
        roots.append(RestrictedRoot(tuple(r["vector"]), r["m"], r.get("m2", 0)))
    partition = data.get("factor_partition") or ()
    return SymmetricSpaceSpec(name, rank, tuple(roots), tuple(tuple(p) for p in partition))


def space_to_dict(space: SymmetricSpaceSpec) -> dict:
    return {
        "name": space.name,
        "rank": space.rank,
        "roots": [{"vector": list(r.vector), "m": r.m, "m2": r.m2} for r in space.roots],
        "factor_partition": [list(p) for p in space.factor_partition],
    }


def load_space(path) -> SymmetricSpaceSpec:
    """Read a custom space from a JSON file."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidRootData(f"{path}: not valid JSON ({exc})") from None
    return space_from_dict(data)
