"""Admissible spectral profiles ``V(lam) = sum_k P_k(lam) exp(-s_k <lam, lam>)``.

``<lam, lam>`` is the holomorphic quadratic form (sum of squares, no
conjugation), so every profile is entire on the complexified a* and
Gaussian-decaying along real directions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .rootspace import WeylGroup

__all__ = [
    "ProfileTerm",
    "SpectralProfile",
    "profile_eval",
    "symmetrize",
    "profile_from_spec",
    "profile_to_spec",
]

Monomials = tuple[tuple[tuple[int, ...], complex], ...]


def _mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for (e1, c1), (e2, c2) in itertools.product(p.items(), q.items()):
        e = tuple(a + b for a, b in zip(e1, e2))
        out[e] = out.get(e, 0) + c1 * c2
    return out


def _compose_linear(poly: dict, mat: np.ndarray) -> dict:
    """``poly(mat @ lam)`` as a polynomial in ``lam``."""
    rank = mat.shape[0]
    linear = []
    for k in range(rank):
        form = {}
        for j in range(rank):
            if mat[k, j] != 0:
                e = [0] * rank
                e[j] = 1
                form[tuple(e)] = complex(mat[k, j])
        linear.append(form)
    out: dict = {}
    one = {(0,) * rank: 1.0 + 0j}
    for exps, coeff in poly.items():
        term = dict(one)
        for k, e in enumerate(exps):
            for _ in range(e):
                term = _mul(term, linear[k])
        for e, c in term.items():
            out[e] = out.get(e, 0) + coeff * c
    return out


@dataclass(frozen=True)
class ProfileTerm:
    """``P(lam) exp(-width <lam, lam>)`` with ``P`` stored as monomials."""

    monomials: Monomials
    width: float

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError(f"profile width must be positive, got {self.width}")
        mons = tuple(sorted((tuple(int(x) for x in e), complex(c)) for e, c in self.monomials))
        for e, _ in mons:
            if any(x < 0 for x in e):
                raise ValueError("monomial exponents must be nonnegative")
        object.__setattr__(self, "monomials", mons)

    @property
    def poly(self) -> dict:
        return dict(self.monomials)

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.monomials), default=0)


@dataclass(frozen=True)
class SpectralProfile:
    rank: int
    terms: tuple[ProfileTerm, ...]
    symmetrized: bool = False

    def __post_init__(self):
        for t in self.terms:
            for e, _ in t.monomials:
                if len(e) != self.rank:
                    raise ValueError(f"monomial {e} does not match rank {self.rank}")

    @classmethod
    def gaussian(cls, rank: int, width: float = 1.0, coeff: complex = 1.0) -> "SpectralProfile":
        """Radial Gaussian ``coeff * exp(-width <lam, lam>)``."""
        return cls(rank, (ProfileTerm((((0,) * rank, coeff),), width),))

    @classmethod
    def from_monomials(
        cls, rank: int, monomials: Iterable[tuple[Iterable[int], complex, float]]
    ) -> "SpectralProfile":
        """Build from ``(exponents, coefficient, width)`` triples; monomials
        with equal width are merged into one term."""
        by_width: dict[float, dict] = {}
        for exps, coeff, width in monomials:
            poly = by_width.setdefault(float(width), {})
            key = tuple(int(x) for x in exps)
            poly[key] = poly.get(key, 0) + complex(coeff)
        terms = tuple(ProfileTerm(tuple(p.items()), w) for w, p in by_width.items())
        return cls(rank, terms)

    @property
    def min_width(self) -> float:
        return min((t.width for t in self.terms), default=np.inf)

    @property
    def degree(self) -> int:
        return max((t.degree for t in self.terms), default=0)

    @property
    def is_zero(self) -> bool:
        return all(not t.monomials for t in self.terms)

    @property
    def real_coefficients(self) -> bool:
        return all(c.imag == 0 for t in self.terms for _, c in t.monomials)

    def __call__(self, lam):
        return profile_eval(self, lam)


def profile_eval(V: SpectralProfile, lam):
    """Value of ``V`` at complex ``lam`` (trailing axis of length rank; a
    bare scalar is accepted in rank one)."""
    lam = np.asarray(lam, dtype=complex)
    if lam.shape[-1:] != (V.rank,):
        if V.rank == 1:
            lam = lam[..., None]
        else:
            raise ValueError(f"lambda must have last axis of length {V.rank}")
    q = np.sum(lam * lam, axis=-1)
    out = np.zeros(lam.shape[:-1], dtype=complex)
    for term in V.terms:
        if not term.monomials:
            continue
        poly = np.zeros_like(out)
        for exps, coeff in term.monomials:
            mono = np.full_like(out, coeff)
            for k, e in enumerate(exps):
                if e:
                    mono = mono * lam[..., k] ** e
            poly = poly + mono
        out = out + poly * np.exp(-term.width * q)
    return out if out.ndim else complex(out)


def symmetrize(V: SpectralProfile, W: WeylGroup) -> SpectralProfile:
    """Weyl average ``|W|^-1 sum_s V(s lam)``.

    The Gaussian factor is Weyl invariant, so only the polynomial parts are
    averaged.  Coefficients below 1e-14 of the term's largest coefficient
    are dropped, which is what makes the odd part of a rank-one profile
    vanish exactly.
    """
    terms = []
    for term in V.terms:
        acc: dict = {}
        for s in W:
            for e, c in _compose_linear(term.poly, np.asarray(s)).items():
                acc[e] = acc.get(e, 0) + c
        n = len(W)
        avg = {e: c / n for e, c in acc.items()}
        ref = max((abs(c) for c in term.poly.values()), default=0.0)
        avg = {e: c for e, c in avg.items() if abs(c) > 1e-14 * ref}
        terms.append(ProfileTerm(tuple(avg.items()), term.width))
    return SpectralProfile(V.rank, tuple(terms), symmetrized=True)


# --- CLI schema ------------------------------------------------------------

def profile_from_spec(spec: Mapping, rank: int) -> SpectralProfile:
    """Parse ``{"terms": [{"exponents": [...], "coeff_re": x, "coeff_im": y,
    "width": s}, ...], "symmetrize": bool}``.

    Each entry is one monomial.  ``coeff_im`` defaults to 0 and ``width``
    to 1.  The ``symmetrize`` flag is honoured by the caller, which owns the
    Weyl group.
    """
    raw = spec.get("terms")
    if not isinstance(raw, list) or not raw:
        raise ValueError("profile spec needs a non-empty 'terms' list")
    triples = []
    for i, t in enumerate(raw):
        try:
            exps = [int(x) for x in t["exponents"]]
            coeff = complex(float(t.get("coeff_re", 0.0)), float(t.get("coeff_im", 0.0)))
            width = float(t.get("width", 1.0))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"profile term {i} is malformed: {exc}") from None
        if len(exps) != rank:
            raise ValueError(f"profile term {i} has {len(exps)} exponents, space rank is {rank}")
        triples.append((exps, coeff, width))
    return SpectralProfile.from_monomials(rank, triples)


def profile_to_spec(V: SpectralProfile) -> dict:
    terms = []
    for t in V.terms:
        for e, c in t.monomials:
            terms.append(
                {"exponents": list(e), "coeff_re": c.real, "coeff_im": c.imag, "width": t.width}
            )
    return {"terms": terms, "symmetrize": V.symmetrized}
