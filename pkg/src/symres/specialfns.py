"""Complex special functions: log-Gamma, reciprocal Gamma, Faddeeva.

All functions accept scalars or numpy arrays and broadcast.
"""
from __future__ import annotations

import numpy as np
from scipy import special as _sp

from .errors import AtPole

__all__ = ["log_gamma", "rgamma", "gamma_pole_distance", "faddeeva", "POLE_TOL"]

POLE_TOL = 1e-12

# Lanczos approximation, g = 7 with nine coefficients.
_LANCZOS_G = 7.0
_LANCZOS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)


def _lanczos(z):
    # valid for Re z >= 1/2
    z = z - 1.0
    x = np.full_like(z, _LANCZOS[0])
    for k in range(1, _LANCZOS.size):
        x = x + _LANCZOS[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(x)


def _shift_counts(z):
    return np.maximum(0, np.ceil(0.5 - z.real)).astype(int)


def gamma_pole_distance(z):
    """Distance from ``z`` to the nearest nonpositive integer."""
    z = np.asarray(z, dtype=complex)
    k = np.maximum(0.0, np.round(-z.real))
    d = np.abs(z + k)
    return d if d.ndim else float(d)


def log_gamma(z):
    """Principal branch of log Gamma(z).

    The branch is the one continuous on the plane cut along the nonpositive
    real axis and real on the positive axis; on the cut itself the value is
    the limit from above.  Points with ``Re z < 1/2`` are brought into the
    Lanczos half-plane with the upward recurrence, which preserves the
    principal branch (unlike the reflection formula).

    Raises
    ------
    AtPole
        If ``z`` is within 1e-12 of a nonpositive integer.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(gamma_pole_distance(z) < POLE_TOL):
        raise AtPole("log_gamma evaluated at a pole of Gamma")
    out = _log_gamma_unchecked(z)
    return out if out.ndim else complex(out)


def _log_gamma_unchecked(z):
    n = _shift_counts(z)
    nmax = int(n.max()) if n.size else 0
    if nmax == 0:
        return _lanczos(z)
    acc = np.zeros_like(z)
    for k in range(nmax):
        active = k < n
        acc = acc + np.where(active, np.log(np.where(active, z + k, 1.0)), 0.0)
    return _lanczos(z + n) - acc


def rgamma(z):
    """Reciprocal Gamma function 1/Gamma(z), entire.

    Uses ``1/Gamma(z) = z (z+1) ... (z+n-1) / Gamma(z+n)`` so zeros at the
    nonpositive integers come out exactly.
    """
    z = np.asarray(z, dtype=complex)
    n = _shift_counts(z)
    nmax = int(n.max()) if n.size else 0
    prod = np.ones_like(z)
    for k in range(nmax):
        prod = prod * np.where(k < n, z + k, 1.0)
    out = prod * np.exp(-_lanczos(z + n))
    return out if out.ndim else complex(out)


def faddeeva(z):
    """Faddeeva function ``w(z) = exp(-z**2) erfc(-i z)``.

    Backed by :func:`scipy.special.wofz`.
    """
    out = _sp.wofz(np.asarray(z, dtype=complex))
    return out if np.ndim(out) else complex(out)
