"""Numerical continuation of resolvents on noncompact symmetric spaces.

The library works from restricted-root data alone: it evaluates the
c-function and Plancherel density, builds the radial profile of a spectral
test function, and continues the resolvent to its Riemann surface.
"""
from .cfun import c_function, c_inverse, cfun_context, plancherel_density, plancherel_poles
from .continuation import (
    Mode,
    SurfacePoint,
    domain_violation,
    residue_at_pole,
    resolvent_eval,
    resolvent_on_path,
    resolvent_physical,
)
from .contour import ContourPath, contour_integrate
from .errors import (
    AtPole,
    BadResolution,
    ClosureOverflow,
    EmptyPoleList,
    InvalidRootData,
    NearPole,
    NoConvergence,
    OffDomain,
    OffSurface,
    OnSpectrum,
    RankUnsupported,
    SymresError,
    UnknownSpace,
)
from .oracles import OracleReport, cross_contour_check, h3_gaussian_resolvent
from .profile import SpectralProfile, symmetrize
from .radial import RadialProfile, radial_F, radial_profile, sphere_rule
from .rootspace import (
    RestrictedRoot,
    SymmetricSpaceSpec,
    catalog_get,
    catalog_names,
    invariants,
    weyl_generate,
)

__version__ = "0.1.0"
