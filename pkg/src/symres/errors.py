"""Exception hierarchy shared by all modules."""


class SymresError(Exception):
    """Base class for every error raised by the package."""


class InvalidRootData(SymresError, ValueError):
    """Root datum violates a structural invariant."""


class UnknownSpace(SymresError, KeyError):
    """Name is not present in the built-in catalog."""

    def __str__(self):
        return Exception.__str__(self)


class ClosureOverflow(SymresError):
    """Weyl group closure exceeded the configured bound."""


class AtPole(SymresError, ValueError):
    """Argument lies on a pole of the Gamma function."""


class NearPole(SymresError):
    """Evaluation point is within the pole guard of a genuine pole."""

    def __init__(self, message, root_index=None, location=None):
        super().__init__(message)
        self.root_index = root_index
        self.location = location


class RankUnsupported(SymresError):
    """Operation is only defined for rank-one spaces."""


class BadResolution(SymresError, ValueError):
    """Sphere rule resolution is too small."""


class OffDomain(SymresError):
    """Radial profile evaluated on one of its cuts."""


class OffSurface(SymresError):
    """Surface point outside the domain of the continued resolvent."""


class OnSpectrum(SymresError):
    """Spectral parameter lies on the spectrum."""


class NoConvergence(SymresError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class EmptyPoleList(SymresError):
    """The radial profile has no poles to take residues at."""
