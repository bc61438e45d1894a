import functools

import pytest

from symres.profile import SpectralProfile
from symres.radial import radial_profile
from symres.rootspace import catalog_get


@functools.lru_cache(maxsize=None)
def _gaussian_rp(name: str, resolution=None):
    space = catalog_get(name)
    return radial_profile(space, SpectralProfile.gaussian(space.rank), resolution)


@pytest.fixture(scope="session")
def gaussian_rp():
    """Factory: catalog name -> RadialProfile with a unit Gaussian profile."""
    return _gaussian_rp
