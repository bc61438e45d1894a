"""Rank-two space SL(3,R)/SO(3): logarithmic sheet structure.

In the coordinate z = |rho|^2 + exp(2w) every shift w -> w + i pi moves to a
new sheet.  The difference between neighbouring sheets is a multiple of
``F(e^w) e^-w``; this script prints that ratio for several shifts, which
should equal ``-pi i n``.
"""
import math

import numpy as np

from symres import SpectralProfile, catalog_get, radial_profile, resolvent_eval
from symres.radial import radial_F


def main():
    space = catalog_get("SL3R")
    rp = radial_profile(space, SpectralProfile.gaussian(2))
    print(f"|rho|^2 = {rp.info.rho_norm_sq}, r = {rp.branch_radius:.6f}, "
          f"excluded half-lines start at Re w = log r = {math.log(rp.branch_radius):.6f}")
    w = -0.5 - 0.5j
    base = resolvent_eval(rp, w, tol=1e-11)
    unit = complex(radial_F(rp, np.exp(w))) * np.exp(-w)
    print(f"G({w}) = {base:.12g}")
    for n in range(1, 5):
        shifted = resolvent_eval(rp, w + 1j * math.pi * n, tol=1e-11)
        ratio = (shifted - base) / unit
        print(f"n = {n}: (G(w + i pi n) - G(w)) / (F(e^w) e^-w) = {ratio:.12f}   "
              f"(-pi i n = {-math.pi * n:.12f}i)")


if __name__ == "__main__":
    main()
