"""Hyperbolic plane: the continuation is meromorphic with poles on i[1/2, inf).

Lists the poles of the radial function, their residues (numerical versus
``2 p exp(-p^2)`` for the Gaussian profile), and shows the continued
resolvent blowing up as w approaches the first pole in rank-one mode.
"""
import numpy as np

from symres import Mode, SpectralProfile, catalog_get, radial_profile, resolvent_eval
from symres.continuation import rank1_poles, residue_at_pole


def main():
    rp = radial_profile(catalog_get("H2"), SpectralProfile.gaussian(1))
    print(f"branch radius r = {rp.branch_radius}")
    for p in rank1_poles(rp, 4.0):
        res = residue_at_pole(rp, p)
        exact = 2 * p * np.exp(-p * p)
        print(f"pole {p:.3f}: residue {res:.12f}  (closed form {exact:.12f})")
    print("\napproaching the first pole from below along the imaginary axis:")
    for d in (0.2, 0.1, 0.01, 0.001):
        w = 1j * (0.5 - d)
        val = resolvent_eval(rp, w, mode=Mode.RANK1)
        print(f"  w = {w:.3f}   |G| = {abs(val):.6g}   |G| * d = {abs(val) * d:.6g}")


if __name__ == "__main__":
    main()
