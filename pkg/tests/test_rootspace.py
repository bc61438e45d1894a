import json
import math

import numpy as np
import pytest

from symres.errors import ClosureOverflow, InvalidRootData, UnknownSpace
from symres.rootspace import (
    Parity,
    RestrictedRoot,
    SymmetricSpaceSpec,
    branch_radius,
    catalog_get,
    catalog_names,
    invariants,
    j_index,
    load_space,
    reflection_matrix,
    rho,
    rho_norm_sq,
    space_from_dict,
    space_to_dict,
    surface_kind,
    weyl_generate,
)

# |rho|^2, branch radius, Weyl order, parity, entire; hand-derived from the
# root data (rho = 1/2 sum (m + 2 m2) alpha, r = min |alpha| j(m)).
CATALOG_TABLE = {
    "H2": (0.25, 0.5, 2, Parity.ODD, False),
    "H3": (1.0, 2.0, 2, Parity.ODD, True),
    "H4": (2.25, 1.5, 2, Parity.ODD, False),
    "H5": (4.0, 3.0, 2, Parity.ODD, True),
    "H6": (6.25, 2.5, 2, Parity.ODD, False),
    "CH2": (4.0, 2.0, 2, Parity.ODD, False),
    "SL3R": (2.0, math.sqrt(2) / 2, 6, Parity.EVEN, False),
    "SL3C": (8.0, 2 * math.sqrt(2), 6, Parity.EVEN, True),
    "SL4R": (5.0, math.sqrt(2) / 2, 24, Parity.ODD, False),
}


def test_catalog_names_complete():
    assert set(catalog_names()) == set(CATALOG_TABLE)


@pytest.mark.parametrize("name", sorted(CATALOG_TABLE))
def test_catalog_invariants(name):
    rho_sq, r, order, parity, entire = CATALOG_TABLE[name]
    space = catalog_get(name)
    inv = invariants(space)
    assert inv.rho_norm_sq == pytest.approx(rho_sq, rel=1e-14)
    assert inv.branch_radius == pytest.approx(r, rel=1e-14)
    assert inv.parity is parity
    assert inv.parity is (Parity.ODD if space.rank % 2 else Parity.EVEN)
    assert inv.entire_density is entire
    assert inv.rho_norm_sq > 0 and inv.branch_radius > 0
    assert weyl_generate(space).order == order


def test_catalog_examples():
    h2 = catalog_get("H2")
    assert h2.rank == 1 and h2.roots[0].vector == (1.0,) and (h2.roots[0].m, h2.roots[0].m2) == (1, 0)
    h3 = catalog_get("H3")
    assert (h3.roots[0].m, h3.roots[0].m2) == (2, 0)
    ch2 = catalog_get("CH2")
    assert (ch2.roots[0].m, ch2.roots[0].m2) == (2, 1)
    assert np.linalg.norm(rho(h2)) == pytest.approx(0.5)
    assert np.linalg.norm(rho(h3)) == pytest.approx(1.0)
    assert np.linalg.norm(rho(ch2)) == pytest.approx(2.0)


def test_unknown_space():
    with pytest.raises(UnknownSpace):
        catalog_get("nosuch")


def test_j_index():
    assert j_index(1) == 0.5
    assert j_index(2) == 2
    assert j_index(3) == 1.5
    assert j_index(4) == 3


def test_surface_kind_examples():
    assert surface_kind(catalog_get("H3")) == (surface_kind(catalog_get("H5")))
    assert surface_kind(catalog_get("H3")).entire
    assert not surface_kind(catalog_get("SL3R")).entire
    assert surface_kind(catalog_get("SL3R")).parity is Parity.EVEN
    assert surface_kind(catalog_get("SL3C")).entire


@pytest.mark.parametrize("name", sorted(CATALOG_TABLE))
def test_weyl_group_closed_and_reflections_are_involutions(name):
    space = catalog_get(name)
    W = weyl_generate(space)
    assert np.eye(space.rank) in W
    for s in W.generators:
        assert np.allclose(s @ s, np.eye(space.rank))
    for u in W:
        assert np.allclose(u @ u.T, np.eye(space.rank), atol=1e-12)
        for v in W:
            assert u @ v in W


@pytest.mark.parametrize("name", sorted(CATALOG_TABLE))
def test_reflections_permute_root_multiset(name):
    space = catalog_get(name)
    signed = [(s * r.array, r.m, r.m2) for r in space.roots for s in (1, -1)]

    def find(v, m, m2):
        hits = [k for k, (u, mu, mu2) in enumerate(signed) if np.allclose(u, v, atol=1e-12) and (mu, mu2) == (m, m2)]
        assert len(hits) == 1
        return hits[0]

    for r in space.roots:
        s = reflection_matrix(r.array)
        assert np.allclose(s @ r.array, -r.array)
        image = sorted(find(s @ v, m, m2) for v, m, m2 in signed)
        assert image == list(range(len(signed)))


def test_root_validation():
    with pytest.raises(InvalidRootData):
        RestrictedRoot((0.0,), 1)
    with pytest.raises(InvalidRootData):
        RestrictedRoot((1.0,), 1, 1)  # odd m forces m2 = 0
    with pytest.raises(InvalidRootData):
        RestrictedRoot((1.0,), 0)
    with pytest.raises(InvalidRootData):
        SymmetricSpaceSpec("bad", 2, (RestrictedRoot((1.0,), 1),))
    with pytest.raises(InvalidRootData):
        # not crystallographic: 60-degree pair with unequal lengths ratio 3
        SymmetricSpaceSpec("bad", 2, (RestrictedRoot((1.0, 0.0), 1), RestrictedRoot((0.5, 0.3), 1)))
    with pytest.raises(InvalidRootData):
        # different factors must be orthogonal
        SymmetricSpaceSpec(
            "bad", 2, (RestrictedRoot((1.0, 0.0), 1), RestrictedRoot((1.0, 1.0), 1)), ((0,), (1,))
        )


def test_product_space_accepted():
    space = SymmetricSpaceSpec(
        "H2xH3", 2, (RestrictedRoot((1.0, 0.0), 1), RestrictedRoot((0.0, 1.0), 2)), ((0,), (1,))
    )
    assert weyl_generate(space).order == 4
    assert branch_radius(space) == 0.5
    assert rho_norm_sq(space) == pytest.approx(1.25)


def test_closure_overflow_for_non_crystallographic_angles():
    # reflections in lines at an irrational angle generate an infinite group
    a = (1.0, 0.0)
    b = (math.cos(1.0), math.sin(1.0))
    space = SymmetricSpaceSpec.__new__(SymmetricSpaceSpec)
    object.__setattr__(space, "name", "bad")
    object.__setattr__(space, "rank", 2)
    object.__setattr__(space, "roots", (RestrictedRoot(a, 1), RestrictedRoot(b, 1)))
    with pytest.raises(ClosureOverflow):
        weyl_generate(space, bound=500)


def test_custom_space_roundtrip(tmp_path):
    space = catalog_get("SL3C")
    data = space_to_dict(space)
    again = space_from_dict(json.loads(json.dumps(data)))
    assert again == space
    path = tmp_path / "space.json"
    path.write_text(json.dumps(data))
    assert load_space(path) == space


def test_custom_space_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InvalidRootData):
        load_space(bad)
    with pytest.raises(InvalidRootData):
        space_from_dict({"name": "x", "rank": 1})
    with pytest.raises(InvalidRootData):
        space_from_dict({"name": "x", "rank": 1, "roots": [{"m": 1}]})
