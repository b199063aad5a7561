import numpy as np
import pytest

from rackforge.caps import CapExceeded, Caps, set_caps
from rackforge.homology import boundary_matrix, h2_dual, rack_homology, torsion_dual_label
from rackforge.perms import Permutation, alternating_group, symmetric_group
from rackforge.racks import affine, dihedral, from_conjugacy_class, trivial_rack
from rackforge.cocycles import transposition_rack


def dense(M):
    return np.array(M.to_dense(), dtype=np.int64)


@pytest.mark.parametrize("X", [dihedral(3), dihedral(4), affine(5, 2), trivial_rack(3), transposition_rack(4)])
@pytest.mark.parametrize("n", [2, 3])
def test_boundary_squares_to_zero(X, n):
    assert not (dense(boundary_matrix(X, n)) @ dense(boundary_matrix(X, n + 1))).any()


def test_transposed_boundary():
    X = dihedral(3)
    assert (dense(boundary_matrix(X, 3, transpose=True)) == dense(boundary_matrix(X, 3)).T).all()


def test_trivial_rack_homology_is_free():
    # every boundary vanishes on a trivial rack
    for n in (1, 2, 3):
        H = rack_homology(trivial_rack(2), n)
        assert H.betti == 2 ** n and H.torsion == ()


def test_dihedral_three():
    assert str(rack_homology(dihedral(3), 1)) == "Z"
    H = rack_homology(dihedral(3), 2)
    assert (H.betti, H.torsion) == (1, ())


@pytest.mark.parametrize("group,rep,text", [
    (symmetric_group(5), "(0 1)(2 3 4)", "Z + Z/6"),
    (alternating_group(5), "(0 1 2)", "Z + Z/6"),
    (symmetric_group(6), "(0 1)", "Z + Z/2"),
])
def test_small_table_rows(group, rep, text):
    X = from_conjugacy_class(group, Permutation.from_cycles(rep, group.degree))
    assert str(rack_homology(X, 2)) == text


def test_dual_group():
    X = from_conjugacy_class(symmetric_group(5), Permutation.from_cycles("(0 1)(2 3 4)", 5))
    H = rack_homology(X, 2)
    assert h2_dual(H, 6).order == 36
    assert h2_dual(H, 4).order == 8
    assert torsion_dual_label(H) == "C^x x G6"


def test_caps():
    set_caps(Caps(homology_chains=100))
    with pytest.raises(CapExceeded):
        rack_homology(dihedral(5), 2)
